use crate::error::{Error, Result};

/// Relative tolerance for the Jacobi identity, sized for n^3 summations in f64.
pub const JACOBI_TOL: f64 = 1e-12;

/// Structure constants of a finite-dimensional Lie algebra in a fixed basis.
///
/// `f[a][b][c]` is the coefficient of the c-th generator in the bracket of
/// generators a and b, stored densely (models here are desk-scale, n <= ~20).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    f: Vec<f64>,
}

impl StructureConstants {
    /// All-zero (abelian) structure constants.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            f: vec![0.0; dim * dim * dim],
        })
    }

    /// Build from a list of entries `(a, b, c, value)`, applying the
    /// antisymmetric completion `f[b][a][c] = -value` automatically.
    /// Conflicting duplicate entries are rejected.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut sc = Self::zeros(dim)?;
        let mut touched = vec![false; dim * dim * dim];
        for &(a, b, c, value) in entries {
            if a >= dim || b >= dim || c >= dim {
                return Err(Error::InvalidModel(format!(
                    "structure constant index ({a},{b},{c}) out of range for dim {dim}"
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "f[{a}][{b}][{c}] is not finite"
                )));
            }
            if a == b && value != 0.0 {
                return Err(Error::InvalidModel(format!(
                    "f[{a}][{a}][{c}] must vanish by antisymmetry"
                )));
            }
            for (i, j, v) in [(a, b, value), (b, a, -value)] {
                let idx = sc.index(i, j, c);
                if touched[idx] && sc.f[idx] != v {
                    return Err(Error::InvalidModel(format!(
                        "conflicting entries for f[{i}][{j}][{c}]"
                    )));
                }
                touched[idx] = true;
                sc.f[idx] = v;
            }
        }
        Ok(sc)
    }

    /// Build from a dense `[a][b][c]` array; antisymmetry in (a, b) is required.
    pub fn from_dense(dim: usize, f: Vec<f64>) -> Result<Self> {
        if f.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: f.len(),
            });
        }
        let sc = Self { dim, f };
        sc.check_antisymmetry()?;
        Ok(sc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[self.index(a, b, c)]
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.get(a, b, c) != -self.get(b, a, c) {
                        return Err(Error::InvalidModel(format!(
                            "antisymmetry violated at f[{a}][{b}][{c}]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Maximum absolute violation of the Jacobi identity over all index
    /// quadruples: sum_e f[a][b][e] f[e][c][d] + cyclic in (a, b, c).
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut s = 0.0;
                        for e in 0..n {
                            s += self.get(a, b, e) * self.get(e, c, d)
                                + self.get(b, c, e) * self.get(e, a, d)
                                + self.get(c, a, e) * self.get(e, b, d);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// The trace vector t_b = sum_a f[a][b][a]; zero iff the algebra is unimodular.
    pub fn unimodularity_trace(&self) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|b| (0..n).map(|a| self.get(a, b, a)).sum())
            .collect()
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.unimodularity_trace().iter().all(|t| t.abs() <= tol)
    }

    /// so(3): f[i][j][k] = epsilon_ijk.
    pub fn so3() -> Self {
        let mut sc = Self::zeros(3).unwrap();
        for (a, b, c, v) in [
            (0, 1, 2, 1.0),
            (1, 2, 0, 1.0),
            (2, 0, 1, 1.0),
            (1, 0, 2, -1.0),
            (2, 1, 0, -1.0),
            (0, 2, 1, -1.0),
        ] {
            let idx = sc.index(a, b, c);
            sc.f[idx] = v;
        }
        sc
    }

    /// The 2-d affine algebra of the Poincare half-plane, stored with
    /// f[0][1][1] = -1 so the general drift formula reproduces the flow
    /// dv0/dt = -v1^2, dv1/dt = v0 v1 (the convention whose solutions are
    /// the semicircle geodesics).
    pub fn halfplane() -> Self {
        Self::from_entries(2, &[(0, 1, 1, -1.0)]).unwrap()
    }

    /// Abelian algebra in `dim` dimensions (all brackets vanish).
    pub fn abelian(dim: usize) -> Self {
        Self::zeros(dim).unwrap()
    }

    /// Heisenberg algebra: {e0, e1} = e2, center e2.
    pub fn heisenberg() -> Self {
        Self::from_entries(3, &[(0, 1, 2, 1.0)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Independent Jacobi oracle: the bracket satisfies Jacobi iff
    /// ad_{[a,b]} = [ad_a, ad_b] as matrices, where (ad_x)_{dc} = f[x][c][d].
    /// The entrywise max of the defect equals the quadruple-sum residual.
    fn jacobi_oracle(sc: &StructureConstants) -> f64 {
        let n = sc.dim();
        let ad = |x: usize| {
            DMatrix::from_fn(n, n, |d, c| sc.get(x, c, d))
        };
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut lhs = DMatrix::zeros(n, n);
                for e in 0..n {
                    lhs += ad(e) * sc.get(a, b, e);
                }
                let rhs = ad(a) * ad(b) - ad(b) * ad(a);
                worst = worst.max((lhs - rhs).abs().max());
            }
        }
        worst
    }

    #[test]
    fn builtins_satisfy_jacobi() {
        for sc in [
            StructureConstants::so3(),
            StructureConstants::halfplane(),
            StructureConstants::abelian(1),
            StructureConstants::abelian(4),
            StructureConstants::heisenberg(),
        ] {
            sc.check_antisymmetry().unwrap();
            assert!(sc.jacobi_residual() <= JACOBI_TOL);
            assert!(jacobi_oracle(&sc) <= JACOBI_TOL);
        }
    }

    #[test]
    fn unimodularity_traces() {
        assert_eq!(StructureConstants::so3().unimodularity_trace(), vec![0.0; 3]);
        assert_eq!(
            StructureConstants::abelian(3).unimodularity_trace(),
            vec![0.0; 3]
        );
        assert_eq!(
            StructureConstants::heisenberg().unimodularity_trace(),
            vec![0.0; 3]
        );
        // sum_a f[a][b][a] for the half-plane: t_0 = f[1][0][1] = +1.
        assert_eq!(
            StructureConstants::halfplane().unimodularity_trace(),
            vec![1.0, 0.0]
        );
        assert!(!StructureConstants::halfplane().is_unimodular(1e-12));
    }

    #[test]
    fn rescaling_one_axis_of_so3_is_still_a_lie_algebra() {
        // Brackets {e0,e1} = 1.1 e2, {e1,e2} = e0, {e2,e0} = e1: the Jacobi
        // cyclic sum collapses to brackets of a generator with itself, so it
        // vanishes for any diagonal rescaling.
        let sc = StructureConstants::from_entries(
            3,
            &[(0, 1, 2, 1.1), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
        )
        .unwrap();
        assert!(sc.jacobi_residual() <= JACOBI_TOL);
        assert!(jacobi_oracle(&sc) <= JACOBI_TOL);
    }

    #[test]
    fn skew_perturbation_breaks_jacobi() {
        // {e0,e1} = 0.1 e0 + e2 leaves Jac(e0,e1,e2) = 0.1 {e0,e2} = -0.1 e1,
        // so the residual is exactly 0.1.
        let sc = StructureConstants::from_entries(
            3,
            &[
                (0, 1, 2, 1.0),
                (0, 1, 0, 0.1),
                (1, 2, 0, 1.0),
                (2, 0, 1, 1.0),
            ],
        )
        .unwrap();
        let r = sc.jacobi_residual();
        assert!((r - 0.1).abs() < 1e-15, "residual {r}");
        assert!((jacobi_oracle(&sc) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn conflicting_entries_rejected() {
        let err = StructureConstants::from_entries(2, &[(0, 1, 1, 1.0), (1, 0, 1, 1.0)]);
        assert!(err.is_err());
        let err = StructureConstants::from_entries(2, &[(0, 0, 1, 2.0)]);
        assert!(err.is_err());
    }
}
