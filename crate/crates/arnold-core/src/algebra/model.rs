use nalgebra::{DMatrix, DVector};

use crate::algebra::measure::InvariantMeasure;
use crate::algebra::structure::{StructureConstants, JACOBI_TOL};
use crate::algebra::tensors::{DissipationTensor, KineticMetric, NoiseCovariance};
use crate::error::{Error, Result};

/// Velocity (momentum) coordinates v_a on the Lie algebra.
pub type VelocityState = DVector<f64>;

/// One experiment definition: a Lie algebra plus the three tensors of the
/// dissipative stochastic dynamics and the invariant measure of its ideal part.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: String,
    pub algebra: StructureConstants,
    pub metric: KineticMetric,
    pub dissipation: DissipationTensor,
    pub noise: NoiseCovariance,
    pub measure: InvariantMeasure,
    /// Optional per-coordinate box, used by FPK grids and to keep sample
    /// points away from measure singularities.
    pub domain: Option<Vec<(f64, f64)>>,
}

impl ModelSpec {
    pub fn new(
        name: impl Into<String>,
        algebra: StructureConstants,
        metric: KineticMetric,
        dissipation: DissipationTensor,
        noise: NoiseCovariance,
        measure: InvariantMeasure,
        domain: Option<Vec<(f64, f64)>>,
    ) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            algebra,
            metric,
            dissipation,
            noise,
            measure,
            domain,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Check dimensional consistency, algebraic identities and measure
    /// positivity on the declared domain.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for (what, d) in [
            ("metric", self.metric.dim()),
            ("dissipation", self.dissipation.dim()),
            ("noise", self.noise.dim()),
        ] {
            if d != n {
                return Err(Error::InvalidModel(format!(
                    "{what} is {d}x{d} but the algebra has dimension {n}"
                )));
            }
        }
        self.algebra.check_antisymmetry()?;
        let jac = self.algebra.jacobi_residual();
        if jac > JACOBI_TOL {
            return Err(Error::InvalidModel(format!(
                "Jacobi identity violated (residual {jac:e})"
            )));
        }
        if let InvariantMeasure::PowerLaw {
            coeff,
            powers,
            offset,
        } = &self.measure
        {
            if powers.len() != n {
                return Err(Error::InvalidModel(
                    "measure power list length must equal the dimension".into(),
                ));
            }
            if !coeff.is_finite()
                || !offset.is_finite()
                || powers.iter().any(|p| !p.is_finite())
            {
                return Err(Error::InvalidModel(
                    "measure parameters must be finite".into(),
                ));
            }
        }
        if matches!(self.measure, InvariantMeasure::HalfPlane) && n != 2 {
            return Err(Error::InvalidModel(
                "the half-plane measure is two-dimensional".into(),
            ));
        }
        if let Some(domain) = &self.domain {
            if domain.len() != n {
                return Err(Error::InvalidModel(
                    "domain box length must equal the dimension".into(),
                ));
            }
            for (a, (lo, hi)) in domain.iter().enumerate() {
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::InvalidModel(format!(
                        "domain box for coordinate {a} is empty or non-finite"
                    )));
                }
            }
            // Positivity of mu, probed at the domain center and corners.
            let center: Vec<f64> = domain.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
            if !self.measure.is_regular_at(&center) {
                return Err(Error::MeasureSingular(center));
            }
            for mask in 0..(1usize << n.min(16)) {
                let corner: Vec<f64> = domain
                    .iter()
                    .enumerate()
                    .map(|(a, (lo, hi))| if mask >> a & 1 == 1 { *hi } else { *lo })
                    .collect();
                if !self.measure.is_regular_at(&corner) {
                    return Err(Error::MeasureSingular(corner));
                }
            }
        }
        Ok(())
    }

    fn check_dim(&self, v: &VelocityState) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Kinetic energy E = (1/2) G^{ab} v_a v_b.
    pub fn energy(&self, v: &VelocityState) -> Result<f64> {
        self.check_dim(v)?;
        Ok(self.energy_unchecked(v))
    }

    #[inline]
    pub(crate) fn energy_unchecked(&self, v: &VelocityState) -> f64 {
        0.5 * v.dot(&(self.metric.matrix() * v))
    }

    /// Ideal (geodesic) drift V_a = f[a][b][c] G^{bd} v_c v_d.
    pub fn geodesic_drift(&self, v: &VelocityState) -> Result<VelocityState> {
        self.check_dim(v)?;
        Ok(self.geodesic_drift_unchecked(v))
    }

    #[inline]
    pub(crate) fn geodesic_drift_unchecked(&self, v: &VelocityState) -> VelocityState {
        let n = self.dim();
        let gv = self.metric.matrix() * v;
        let mut out = DVector::zeros(n);
        for a in 0..n {
            let mut s = 0.0;
            for b in 0..n {
                let gvb = gv[b];
                if gvb == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let f = self.algebra.get(a, b, c);
                    if f != 0.0 {
                        s += f * v[c] * gvb;
                    }
                }
            }
            out[a] = s;
        }
        out
    }

    /// Dissipative drift: geodesic drift minus Gamma G v.
    pub fn dissipative_drift(&self, v: &VelocityState) -> Result<VelocityState> {
        self.check_dim(v)?;
        Ok(self.dissipative_drift_unchecked(v))
    }

    #[inline]
    pub(crate) fn dissipative_drift_unchecked(&self, v: &VelocityState) -> VelocityState {
        let mut out = self.geodesic_drift_unchecked(v);
        out -= self.dissipation.matrix() * (self.metric.matrix() * v);
        out
    }

    /// Central-difference estimate of sum_a d[mu V_a]/dv_a with V the geodesic
    /// drift; O(h^2)-small when mu is the invariant measure of the flow.
    pub fn measure_divergence_residual(&self, v: &VelocityState, h: f64) -> Result<f64> {
        self.check_dim(v)?;
        if !(h > 0.0) {
            return Err(Error::InvalidArgument("step h must be positive".into()));
        }
        let n = self.dim();
        let mut total = 0.0;
        for a in 0..n {
            let mut plus = v.clone();
            plus[a] += h;
            let mut minus = v.clone();
            minus[a] -= h;
            for point in [&plus, &minus] {
                if !self.measure.is_regular_at(point.as_slice()) {
                    return Err(Error::MeasureSingular(point.as_slice().to_vec()));
                }
            }
            let fp = self.measure.eval(plus.as_slice()) * self.geodesic_drift_unchecked(&plus)[a];
            let fm = self.measure.eval(minus.as_slice()) * self.geodesic_drift_unchecked(&minus)[a];
            total += (fp - fm) / (2.0 * h);
        }
        Ok(total)
    }

    /// Max-norm violation of the Einstein relation beta D = Gamma.
    pub fn einstein_check(&self, beta: f64) -> f64 {
        let d = self.noise.matrix();
        let g = self.dissipation.matrix();
        (d * beta - g).amax()
    }

    /// Built-in models: `so3`, `halfplane`, `abelian1`, `heisenberg`.
    ///
    /// All carry G = I, Gamma = I and Einstein-matched noise at beta = 1
    /// (the half-plane uses D = I/2, the convention with unit coefficient on
    /// the conjugate momentum in its instanton equations).
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "so3" => Self::new(
                "so3",
                StructureConstants::so3(),
                KineticMetric::identity(3),
                DissipationTensor::isotropic(3, 1.0)?,
                NoiseCovariance::isotropic(3, 1.0)?,
                InvariantMeasure::Constant,
                None,
            ),
            "halfplane" => Self::new(
                "halfplane",
                StructureConstants::halfplane(),
                KineticMetric::identity(2),
                DissipationTensor::isotropic(2, 1.0)?,
                NoiseCovariance::isotropic(2, 0.5)?,
                InvariantMeasure::HalfPlane,
                Some(vec![(-4.0, 4.0), (0.05, 4.0)]),
            ),
            "abelian1" => Self::new(
                "abelian1",
                StructureConstants::abelian(1),
                KineticMetric::identity(1),
                DissipationTensor::isotropic(1, 1.0)?,
                NoiseCovariance::isotropic(1, 1.0)?,
                InvariantMeasure::Constant,
                Some(vec![(-8.0, 8.0)]),
            ),
            "heisenberg" => Self::new(
                "heisenberg",
                StructureConstants::heisenberg(),
                KineticMetric::identity(3),
                DissipationTensor::isotropic(3, 1.0)?,
                NoiseCovariance::isotropic(3, 1.0)?,
                InvariantMeasure::Constant,
                None,
            ),
            other => Err(Error::InvalidArgument(format!(
                "unknown built-in model `{other}` (expected so3, halfplane, abelian1 or heisenberg)"
            ))),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 4] = ["so3", "halfplane", "abelian1", "heisenberg"];

    /// Replace the metric by diag(entries).
    pub fn with_metric_diag(mut self, diag: &[f64]) -> Result<Self> {
        if diag.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: diag.len(),
            });
        }
        self.metric = KineticMetric::from_diagonal(diag)?;
        Ok(self)
    }

    /// Replace the dissipation by gamma * I.
    pub fn with_isotropic_dissipation(mut self, gamma: f64) -> Result<Self> {
        self.dissipation = DissipationTensor::isotropic(self.dim(), gamma)?;
        Ok(self)
    }

    /// Replace the noise covariance by Gamma / beta (Einstein relation).
    pub fn with_einstein_noise(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidArgument("beta must be positive".into()));
        }
        self.noise = NoiseCovariance::new(self.dissipation.matrix() / beta)?;
        Ok(self)
    }

    /// Replace the noise covariance.
    pub fn with_noise(mut self, d: DMatrix<f64>) -> Result<Self> {
        if d.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: d.nrows(),
            });
        }
        self.noise = NoiseCovariance::new(d)?;
        Ok(self)
    }

    /// Replace the dissipation tensor.
    pub fn with_dissipation(mut self, gamma: DMatrix<f64>) -> Result<Self> {
        if gamma.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: gamma.nrows(),
            });
        }
        self.dissipation = DissipationTensor::new(gamma)?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(parts: &[f64]) -> VelocityState {
        DVector::from_row_slice(parts)
    }

    #[test]
    fn energy_examples() {
        let hp = ModelSpec::builtin("halfplane").unwrap();
        assert_eq!(hp.energy(&v(&[0.0, 1.0])).unwrap(), 0.5);
        assert_eq!(hp.energy(&v(&[0.0, 0.0])).unwrap(), 0.0);

        let m = ModelSpec::builtin("so3")
            .unwrap()
            .with_metric_diag(&[1.0, 2.0, 3.0])
            .unwrap();
        assert_eq!(m.energy(&v(&[1.0, 1.0, 1.0])).unwrap(), 3.0);
        assert!(m.energy(&v(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn energy_is_even() {
        let m = ModelSpec::builtin("so3")
            .unwrap()
            .with_metric_diag(&[1.0, 2.0, 3.0])
            .unwrap();
        let x = v(&[0.3, -1.2, 2.5]);
        assert_eq!(m.energy(&x).unwrap(), m.energy(&(-x.clone())).unwrap());
    }

    #[test]
    fn halfplane_geodesic_drift_matches_displayed_flow() {
        let hp = ModelSpec::builtin("halfplane").unwrap();
        for (v0, v1) in [(0.3, 1.7), (-1.1, 0.4), (2.0, 2.0)] {
            let d = hp.geodesic_drift(&v(&[v0, v1])).unwrap();
            assert_relative_eq!(d[0], -v1 * v1, max_relative = 1e-15);
            assert_relative_eq!(d[1], v0 * v1, max_relative = 1e-15);
        }
    }

    #[test]
    fn abelian_drift_vanishes() {
        let m = ModelSpec::builtin("abelian1").unwrap();
        assert_eq!(m.geodesic_drift(&v(&[2.5])).unwrap()[0], 0.0);
    }

    #[test]
    fn so3_drift_is_rigid_body_form() {
        // With G = diag(G1,G2,G3) the drift is ((G2-G3)L2L3, (G3-G1)L3L1, (G1-G2)L1L2).
        let (g1, g2, g3) = (1.0, 2.0, 3.5);
        let m = ModelSpec::builtin("so3")
            .unwrap()
            .with_metric_diag(&[g1, g2, g3])
            .unwrap();
        let l = v(&[0.7, -1.3, 0.9]);
        let d = m.geodesic_drift(&l).unwrap();
        assert_relative_eq!(d[0], (g2 - g3) * l[1] * l[2], max_relative = 1e-14);
        assert_relative_eq!(d[1], (g3 - g1) * l[2] * l[0], max_relative = 1e-14);
        assert_relative_eq!(d[2], (g1 - g2) * l[0] * l[1], max_relative = 1e-14);
    }

    #[test]
    fn dissipative_drift_examples() {
        // Gamma = 0 reduces to the geodesic drift.
        let free = ModelSpec::builtin("halfplane")
            .unwrap()
            .with_isotropic_dissipation(0.0)
            .unwrap();
        let x = v(&[0.5, 1.5]);
        assert_eq!(
            free.dissipative_drift(&x).unwrap(),
            free.geodesic_drift(&x).unwrap()
        );

        // Abelian with Gamma = gamma I is pure linear decay.
        let ou = ModelSpec::builtin("abelian1")
            .unwrap()
            .with_isotropic_dissipation(0.7)
            .unwrap();
        assert_relative_eq!(
            ou.dissipative_drift(&v(&[2.0])).unwrap()[0],
            -1.4,
            max_relative = 1e-15
        );

        // Half-plane with gamma: (-gamma v0 - v1^2, -gamma v1 + v0 v1).
        let hp = ModelSpec::builtin("halfplane").unwrap();
        let d = hp.dissipative_drift(&x).unwrap();
        assert_relative_eq!(d[0], -0.5 - 1.5 * 1.5, max_relative = 1e-15);
        assert_relative_eq!(d[1], -1.5 + 0.5 * 1.5, max_relative = 1e-15);
    }

    #[test]
    fn measure_divergence_vanishes_for_invariant_measures() {
        let so3 = ModelSpec::builtin("so3").unwrap();
        let r = so3
            .measure_divergence_residual(&v(&[1.0, 2.0, 3.0]), 1e-4)
            .unwrap();
        assert!(r.abs() < 1e-6, "so3 residual {r}");

        let hp = ModelSpec::builtin("halfplane").unwrap();
        let r = hp
            .measure_divergence_residual(&v(&[0.5, 1.5]), 1e-4)
            .unwrap();
        assert!(r.abs() < 1e-6, "halfplane residual {r}");
    }

    #[test]
    fn wrong_measure_is_detected() {
        // Forcing mu = 1 on the half-plane leaves div V = v0 uncancelled.
        let mut hp = ModelSpec::builtin("halfplane").unwrap();
        hp.measure = InvariantMeasure::Constant;
        let r = hp
            .measure_divergence_residual(&v(&[0.5, 1.5]), 1e-4)
            .unwrap();
        assert_relative_eq!(r, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn singularity_near_stencil_is_an_error() {
        let hp = ModelSpec::builtin("halfplane").unwrap();
        let err = hp.measure_divergence_residual(&v(&[0.0, 5e-5]), 1e-4);
        assert!(matches!(err, Err(Error::MeasureSingular(_))));
    }

    #[test]
    fn einstein_check_examples() {
        let m = ModelSpec::builtin("so3").unwrap(); // Gamma = D = I
        assert_eq!(m.einstein_check(1.0), 0.0);

        let m2 = m.clone().with_einstein_noise(2.0).unwrap(); // D = I/2
        assert_eq!(m2.einstein_check(2.0), 0.0);

        // Gamma = I, D = diag(1, 2), beta = 1 -> violation 1.
        let mut hp = ModelSpec::builtin("halfplane").unwrap();
        hp = hp
            .with_noise(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]))
            .unwrap();
        assert_eq!(hp.einstein_check(1.0), 1.0);
    }

    #[test]
    fn builtin_validation() {
        for name in ModelSpec::BUILTIN_NAMES {
            ModelSpec::builtin(name).unwrap().validate().unwrap();
        }
        assert!(ModelSpec::builtin("nope").is_err());
    }
}
