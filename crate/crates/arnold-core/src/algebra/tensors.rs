use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetry tolerance for the model tensors (~100x f64 round-off).
pub const SYMMETRY_TOL: f64 = 1e-14;
/// Eigenvalue floor for positive-semidefinite tensors.
pub const PSD_TOL: f64 = -1e-14;

fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidModel(format!("{what} must be square")));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "{what} has a non-finite entry"
        )));
    }
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidModel(format!(
                    "{what} is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Inner product G^{ab} defining the kinetic energy E = (1/2) G^{ab} v_a v_b.
/// Symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticMetric {
    g: DMatrix<f64>,
}

impl KineticMetric {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&g, "metric G")?;
        let lo = min_eigenvalue(&g);
        if lo <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "metric G must be positive definite (min eigenvalue {lo:e})"
            )));
        }
        Ok(Self { g })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            g: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            diag,
        )))
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }
}

/// Dissipation tensor Gamma, symmetric positive semidefinite (possibly degenerate).
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationTensor {
    gamma: DMatrix<f64>,
}

impl DissipationTensor {
    pub fn new(gamma: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&gamma, "dissipation Gamma")?;
        let lo = min_eigenvalue(&gamma);
        if lo < PSD_TOL {
            return Err(Error::InvalidModel(format!(
                "dissipation Gamma must be positive semidefinite (min eigenvalue {lo:e})"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            gamma: DMatrix::zeros(dim, dim),
        }
    }

    /// Isotropic dissipation gamma * I.
    pub fn isotropic(dim: usize, gamma: f64) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim) * gamma)
    }

    pub fn dim(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(|&x| x == 0.0)
    }
}

/// Covariance D of the Gaussian white-noise force, symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCovariance {
    d: DMatrix<f64>,
}

impl NoiseCovariance {
    pub fn new(d: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&d, "noise covariance D")?;
        let lo = min_eigenvalue(&d);
        if lo < PSD_TOL {
            return Err(Error::InvalidModel(format!(
                "noise covariance D must be positive semidefinite (min eigenvalue {lo:e})"
            )));
        }
        Ok(Self { d })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            d: DMatrix::zeros(dim, dim),
        }
    }

    pub fn isotropic(dim: usize, d: f64) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim) * d)
    }

    pub fn dim(&self) -> usize {
        self.d.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0.0)
    }
}
