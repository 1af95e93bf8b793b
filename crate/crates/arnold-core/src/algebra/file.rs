use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::algebra::measure::InvariantMeasure;
use crate::algebra::model::ModelSpec;
use crate::algebra::structure::StructureConstants;
use crate::algebra::tensors::{DissipationTensor, KineticMetric, NoiseCovariance};
use crate::error::{Error, Result};

/// On-disk experiment definition: the model tensors plus optional per-command
/// parameter blocks. Unknown keys are rejected.
///
/// ```toml
/// name = "halfplane"
/// dim = 2
/// f = [[0, 1, 1, -1.0]]            # entries [a, b, c, value], antisymmetric completion applied
/// G = [[1.0, 0.0], [0.0, 1.0]]
/// Gamma = [[1.0, 0.0], [0.0, 1.0]]
/// D = [[0.5, 0.0], [0.0, 0.5]]
/// measure = "halfplane"            # or "constant", or { powers = [0.0, -1.0] }
/// domain = [[-4.0, 4.0], [0.05, 4.0]]
/// ```
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default)]
    pub f: Vec<(usize, usize, usize, f64)>,
    #[serde(rename = "G")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Gamma")]
    pub dissipation: Option<Vec<Vec<f64>>>,
    #[serde(rename = "D")]
    pub noise: Option<Vec<Vec<f64>>>,
    pub measure: Option<MeasureSpec>,
    pub domain: Option<Vec<(f64, f64)>>,
    pub seed: Option<u64>,
    pub simulate: Option<SimulateBlock>,
    pub ensemble: Option<EnsembleBlock>,
    pub fpk: Option<FpkBlock>,
    pub instanton: Option<InstantonBlock>,
    pub curvature: Option<CurvatureBlock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Named(String),
    PowerLaw {
        #[serde(default = "default_coeff")]
        coeff: f64,
        powers: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
}

fn default_coeff() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateBlock {
    pub v0: Option<Vec<f64>>,
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    pub dissipative: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleBlock {
    pub v0: Option<Vec<f64>>,
    pub dt: Option<f64>,
    pub burn_in: Option<f64>,
    pub samples: Option<usize>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
    pub chains: Option<usize>,
    pub allow_naive_measure: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpkBlock {
    /// Per-coordinate (min, max, cells).
    pub grid: Option<Vec<(f64, f64, usize)>>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    pub budget: Option<usize>,
    /// "linear" (dissipation only), "full", or "auto".
    pub drift: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstantonBlock {
    pub from: Option<Vec<f64>>,
    pub to: Option<Vec<f64>>,
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    /// Extra initial guesses for w(0), tried after the default.
    pub guesses: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureBlock {
    pub metric: Option<Vec<f64>>,
    pub cylinder: Option<CylinderSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderSpec {
    pub r: f64,
    pub h: f64,
    pub m: f64,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ModelFile(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    fn matrix(&self, field: &Option<Vec<Vec<f64>>>, what: &str) -> Result<Option<DMatrix<f64>>> {
        let Some(rows) = field else { return Ok(None) };
        let n = self.dim;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ModelFile(format!("{what} must be {n}x{n}")));
        }
        Ok(Some(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    /// Convert to a validated model. Missing tensors default to G = I,
    /// Gamma = 0, D = 0 and the constant measure.
    pub fn to_model(&self) -> Result<ModelSpec> {
        let n = self.dim;
        let algebra = StructureConstants::from_entries(n, &self.f)?;
        let metric = match self.matrix(&self.metric, "G")? {
            Some(m) => KineticMetric::new(m)?,
            None => KineticMetric::identity(n),
        };
        let dissipation = match self.matrix(&self.dissipation, "Gamma")? {
            Some(m) => DissipationTensor::new(m)?,
            None => DissipationTensor::zero(n),
        };
        let noise = match self.matrix(&self.noise, "D")? {
            Some(m) => NoiseCovariance::new(m)?,
            None => NoiseCovariance::zero(n),
        };
        let measure = match &self.measure {
            None => InvariantMeasure::Constant,
            Some(MeasureSpec::Named(name)) => match name.as_str() {
                "constant" => InvariantMeasure::Constant,
                "halfplane" => InvariantMeasure::HalfPlane,
                other => {
                    return Err(Error::ModelFile(format!(
                        "unknown measure `{other}` (expected constant, halfplane or a power-law table)"
                    )))
                }
            },
            Some(MeasureSpec::PowerLaw {
                coeff,
                powers,
                offset,
            }) => InvariantMeasure::PowerLaw {
                coeff: *coeff,
                powers: powers.clone(),
                offset: *offset,
            },
        };
        ModelSpec::new(
            self.name.clone().unwrap_or_else(|| "model".into()),
            algebra,
            metric,
            dissipation,
            noise,
            measure,
            self.domain.clone(),
        )
    }
}

/// Resolve a model reference: a built-in name or a path to a model file.
pub fn resolve_model(reference: &str) -> Result<(ModelSpec, Option<ModelFile>)> {
    if ModelSpec::BUILTIN_NAMES.contains(&reference) {
        return Ok((ModelSpec::builtin(reference)?, None));
    }
    let path = Path::new(reference);
    if path.exists() {
        let file = ModelFile::load(path)?;
        return Ok((file.to_model()?, Some(file)));
    }
    Err(Error::InvalidArgument(format!(
        "`{reference}` is neither a built-in model nor an existing file"
    )))
}
