//! Defining data of a model: structure constants, kinetic metric,
//! dissipation and noise tensors, and the invariant measure.

mod file;
mod measure;
mod model;
mod structure;
mod tensors;

pub use file::{
    resolve_model, CurvatureBlock, CylinderSpec, EnsembleBlock, FpkBlock, InstantonBlock,
    MeasureSpec, ModelFile, SimulateBlock,
};
pub use measure::InvariantMeasure;
pub use model::{ModelSpec, VelocityState};
pub use structure::{StructureConstants, JACOBI_TOL};
pub use tensors::{DissipationTensor, KineticMetric, NoiseCovariance, PSD_TOL, SYMMETRY_TOL};
