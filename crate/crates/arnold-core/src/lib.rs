//! A numerical laboratory for finite-dimensional Euler-Arnold fluid models:
//! geodesic and dissipative flows on a Lie algebra, Langevin sampling of the
//! randomly forced dynamics, a measure-corrected Fokker-Planck-Kramers grid
//! solver, rigid-body curvature analysis and WKB instanton machinery.

// `!(x > 0.0)` guards reject NaN along with the out-of-range values;
// `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod fpk;
pub mod instanton;
pub mod langevin;
mod util;

pub use algebra::{
    InvariantMeasure, ModelSpec, StructureConstants, VelocityState,
};
pub use error::{Error, Result};
