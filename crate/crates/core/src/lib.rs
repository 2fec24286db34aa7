//! Nonlocal curvature functionals, the level-set flows they drive, and
//! convergence sweeps toward their local and limiting counterparts.
//!
//! Geometry and the parametric evaluators are generic over [`Real`]; the grid solver,
//! the oracles and the sweeps work in `f64`. The aliases below name the `f64` forms.

// `!(x > 0.0)` is how NaN gets rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod curvature;
pub mod error;
pub mod flow;
pub mod geom;
pub mod kernelmath;
pub mod oracles;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point = geom::Point2<f64>;
pub type Set = geom::SetHandle<f64>;
pub type PolarSet = geom::PolarSet2D<f64>;
pub type Segment = geom::Segment1D<f64>;
pub type Field = geom::GridField<f64>;
pub type Curvature = curvature::CurvatureResult<f64>;
