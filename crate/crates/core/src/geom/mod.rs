//! Set representations, membership and ray queries, grid sampling and front extraction.

mod contour;
mod dsl;
mod grid;
mod handle;
mod point;
mod polar;
mod segment;

pub use contour::{extract_front, Contour, MIN_CONTOUR_POINTS};
pub use dsl::parse_set;
pub use grid::{decode_grid, encode_grid, grid_sample, read_grid, write_grid, GridField, Profile, MAX_EXTENT_RATIO};
pub(crate) use handle::polar_anchored_crossings;
pub use handle::{ray_crossings, RayCrossings, Representation, SetHandle, MAX_CROSSINGS, RAY_STEPS_PER_DIAMETER};
pub use point::Point2;
pub use polar::{BoundaryPoint, PolarSet2D, RadialProfile, MAX_HARMONICS};
pub use segment::Segment1D;

use crate::scalar::Real;

/// Point, outward normal and classical curvature at angle θ.
pub fn boundary_data<T: Real>(set: &PolarSet2D<T>, theta: T) -> BoundaryPoint<T> {
    set.boundary_data(theta)
}
