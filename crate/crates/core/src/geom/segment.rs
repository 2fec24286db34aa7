use crate::error::{Error, Result};
use crate::scalar::Real;

/// The interval [−L, 0] on the line; its boundary points are 0 and −L.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment1D<T> {
    length: T,
}

impl<T: Real> Segment1D<T> {
    pub fn new(length: T) -> Result<Self> {
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidSet(format!("segment length {length} must be positive")));
        }
        Ok(Self { length })
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn contains(&self, x: T) -> bool {
        x >= -self.length && x <= T::zero()
    }

    /// Outward normal (±1) at a boundary point, `None` elsewhere.
    pub fn normal_at(&self, x: T) -> Option<T> {
        let tol = T::lit(1e-9) * self.length;
        if x.abs() <= tol {
            Some(T::one())
        } else if (x + self.length).abs() <= tol {
            Some(-T::one())
        } else {
            None
        }
    }

    pub fn scaled(&self, k: T) -> Result<Self> {
        Self::new(self.length * k)
    }
}
