use std::io::{Read, Write};
use std::path::Path;

use super::point::Point2;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_EXTENT_RATIO: f64 = 1024.0;
const MAGIC: &[u8; 4] = b"NLCF";

/// Uniform cell-centred field, constant (= `far`) on the two outermost layers.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    origin: Point2<T>,
    h: T,
    nx: usize,
    ny: usize,
    values: Vec<T>,
    far: T,
}

impl<T: Real> GridField<T> {
    /// `origin` is the centre of cell (0, 0); values are row-major, `values[iy * nx + ix]`.
    pub fn new(origin: Point2<T>, h: T, nx: usize, ny: usize, values: Vec<T>, far: T) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("grid spacing {h} must be positive")));
        }
        if nx < 5 || ny < 5 || values.len() != nx * ny {
            return Err(Error::InvalidParameter(format!(
                "grid {nx}x{ny} with {} values is malformed",
                values.len()
            )));
        }
        if !far.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("grid values must be finite".into()));
        }
        let field = Self { origin, h, nx, ny, values, far };
        for iy in 0..ny {
            for ix in 0..nx {
                if field.is_frame(ix, iy) && field.get(ix, iy) != far {
                    return Err(Error::InvalidParameter(format!(
                        "cell ({ix},{iy}) on the outer layers differs from the far constant"
                    )));
                }
            }
        }
        Ok(field)
    }

    pub fn origin(&self) -> Point2<T> {
        self.origin
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn far(&self) -> T {
        self.far
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> T {
        self.values[iy * self.nx + ix]
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// True on the two outermost cell layers.
    #[inline]
    pub fn is_frame(&self, ix: usize, iy: usize) -> bool {
        ix < 2 || iy < 2 || ix + 2 >= self.nx || iy + 2 >= self.ny
    }

    pub fn position(&self, ix: usize, iy: usize) -> Point2<T> {
        Point2::new(
            self.origin.x + self.h * T::lit(ix as f64),
            self.origin.y + self.h * T::lit(iy as f64),
        )
    }

    /// Bilinear interpolation; the far constant outside the cell-centre hull.
    pub fn interpolate(&self, p: Point2<T>) -> T {
        let fx = (p.x - self.origin.x) / self.h;
        let fy = (p.y - self.origin.y) / self.h;
        let last_x = T::lit((self.nx - 1) as f64);
        let last_y = T::lit((self.ny - 1) as f64);
        if !(fx >= T::zero() && fy >= T::zero() && fx <= last_x && fy <= last_y) {
            return self.far;
        }
        let ix = fx.floor().to_usize().unwrap_or(0).min(self.nx - 2);
        let iy = fy.floor().to_usize().unwrap_or(0).min(self.ny - 2);
        let tx = fx - T::lit(ix as f64);
        let ty = fy - T::lit(iy as f64);
        let one = T::one();
        let v00 = self.get(ix, iy);
        let v10 = self.get(ix + 1, iy);
        let v01 = self.get(ix, iy + 1);
        let v11 = self.get(ix + 1, iy + 1);
        (one - ty) * ((one - tx) * v00 + tx * v10) + ty * ((one - tx) * v01 + tx * v11)
    }

    /// Same geometry with new values; the frame is forced to the far constant.
    pub fn with_values(&self, mut values: Vec<T>, far: T) -> Result<Self> {
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if self.is_frame(ix, iy) {
                    values[iy * self.nx + ix] = far;
                }
            }
        }
        Self::new(self.origin, self.h, self.nx, self.ny, values, far)
    }

    pub fn map<F: Fn(T) -> T>(&self, f: F) -> Result<Self> {
        Self::new(self.origin, self.h, self.nx, self.ny, self.values.iter().map(|&v| f(v)).collect(), f(self.far))
    }
}

/// Named initial conditions for `grid_sample`. Radial profiles are oriented by the
/// sign of the far constant: the disk is the sublevel set when `far > 0` and the
/// superlevel set when `far < 0`; the zero level is the circle (or ellipse) itself.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// Signed distance to a circle, capped at the far constant.
    Circle { radius: f64, center: (f64, f64) },
    /// slope·(signed distance), capped.
    Cone { radius: f64, slope: f64, center: (f64, f64) },
    /// far·sin(π t/2) with t = (|x − c| − R)/width clamped to [−1, 1].
    SmoothDisk { radius: f64, width: f64, center: (f64, f64) },
    /// min(a, b)·(√((x/a)² + (y/b)²) − 1), capped.
    Ellipse { a: f64, b: f64, center: (f64, f64) },
    /// Base profile translated by an integer number of cells.
    Shifted { base: Box<Profile>, shift: (i64, i64) },
}

impl Profile {
    pub fn circle(radius: f64) -> Self {
        Profile::Circle { radius, center: (0.0, 0.0) }
    }

    fn eval(&self, x: f64, y: f64, far: f64) -> f64 {
        let orient = |d: f64| if far >= 0.0 { d.min(far) } else { (-d).max(far) };
        match self {
            Profile::Circle { radius, center } => orient((x - center.0).hypot(y - center.1) - radius),
            Profile::Cone { radius, slope, center } => {
                orient(slope * ((x - center.0).hypot(y - center.1) - radius))
            }
            Profile::SmoothDisk { radius, width, center } => {
                let t = (((x - center.0).hypot(y - center.1) - radius) / width).clamp(-1.0, 1.0);
                far * (0.5 * std::f64::consts::PI * t).sin()
            }
            Profile::Ellipse { a, b, center } => {
                let (u, v) = ((x - center.0) / a, (y - center.1) / b);
                orient(a.min(*b) * (u.hypot(v) - 1.0))
            }
            Profile::Shifted { .. } => unreachable!("shifts are resolved on indices"),
        }
    }

    fn resolve(&self) -> (&Profile, (i64, i64)) {
        match self {
            Profile::Shifted { base, shift } => {
                let (inner, s) = base.resolve();
                (inner, (s.0 + shift.0, s.1 + shift.1))
            }
            p => (p, (0, 0)),
        }
    }
}

/// Samples `profile` on the cell centres of [−A, A]² with spacing h.
pub fn grid_sample(extent: f64, h: f64, profile: &Profile, far: f64) -> Result<GridField<f64>> {
    if !(extent > 0.0) || !(h > 0.0) || !far.is_finite() {
        return Err(Error::InvalidParameter(format!("need extent > 0, h > 0, got {extent}, {h}")));
    }
    let ratio = extent / h;
    if ratio > MAX_EXTENT_RATIO {
        return Err(Error::GridTooLarge { ratio, limit: MAX_EXTENT_RATIO });
    }
    let n = (2.0 * ratio).round() as usize;
    if n < 8 {
        return Err(Error::InvalidParameter(format!("grid of {n} cells per side is too small")));
    }
    let (base, shift) = profile.resolve();
    let coord = |i: i64| -extent + (i as f64 + 0.5) * h;
    let mut values = Vec::with_capacity(n * n);
    for iy in 0..n as i64 {
        for ix in 0..n as i64 {
            values.push(base.eval(coord(ix - shift.0), coord(iy - shift.1), far));
        }
    }
    let origin = Point2::new(coord(0), coord(0));
    let proto = GridField { origin, h, nx: n, ny: n, values: Vec::new(), far };
    proto.with_values(values, far)
}

pub fn write_grid(path: &Path, field: &GridField<f64>) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode_grid(field))?;
    Ok(())
}

pub fn read_grid(path: &Path) -> Result<GridField<f64>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_grid(&bytes)
}

pub fn encode_grid(field: &GridField<f64>) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(field.nx as u32).to_le_bytes());
    buf.extend_from_slice(&(field.ny as u32).to_le_bytes());
    for v in [field.h, field.origin.x, field.origin.y, field.far] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for v in &field.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

pub fn decode_grid(bytes: &[u8]) -> Result<GridField<f64>> {
    if bytes.len() < 44 || &bytes[..4] != MAGIC {
        return Err(Error::GridFormat("missing NLCF header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let (nx, ny) = (u32_at(4), u32_at(8));
    let (h, ox, oy, far) = (f64_at(12), f64_at(20), f64_at(28), f64_at(36));
    let expected = 44 + 8 * nx * ny;
    if bytes.len() != expected {
        return Err(Error::GridFormat(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let values = (0..nx * ny).map(|i| f64_at(44 + 8 * i)).collect();
    GridField::new(Point2::new(ox, oy), h, nx, ny, values, far)
        .map_err(|e| Error::GridFormat(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_profile_basics() {
        let f = grid_sample(2.0, 0.02, &Profile::circle(1.0), 0.5).unwrap();
        assert_eq!(f.dims(), (200, 200));
        let v = f.interpolate(Point2::new(1.0, 0.0));
        assert!(v.abs() < 1e-3);
        let c = f.get(100, 100);
        assert!(f.values().iter().all(|&x| x >= c - 1e-12));
    }

    #[test]
    fn integer_shift_is_exact() {
        let base = Profile::Cone { radius: 0.7, slope: 1.3, center: (0.1, -0.2) };
        let f = grid_sample(2.0, 0.05, &base, 0.4).unwrap();
        let g = grid_sample(2.0, 0.05, &Profile::Shifted { base: Box::new(base), shift: (3, -2) }, 0.4).unwrap();
        let (nx, ny) = f.dims();
        for iy in 4..ny - 4 {
            for ix in 5..nx - 5 {
                assert_eq!(g.get(ix, iy), f.get(ix - 3, iy + 2));
            }
        }
    }

    #[test]
    fn too_large_and_roundtrip() {
        assert!(matches!(
            grid_sample(2.0, 0.001, &Profile::circle(1.0), 0.5),
            Err(Error::GridTooLarge { .. })
        ));
        let f = grid_sample(1.0, 0.1, &Profile::circle(0.5), -0.3).unwrap();
        let back = decode_grid(&encode_grid(&f)).unwrap();
        assert_eq!(back, f);
        assert!(decode_grid(b"NOPE").is_err());
    }
}
