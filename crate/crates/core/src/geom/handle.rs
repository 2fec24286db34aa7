use super::grid::GridField;
use super::point::Point2;
use super::polar::PolarSet2D;
use super::segment::Segment1D;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_CROSSINGS: usize = 64;
pub const RAY_STEPS_PER_DIAMETER: f64 = 256.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Representation<T> {
    Segment(Segment1D<T>),
    Polar(PolarSet2D<T>),
    Grid { field: GridField<T>, level: T },
}

/// A compact set, or the closure of its complement when `complemented` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct SetHandle<T> {
    pub repr: Representation<T>,
    pub complemented: bool,
}

impl<T: Real> SetHandle<T> {
    pub fn segment(length: T) -> Result<Self> {
        Ok(Self { repr: Representation::Segment(Segment1D::new(length)?), complemented: false })
    }

    pub fn polar(set: PolarSet2D<T>) -> Self {
        Self { repr: Representation::Polar(set), complemented: false }
    }

    pub fn disk(radius: T) -> Result<Self> {
        Ok(Self::polar(PolarSet2D::disk(Point2::new(T::zero(), T::zero()), radius)?))
    }

    pub fn grid(field: GridField<T>, level: T) -> Result<Self> {
        let (nx, ny) = field.dims();
        let frame_inside = field.far() >= level;
        for iy in 0..ny {
            for ix in 0..nx {
                if field.is_frame(ix, iy) && (field.get(ix, iy) >= level) != frame_inside {
                    return Err(Error::InvalidSet("superlevel set reaches the grid frame".into()));
                }
            }
        }
        Ok(Self { repr: Representation::Grid { field, level }, complemented: false })
    }

    pub fn complement(mut self) -> Self {
        self.complemented = !self.complemented;
        self
    }

    pub fn dimension(&self) -> usize {
        match self.repr {
            Representation::Segment(_) => 1,
            _ => 2,
        }
    }

    /// Diameter of the compact part (an upper bound for polar sets).
    pub fn diameter(&self) -> T {
        match &self.repr {
            Representation::Segment(s) => s.length(),
            Representation::Polar(p) => p.diameter(),
            Representation::Grid { field, .. } => {
                let (nx, ny) = field.dims();
                field.h() * T::lit(((nx * nx + ny * ny) as f64).sqrt())
            }
        }
    }

    fn contains_compact(&self, p: Point2<T>) -> bool {
        match &self.repr {
            Representation::Segment(s) => s.contains(p.x),
            Representation::Polar(set) => set.contains(p),
            Representation::Grid { field, level } => field.interpolate(p) >= *level,
        }
    }

    /// Membership; for 1-D sets only `p.x` is used.
    pub fn contains(&self, p: Point2<T>) -> bool {
        self.contains_compact(p) != self.complemented
    }
}

/// Ordered membership flips along a ray, with the phase of each interval.
#[derive(Clone, Debug, PartialEq)]
pub struct RayCrossings<T> {
    pub radii: Vec<T>,
    /// `inside[k]` is the membership on the k-th interval; one more entry than `radii`.
    pub inside: Vec<bool>,
    pub rho_max: T,
}

impl<T: Real> RayCrossings<T> {
    /// (a, b, inside) for each interval partitioning (0, ρ_max].
    pub fn intervals(&self) -> impl Iterator<Item = (T, T, bool)> + '_ {
        (0..self.inside.len()).map(move |k| {
            let a = if k == 0 { T::zero() } else { self.radii[k - 1] };
            let b = if k < self.radii.len() { self.radii[k] } else { self.rho_max };
            (a, b, self.inside[k])
        })
    }

    fn complemented(mut self) -> Self {
        for f in &mut self.inside {
            *f = !*f;
        }
        self
    }
}

/// Locates a phase flip in (lo, hi] to full working precision.
fn bisect<T: Real, F: Fn(T) -> bool>(phase: &F, mut lo: T, mut hi: T, lo_phase: bool) -> T {
    let two = T::lit(2.0);
    let eps = T::epsilon() * T::lit(4.0);
    loop {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi || hi - lo <= eps * hi {
            break;
        }
        if phase(mid) == lo_phase {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / two
}

/// Samples a phase function on a uniform step then refines each flip.
pub(crate) fn scan_phases<T: Real, F: Fn(T) -> bool>(
    phase: F,
    initial: bool,
    step: T,
    limit: T,
    rho_max: T,
) -> Result<RayCrossings<T>> {
    let mut radii = Vec::new();
    let mut inside = vec![initial];
    let mut cur = initial;
    let mut lo = T::zero();
    let n = (limit / step).ceil().to_usize().unwrap_or(0).max(1);
    for k in 1..=n {
        let rho = if k == n { limit } else { step * T::lit(k as f64) };
        let p = phase(rho);
        if p != cur {
            radii.push(bisect(&phase, lo, rho, cur));
            if radii.len() > MAX_CROSSINGS {
                return Err(Error::CrossingOverflow { limit: MAX_CROSSINGS });
            }
            cur = p;
            inside.push(cur);
        }
        lo = rho;
    }
    if limit < rho_max && cur {
        radii.push(limit);
        inside.push(false);
    }
    Ok(RayCrossings { radii, inside, rho_max })
}

/// Distance along the ray after which it stays outside the disk of radius `r` about `c`.
fn exit_distance<T: Real>(origin: Point2<T>, dir: Point2<T>, c: Point2<T>, r: T) -> T {
    let w = origin - c;
    let b = w.dot(dir);
    let disc = b * b - (w.dot(w) - r * r);
    if disc <= T::zero() {
        return T::zero();
    }
    (disc.sqrt() - b).max(T::zero())
}

/// Anchored phase function for a ray leaving the boundary point at angle θ₀, using
/// cancellation-free increments so phases are reliable close to the anchor.
pub(crate) fn anchored_gap<T: Real>(set: &PolarSet2D<T>, theta0: T, dir: Point2<T>) -> impl Fn(T) -> T + '_ {
    let r0 = set.radius(theta0);
    let u0 = Point2::polar(theta0);
    let eu = dir.dot(u0);
    let ev = dir.dot(u0.perp());
    let two = T::lit(2.0);
    move |rho: T| {
        let along = r0 + rho * eu;
        let across = rho * ev;
        let wn = along.hypot(across);
        let radial = rho * (two * r0 * eu + rho) / (wn + r0);
        let delta = across.atan2(along);
        (radial - set.profile().increment(theta0, delta)) / rho
    }
}

pub(crate) fn polar_anchored_crossings<T: Real>(
    set: &PolarSet2D<T>,
    theta0: T,
    dir: Point2<T>,
    initial_inside: bool,
    rho_max: T,
) -> Result<RayCrossings<T>> {
    let gap = anchored_gap(set, theta0, dir);
    let x = set.boundary_data(theta0).point;
    let limit = exit_distance(x, dir, set.center(), set.bounding_radius()).min(rho_max);
    let step = set.diameter() / T::lit(RAY_STEPS_PER_DIAMETER);
    if limit <= T::zero() {
        return Ok(RayCrossings { radii: vec![], inside: vec![initial_inside], rho_max });
    }
    scan_phases(|rho| gap(rho) <= T::zero(), initial_inside, step, limit, rho_max)
}

fn segment_crossings<T: Real>(seg: &Segment1D<T>, x: T, d: T, rho_max: T) -> RayCrossings<T> {
    let l = seg.length();
    let mut radii = Vec::new();
    for b in [-l, T::zero()] {
        let rho = (b - x) / d;
        if rho > T::zero() && rho <= rho_max {
            radii.push(rho);
        }
    }
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let probe = |a: T, b: T| seg.contains(x + d * T::lit(0.5) * (a + b));
    let mut inside = Vec::with_capacity(radii.len() + 1);
    let mut prev = T::zero();
    for &r in &radii {
        inside.push(probe(prev, r));
        prev = r;
    }
    inside.push(probe(prev, rho_max));
    RayCrossings { radii, inside, rho_max }
}

/// Membership flips of `origin + ρ·dir` for ρ ∈ (0, ρ_max].
pub fn ray_crossings<T: Real>(
    set: &SetHandle<T>,
    origin: Point2<T>,
    dir: Point2<T>,
    rho_max: T,
) -> Result<RayCrossings<T>> {
    if !(rho_max > T::zero()) || !rho_max.is_finite() {
        return Err(Error::InvalidParameter(format!("rho_max {rho_max} must be positive and finite")));
    }
    let out = match &set.repr {
        Representation::Segment(seg) => {
            if dir.x == T::zero() {
                return Err(Error::InvalidParameter("1-D rays need a nonzero direction".into()));
            }
            segment_crossings(seg, origin.x, dir.x.signum(), rho_max)
        }
        Representation::Polar(p) => {
            let theta = (origin - p.center()).arg();
            let gap = p.gap(origin);
            let tol = T::lit(1e-9) * p.diameter();
            if gap.abs() <= tol {
                let tiny = p.diameter() * T::lit(1e-7);
                let g = anchored_gap(p, theta, dir);
                let mut initial = g(tiny) <= T::zero();
                let first = g(tiny);
                if first == T::zero() {
                    initial = p.contains(origin + dir * tiny);
                }
                polar_anchored_crossings(p, theta, dir, initial, rho_max)?
            } else {
                let limit = exit_distance(origin, dir, p.center(), p.bounding_radius()).min(rho_max);
                let step = p.diameter() / T::lit(RAY_STEPS_PER_DIAMETER);
                let initial = p.contains(origin);
                if limit <= T::zero() {
                    RayCrossings { radii: vec![], inside: vec![initial], rho_max }
                } else {
                    scan_phases(|rho| p.contains(origin + dir * rho), initial, step, limit, rho_max)?
                }
            }
        }
        Representation::Grid { field, level } => {
            let step = field.h() / T::lit(4.0);
            let initial = field.interpolate(origin + dir * (step * T::lit(1e-3))) >= *level;
            let (nx, ny) = field.dims();
            let span = field.h() * T::lit((nx + ny) as f64);
            scan_phases(|rho| field.interpolate(origin + dir * rho) >= *level, initial, step, rho_max.min(span), rho_max)?
        }
    };
    Ok(if set.complemented { out.complemented() } else { out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_chords() {
        let d = SetHandle::<f64>::disk(1.0).unwrap();
        let x = Point2::new(1.0, 0.0);
        let c = ray_crossings(&d, x, Point2::new(-1.0, 0.0), 4.0).unwrap();
        assert_eq!(c.radii.len(), 1);
        assert!((c.radii[0] - 2.0).abs() < 1e-14);
        assert_eq!(c.inside, vec![true, false]);
        let c = ray_crossings(&d, x, Point2::new(1.0, 0.0), 4.0).unwrap();
        assert!(c.radii.is_empty());
        assert_eq!(c.inside, vec![false]);
    }

    #[test]
    fn complement_flips_phases() {
        let d = SetHandle::<f64>::disk(1.0).unwrap();
        let x = Point2::new(1.0, 0.0);
        let e = Point2::new(-0.6, 0.8);
        let a = ray_crossings(&d, x, e, 4.0).unwrap();
        let b = ray_crossings(&d.clone().complement(), x, e, 4.0).unwrap();
        assert_eq!(a.radii, b.radii);
        assert!(a.inside.iter().zip(&b.inside).all(|(p, q)| p != q));
    }

    #[test]
    fn segment_rays() {
        let s = SetHandle::segment(2.0).unwrap();
        let c = ray_crossings(&s, Point2::new(0.0, 0.0), Point2::new(-1.0, 0.0), 6.0).unwrap();
        assert_eq!(c.radii, vec![2.0]);
        assert_eq!(c.inside, vec![true, false]);
    }
}
