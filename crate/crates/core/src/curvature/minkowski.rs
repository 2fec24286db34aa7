use super::param::anchor;
use super::{CurvatureResult, Diagnostics};
use crate::error::{Error, Result};
use crate::geom::{BoundaryPoint, Point2, PolarSet2D, Representation, SetHandle};
use crate::kernelmath::Mollifier;
use crate::scalar::Real;

const BOUNDARY_SAMPLES: usize = 2048;
const DISTANCE_TOL: f64 = 1e-6;

struct Sampled<'a> {
    set: &'a PolarSet2D<f64>,
    thetas: Vec<f64>,
    points: Vec<Point2<f64>>,
}

impl<'a> Sampled<'a> {
    fn new(set: &'a PolarSet2D<f64>) -> Self {
        let thetas: Vec<f64> =
            (0..BOUNDARY_SAMPLES).map(|k| 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64).collect();
        let points = thetas.iter().map(|&t| set.boundary_data(t).point).collect();
        Self { set, thetas, points }
    }

    fn distance_at(&self, y: Point2<f64>, t: f64) -> f64 {
        let c = self.set.center();
        (c + Point2::polar(t) * self.set.radius(t) - y).norm()
    }

    /// Distance from `y` to the boundary: sampled minimum refined around the best local minima.
    fn boundary_distance(&self, y: Point2<f64>) -> f64 {
        let n = self.points.len();
        let d: Vec<f64> = self.points.iter().map(|p| (*p - y).norm()).collect();
        let mut minima: Vec<usize> =
            (0..n).filter(|&k| d[k] <= d[(k + n - 1) % n] && d[k] <= d[(k + 1) % n]).collect();
        minima.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
        let step = self.thetas[1] - self.thetas[0];
        let mut best = d.iter().cloned().fold(f64::INFINITY, f64::min);
        for &k in minima.iter().take(4) {
            let (mut a, mut b) = (self.thetas[k] - step, self.thetas[k] + step);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let mut c = b - g * (b - a);
            let mut e = a + g * (b - a);
            let (mut fc, mut fe) = (self.distance_at(y, c), self.distance_at(y, e));
            for _ in 0..80 {
                if fc < fe {
                    b = e;
                    e = c;
                    fe = fc;
                    c = b - g * (b - a);
                    fc = self.distance_at(y, c);
                } else {
                    a = c;
                    c = e;
                    fc = fe;
                    e = a + g * (b - a);
                    fe = self.distance_at(y, e);
                }
            }
            best = best.min(fc.min(fe));
        }
        best
    }

    fn exterior_holds(&self, bp: &BoundaryPoint<f64>, rho: f64) -> bool {
        let y = bp.point + bp.normal * rho;
        !self.set.contains(y) && self.boundary_distance(y) >= rho * (1.0 - DISTANCE_TOL)
    }

    fn interior_holds(&self, bp: &BoundaryPoint<f64>, rho: f64) -> bool {
        let y = bp.point - bp.normal * rho;
        self.set.contains(y) && self.boundary_distance(y) >= rho * (1.0 - DISTANCE_TOL)
    }
}

fn sup_radius<F: Fn(f64) -> bool>(holds: F, r: f64) -> Option<f64> {
    if holds(r) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, r);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Largest radii up to `r` for which the exterior and interior ball conditions hold at
/// the boundary point; `None` means the condition holds on all of (0, r].
pub fn switch_radii(set: &PolarSet2D<f64>, bp: &BoundaryPoint<f64>, r: f64) -> (Option<f64>, Option<f64>) {
    let sampled = Sampled::new(set);
    (
        sup_radius(|rho| sampled.exterior_holds(bp, rho), r),
        sup_radius(|rho| sampled.interior_holds(bp, rho), r),
    )
}

/// ∫_0^b (−σ f′(σ)) dσ = −b f(b) + ∫_0^b f.
fn moment(m: &Mollifier, b: f64) -> f64 {
    if b >= 1.0 {
        return m.cf();
    }
    -b * m.value(b) + m.integral(0.0, b)
}

/// Mollified average of κ^ou + κ^in given the fractions σ_o, σ_i ∈ [0, 1] of (0, r]
/// on which the exterior and interior conditions hold.
fn assemble(m: &Mollifier, r: f64, curvature: f64, sigma_out: f64, sigma_in: f64, det_depends: bool) -> f64 {
    let jump = (m.value(sigma_in) - m.value(sigma_out)) / (2.0 * r);
    if det_depends {
        jump + 0.5 * curvature * (moment(m, sigma_out) + moment(m, sigma_in))
    } else {
        jump
    }
}

/// Regularized Minkowski curvature κ^f_r with the standard bump.
pub fn minkowski_param<T: Real>(r: T, set: &SetHandle<T>, x: Point2<T>) -> Result<CurvatureResult<T>> {
    let rf = r.as_f64();
    if !(rf > 0.0) {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let m = Mollifier::default();
    let value = match &set.repr {
        Representation::Segment(seg) => {
            seg.normal_at(x.x).ok_or_else(|| Error::NonBoundaryPoint(format!("{} is not an endpoint", x.x)))?;
            let l = seg.length().as_f64();
            let sigma_in = (0.5 * l / rf).min(1.0);
            assemble(&m, rf, 0.0, 1.0, sigma_in, false)
        }
        Representation::Polar(p) => {
            let bp_t = anchor(p, x)?;
            let pf = p.cast::<f64>()?;
            let bp = pf.boundary_data(bp_t.theta.as_f64());
            let (out, inn) = switch_radii(&pf, &bp, rf);
            let sigma_out = out.map_or(1.0, |v| v / rf);
            let sigma_in = inn.map_or(1.0, |v| v / rf);
            assemble(&m, rf, bp.curvature, sigma_out, sigma_in, true)
        }
        Representation::Grid { .. } => return Err(Error::UnsupportedOnGrid { kind: "minkowski".into() }),
    };
    let value = if set.complemented { -value } else { value };
    Ok(CurvatureResult {
        value: T::lit(value),
        estimated_abs_error: T::lit(1e-12 * (1.0 + value.abs())),
        diagnostics: Diagnostics { angular_nodes: 0, crossings: 0, tail: 0.0, no_global_flow: false },
    })
}
