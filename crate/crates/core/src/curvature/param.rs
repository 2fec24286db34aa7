use rayon::prelude::*;

use super::{CurvatureResult, Diagnostics, QuadratureSettings};
use crate::error::{Error, Result};
use crate::geom::{polar_anchored_crossings, ray_crossings, BoundaryPoint, Point2, PolarSet2D, RayCrossings, Representation, SetHandle};
use crate::kernelmath::quad::tanh_sinh_angles;
use crate::kernelmath::{disk_value, disk_value_renormalized, pow_m1_over_s, prim_pos};
use crate::scalar::{Compensated, Real};

/// Angles closer than this to the tangent are dropped from the angular rule.
const PHI_MIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Variant {
    /// Principal-value kernels, s ∈ [0, 1).
    Frac,
    /// Integrable kernels, s < 0.
    Riesz,
}

/// Snaps `x` to the boundary point in its angular direction and checks the orientation.
pub(crate) fn anchor<T: Real>(p: &PolarSet2D<T>, x: Point2<T>) -> Result<BoundaryPoint<T>> {
    let theta = (x - p.center()).arg();
    let bp = p.boundary_data(theta);
    let diam = p.diameter();
    let off = (x - bp.point).norm();
    if off > T::lit(1e-9) * diam {
        return Err(Error::NonBoundaryPoint(format!("distance {off} from the boundary")));
    }
    let eps = T::lit(1e-6) * diam;
    if !p.contains(bp.point - bp.normal * eps) || p.contains(bp.point + bp.normal * eps) {
        return Err(Error::NonBoundaryPoint("normal orientation disagrees with membership".into()));
    }
    Ok(bp)
}

#[inline]
fn prim_from<T: Real>(s: T, a: T, b: T) -> T {
    if a == T::zero() {
        -b.powf(-s) / s
    } else {
        prim_pos(s, a, b)
    }
}

fn first_flip<T: Real>(c: &RayCrossings<T>) -> T {
    c.radii.first().copied().unwrap_or(c.rho_max)
}

/// Signed radial sum over an antipodal ray pair.
fn pair_value<T: Real>(variant: Variant, s: T, inward: &RayCrossings<T>, outward: &RayCrossings<T>) -> T {
    let mut acc = Compensated::new();
    match variant {
        Variant::Frac => {
            let cut = first_flip(inward).min(first_flip(outward));
            for ray in [inward, outward] {
                for (a, b, inside) in ray.intervals() {
                    if b <= cut {
                        continue;
                    }
                    let v = prim_pos(s, a.max(cut), b);
                    acc.add(if inside { -v } else { v });
                }
            }
        }
        Variant::Riesz => {
            for ray in [inward, outward] {
                for (a, b, inside) in ray.intervals() {
                    if inside {
                        acc.add(T::lit(-2.0) * prim_from(s, a, b));
                    }
                }
            }
        }
    }
    acc.value()
}

struct Bracket<T> {
    value: T,
    tail: T,
}

/// Analytic part for a compact set: the osculating-disk integral plus the far field.
fn bracket<T: Real>(variant: Variant, s: T, renormalized: bool, sign: T, curv: T, rho_max: T, measure: T) -> Bracket<T> {
    let one = T::one();
    let disk = |f: fn(T, T) -> T| if sign == T::zero() { T::zero() } else { sign * f(s, curv) };
    match (variant, renormalized) {
        (Variant::Frac, false) => {
            let tail = measure * rho_max.powf(-s) / s;
            Bracket { value: disk(disk_value) + (one - sign) * tail, tail }
        }
        (Variant::Frac, true) => {
            let tail = measure * pow_m1_over_s(s, rho_max);
            Bracket { value: disk(disk_value_renormalized) + (one - sign) * tail, tail }
        }
        (Variant::Riesz, false) => Bracket { value: disk(disk_value), tail: T::zero() },
        (Variant::Riesz, true) => {
            Bracket { value: disk(disk_value_renormalized) + (sign - one) * measure / s, tail: T::zero() }
        }
    }
}

/// Core evaluator for the fractional (s ∈ [0,1)) and Riesz (s < 0) kinds.
pub(crate) fn nonlocal<T: Real>(
    variant: Variant,
    s: T,
    renormalized: bool,
    set: &SetHandle<T>,
    x: Point2<T>,
    settings: &QuadratureSettings,
) -> Result<CurvatureResult<T>> {
    let out = match &set.repr {
        Representation::Segment(seg) => {
            let n = seg
                .normal_at(x.x)
                .ok_or_else(|| Error::NonBoundaryPoint(format!("{} is not an endpoint", x.x)))?;
            let l = seg.length();
            let rho_max = settings.rho_max.map(T::lit).unwrap_or(T::lit(3.0) * l);
            let origin = Point2::new(if n > T::zero() { T::zero() } else { -l }, T::zero());
            let compact = SetHandle { repr: set.repr.clone(), complemented: false };
            let inward = ray_crossings(&compact, origin, Point2::new(-n, T::zero()), rho_max)?;
            let outward = ray_crossings(&compact, origin, Point2::new(n, T::zero()), rho_max)?;
            let p = pair_value(variant, s, &inward, &outward);
            let b = bracket(variant, s, renormalized, T::zero(), T::zero(), rho_max, T::lit(2.0));
            let value = p + b.value;
            CurvatureResult {
                value,
                estimated_abs_error: T::lit(64.0) * T::epsilon() * (p.abs() + b.value.abs()),
                diagnostics: Diagnostics {
                    angular_nodes: 2,
                    crossings: inward.radii.len() + outward.radii.len(),
                    tail: b.tail.as_f64(),
                    no_global_flow: false,
                },
            }
        }
        Representation::Polar(p) => polar_nonlocal(variant, s, renormalized, p, x, settings)?,
        Representation::Grid { .. } => {
            return Err(Error::InvalidParameter("grid handles are evaluated with curvature_grid".into()))
        }
    };
    if !set.complemented {
        return Ok(out);
    }
    // The renormalization offset dω_d/s does not flip with the set.
    let mut out = out.negated();
    if renormalized && s != T::zero() {
        let measure = if set.dimension() == 1 { T::lit(2.0) } else { T::lit(2.0) * T::PI() };
        out.value = out.value - T::lit(2.0) * measure / s;
    }
    Ok(out)
}

fn polar_nonlocal<T: Real>(
    variant: Variant,
    s: T,
    renormalized: bool,
    p: &PolarSet2D<T>,
    x: Point2<T>,
    settings: &QuadratureSettings,
) -> Result<CurvatureResult<T>> {
    let bp = anchor(p, x)?;
    let diam = p.diameter();
    let rho_max = settings
        .rho_max
        .map(T::lit)
        .unwrap_or_else(|| T::lit(2.0) * diam + (bp.point - p.center()).norm() + p.bounding_radius());
    let curv = bp.curvature.abs();
    let sign = if curv * diam > T::lit(1e-12) { bp.curvature.signum() } else { T::zero() };
    let nu = bp.normal;
    let tau = nu.perp();
    let (nodes, _) = tanh_sinh_angles(settings.angular_nodes / 2, PHI_MIN);
    let two = T::lit(2.0);

    let samples: Vec<(T, usize)> = nodes
        .par_iter()
        .map(|node| -> Result<(T, usize)> {
            let (c, sn) = if node.phi < 0.5 * std::f64::consts::PI {
                (T::lit(node.phi.cos()), T::lit(node.phi.sin()))
            } else {
                (-T::lit(node.phi_c.cos()), T::lit(node.phi_c.sin()))
            };
            let e = tau * c - nu * sn;
            let inward = polar_anchored_crossings(p, bp.theta, e, true, rho_max)?;
            let outward = polar_anchored_crossings(p, bp.theta, -e, false, rho_max)?;
            let pv = pair_value(variant, s, &inward, &outward);
            let reference = if sign == T::zero() {
                T::zero()
            } else {
                let rho_b = two * sn / curv;
                match variant {
                    Variant::Frac => sign * two * prim_pos(s, rho_b, rho_max),
                    Variant::Riesz => sign * two * rho_b.powf(-s) / s,
                }
            };
            Ok((pv - reference, inward.radii.len() + outward.radii.len()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut fine = Compensated::new();
    let mut coarse = Compensated::new();
    let mut magnitude = T::zero();
    let mut crossings = 0;
    for (k, (node, (d, n))) in nodes.iter().zip(&samples).enumerate() {
        let w = T::lit(node.weight);
        fine.add(w * *d);
        if k % 2 == 0 {
            coarse.add(two * w * *d);
        }
        magnitude = magnitude + (w * *d).abs();
        crossings += n;
    }
    let integral = fine.value();
    let measure = two * T::PI();
    let b = bracket(variant, s, renormalized, sign, curv, rho_max, measure);
    let value = integral + b.value;
    let rounding = T::lit(64.0) * T::epsilon() * (magnitude + b.value.abs());
    Ok(CurvatureResult {
        value,
        estimated_abs_error: (integral - coarse.value()).abs() + rounding,
        diagnostics: Diagnostics {
            angular_nodes: 2 * nodes.len(),
            crossings,
            tail: b.tail.as_f64(),
            no_global_flow: false,
        },
    })
}

/// Fractional curvature H^s, s ∈ (0, 1).
pub fn frac_pv_param<T: Real>(
    s: T,
    set: &SetHandle<T>,
    x: Point2<T>,
    settings: &QuadratureSettings,
) -> Result<CurvatureResult<T>> {
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::InvalidParameter("s must lie in (0,1)".into()));
    }
    nonlocal(Variant::Frac, s, false, set, x, settings)
}

/// Logarithmic curvature H⁰.
pub fn zero_param<T: Real>(set: &SetHandle<T>, x: Point2<T>, settings: &QuadratureSettings) -> Result<CurvatureResult<T>> {
    nonlocal(Variant::Frac, T::zero(), true, set, x, settings)
}

/// Riesz curvature K^s, s ∈ (−d, 0).
pub fn riesz_param<T: Real>(
    s: T,
    set: &SetHandle<T>,
    x: Point2<T>,
    settings: &QuadratureSettings,
) -> Result<CurvatureResult<T>> {
    let d = T::lit(set.dimension() as f64);
    if !(s < T::zero() && s > -d) {
        return Err(Error::InvalidParameter(format!("s must lie in (-{},0)", set.dimension())));
    }
    nonlocal(Variant::Riesz, s, false, set, x, settings)
}
