//! Closed-form references and the radius ODE for balls.

use std::f64::consts::PI;

use serde::Serialize;

use crate::curvature::{curvature_eval, minkowski_param, CurvatureKind, QuadratureSettings};
use crate::error::{Error, Result};
use crate::geom::{Point2, SetHandle};
use crate::kernelmath::{mollifier_cf, pow_m1_over_s, sphere_measure, Mollifier};

/// Endpoint curvature of the segment [−L, 0] in d = 1.
pub fn segment_oracle_1d(kind: CurvatureKind, length: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidParameter(format!("segment length {length} must be positive")));
    }
    kind.validate(1)?;
    match kind {
        CurvatureKind::Fractional { s } | CurvatureKind::Riesz { s } => Ok(2.0 * length.powf(-s) / s),
        CurvatureKind::Zero => Ok(-2.0 * length.ln()),
        CurvatureKind::FractionalRenormalized { s } | CurvatureKind::RieszRenormalized { s } => {
            Ok(2.0 * pow_m1_over_s(s, length))
        }
        other => Err(Error::UnsupportedKind(other.label())),
    }
}

/// Speed of a ball of radius ρ, reduced to the unit ball through the scaling laws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallSpeed {
    kind: CurvatureKind,
    d: usize,
    time_scale: f64,
    cache: f64,
}

impl BallSpeed {
    pub fn new(kind: CurvatureKind, d: usize) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::InvalidParameter(format!("ball speeds exist for d = 1, 2, got {d}")));
        }
        kind.validate(d)?;
        let cache = match kind {
            CurvatureKind::Classical | CurvatureKind::Constant { .. } | CurvatureKind::MinkowskiRegularized { .. } => 0.0,
            _ => {
                let (set, x) = unit_ball(d)?;
                curvature_eval(kind, &set, x, &QuadratureSettings::default())?.value
            }
        };
        Ok(Self { kind, d, time_scale: 1.0, cache })
    }

    /// Multiplies every speed by λ > 0 (or any nonzero factor for sign-reversed time).
    pub fn with_time_scale(mut self, lambda: f64) -> Result<Self> {
        if !(lambda != 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("time scale {lambda} must be finite and nonzero")));
        }
        self.time_scale = lambda;
        Ok(self)
    }

    pub fn kind(&self) -> CurvatureKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    /// Curvature of the unit ball, when the kind needs one.
    pub fn unit_value(&self) -> f64 {
        self.cache
    }
}

fn unit_ball(d: usize) -> Result<(SetHandle<f64>, Point2<f64>)> {
    if d == 1 {
        Ok((SetHandle::segment(2.0)?, Point2::new(0.0, 0.0)))
    } else {
        Ok((SetHandle::disk(1.0)?, Point2::new(1.0, 0.0)))
    }
}

/// Curvature of the ball of radius ρ at any boundary point (without the time scale).
pub fn ball_speed(spec: &BallSpeed, rho: f64) -> f64 {
    let d = spec.d;
    let dw = sphere_measure::<f64>(d);
    match spec.kind {
        CurvatureKind::Classical => (d as f64 - 1.0) / rho,
        CurvatureKind::Constant { c } => c,
        CurvatureKind::Fractional { s } | CurvatureKind::Riesz { s } => rho.powf(-s) * spec.cache,
        CurvatureKind::Zero => spec.cache - dw * rho.ln(),
        CurvatureKind::FractionalRenormalized { s } | CurvatureKind::RieszRenormalized { s } => {
            rho.powf(-s) * spec.cache + dw * pow_m1_over_s(s, rho)
        }
        CurvatureKind::MinkowskiRegularized { r } => {
            if d == 2 {
                minkowski_disk(r / rho) / rho
            } else {
                SetHandle::segment(2.0 * rho)
                    .and_then(|set| minkowski_param(r, &set, Point2::new(0.0, 0.0)))
                    .map(|v| v.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }
}

/// Regularized Minkowski curvature of the unit circle at radius q: c_f while the inner
/// ball condition holds for every averaged radius, otherwise I(0, 1/q) + ½I(1/q, 1).
fn minkowski_disk(q: f64) -> f64 {
    if q <= 1.0 {
        return mollifier_cf();
    }
    let f = Mollifier::default();
    f.integral(0.0, 1.0 / q) + 0.5 * f.integral(1.0 / q, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceStatus {
    ReachedT,
    Extinct,
    BlewUp,
}

/// Samples (t, R(t)) of the radius ODE and how it ended.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusTrace {
    pub samples: Vec<(f64, f64)>,
    pub status: TraceStatus,
    /// For extinct traces, an interval containing the extinction time.
    pub extinction_bracket: Option<(f64, f64)>,
}

impl RadiusTrace {
    pub fn final_radius(&self) -> f64 {
        self.samples.last().map(|s| s.1).unwrap_or(f64::NAN)
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().map(|s| s.0).unwrap_or(0.0)
    }

    /// Linear interpolation between samples, `None` outside the sampled window.
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        let k = self.samples.partition_point(|s| s.0 < t);
        if k == self.samples.len() {
            return None;
        }
        let (t1, r1) = self.samples[k];
        if t1 == t {
            return Some(r1);
        }
        if k == 0 {
            return None;
        }
        let (t0, r0) = self.samples[k - 1];
        Some(r0 + (r1 - r0) * (t - t0) / (t1 - t0))
    }
}

/// Radius above which a trace is declared blown up.
pub const BLOW_UP_RADIUS: f64 = 1e6;

/// Classic RK4 for Ṙ = −λ·ball_speed(R) from R₀ over [0, T]. The last step is shortened
/// to land on T.
pub fn ball_ode_evolve(spec: &BallSpeed, r0: f64, t_end: f64, dt: f64) -> Result<RadiusTrace> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!("initial radius {r0} must be positive")));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter("need dt > 0 and T >= 0".into()));
    }
    let lam = spec.time_scale;
    let rate = |r: f64| -lam * ball_speed(spec, r);
    let mut samples = vec![(0.0, r0)];
    let (mut t, mut r) = (0.0, r0);
    let mut n = 0u64;
    let extinct = |t: f64, r: f64, v: f64, samples: Vec<(f64, f64)>| RadiusTrace {
        samples,
        status: TraceStatus::Extinct,
        extinction_bracket: Some((t, t + r / v.max(f64::MIN_POSITIVE))),
    };
    while t < t_end {
        let h = (t_end - t).min(dt);
        let v = -rate(r);
        if v > 0.0 && r - 4.0 * h * v <= 0.0 {
            return Ok(extinct(t, r, v, samples));
        }
        let k1 = rate(r);
        let r2 = r + 0.5 * h * k1;
        let k2 = rate(r2);
        let r3 = r + 0.5 * h * k2;
        let k3 = rate(r3);
        let r4 = r + h * k3;
        if r2 <= 0.0 || r3 <= 0.0 || r4 <= 0.0 {
            return Ok(extinct(t, r, v, samples));
        }
        let k4 = rate(r4);
        let next = r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        n += 1;
        // Accumulating t by repeated addition would drift off T.
        t = if h < dt { t_end } else { (n as f64 * dt).min(t_end) };
        if !(next > 0.0) {
            return Ok(extinct(t, r, v, samples));
        }
        r = next;
        samples.push((t, r));
        if r > BLOW_UP_RADIUS {
            return Ok(RadiusTrace { samples, status: TraceStatus::BlewUp, extinction_bracket: None });
        }
    }
    Ok(RadiusTrace { samples, status: TraceStatus::ReachedT, extinction_bracket: None })
}

/// R₀e^{Kt}: the lower barrier for kinds whose ball speeds satisfy c(ρ) ≥ −Kρ.
pub fn barrier_radius(r0: f64, k: f64, t: f64) -> Result<f64> {
    if !(r0 > 0.0) || !(k >= 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("barrier needs R0 > 0, K >= 0, t >= 0 (got {r0}, {k}, {t})")));
    }
    Ok(r0 * (k * t).exp())
}

/// Circle under Ṙ = −c/R: √(R₀² − 2ct), and 0 once extinct.
pub fn mcf_circle_exact(r0: f64, c: f64, t: f64) -> Result<f64> {
    if !(r0 > 0.0) || !(c > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("need R0 > 0, c > 0, t >= 0 (got {r0}, {c}, {t})")));
    }
    Ok((r0 * r0 - 2.0 * c * t).max(0.0).sqrt())
}

/// dω_d in d = 2, the order-zero limit speed.
pub const ORDER_ZERO_SPEED: f64 = 2.0 * PI;
