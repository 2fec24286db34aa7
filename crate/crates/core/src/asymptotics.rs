//! Parameter sweeps toward the limiting curvatures and flows, and axiom checks.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_eval, CurvatureKind, QuadratureSettings};
use crate::error::{Error, Result};
use crate::flow::{flow_run, FlowConfig};
use crate::geom::{grid_sample, parse_set, Point2, PolarSet2D, Profile, RadialProfile, Representation, Segment1D, SetHandle};
use crate::kernelmath::{mollifier_cf, sphere_measure, unit_ball_volume};
use crate::oracles::{ball_ode_evolve, ball_speed, mcf_circle_exact, BallSpeed};

pub const MIN_PARAMS: usize = 4;
/// Amplitude of the radial bump applied to the n-th set (n counted from 1).
pub const PERTURBATION: f64 = 1e-2;

/// Which limit a sweep approaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMode {
    SToZeroOrder0,
    SToZeroOrder1,
    SToOne,
    RieszOrder0,
    RieszOrder1,
    MinkowskiToZero,
}

impl LimitMode {
    pub const ALL: [LimitMode; 6] = [
        LimitMode::SToZeroOrder0,
        LimitMode::SToZeroOrder1,
        LimitMode::SToOne,
        LimitMode::RieszOrder0,
        LimitMode::RieszOrder1,
        LimitMode::MinkowskiToZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitMode::SToZeroOrder0 => "s_to_zero_order0",
            LimitMode::SToZeroOrder1 => "s_to_zero_order1",
            LimitMode::SToOne => "s_to_one",
            LimitMode::RieszOrder0 => "riesz_order0",
            LimitMode::RieszOrder1 => "riesz_order1",
            LimitMode::MinkowskiToZero => "minkowski_to_zero",
        }
    }

    /// Curvature evaluated for parameter p.
    pub fn kind(self, p: f64) -> CurvatureKind {
        match self {
            LimitMode::SToZeroOrder0 | LimitMode::SToOne => CurvatureKind::Fractional { s: p },
            LimitMode::SToZeroOrder1 => CurvatureKind::FractionalRenormalized { s: p },
            LimitMode::RieszOrder0 => CurvatureKind::Riesz { s: p },
            LimitMode::RieszOrder1 => CurvatureKind::RieszRenormalized { s: p },
            LimitMode::MinkowskiToZero => CurvatureKind::MinkowskiRegularized { r: p },
        }
    }

    /// Factor applied to the curvature before comparing with the limit.
    pub fn scale(self, p: f64) -> f64 {
        match self {
            LimitMode::SToZeroOrder0 | LimitMode::RieszOrder0 => p,
            LimitMode::SToOne => 1.0 - p,
            _ => 1.0,
        }
    }

    /// Time scale of the rescaled flows. Riesz curvatures of balls are negative, so the
    /// order-0 Riesz flow runs with −s and expands toward speed −dω_d.
    pub fn time_scale(self, p: f64) -> f64 {
        match self {
            LimitMode::RieszOrder0 => -p,
            _ => self.scale(p),
        }
    }

    /// Distance of p from the limit.
    pub fn distance(self, p: f64) -> f64 {
        match self {
            LimitMode::SToOne => 1.0 - p,
            _ => p.abs(),
        }
    }

    /// Checks range and strict monotonicity toward the limit.
    pub fn validate_params(self, params: &[f64]) -> Result<()> {
        if params.len() < MIN_PARAMS {
            return Err(Error::InvalidParameter(format!(
                "a sweep needs at least {MIN_PARAMS} parameters, got {}",
                params.len()
            )));
        }
        let (lo, hi) = match self {
            LimitMode::SToZeroOrder0 | LimitMode::SToZeroOrder1 | LimitMode::SToOne => (0.0, 1.0),
            LimitMode::RieszOrder0 | LimitMode::RieszOrder1 => (-2.0, 0.0),
            LimitMode::MinkowskiToZero => (0.0, f64::INFINITY),
        };
        if let Some(p) = params.iter().find(|&&p| !(p > lo && p < hi)) {
            return Err(Error::InvalidParameter(format!("parameter {p} outside ({lo}, {hi}) for {}", self.name())));
        }
        if params.windows(2).any(|w| !(self.distance(w[1]) < self.distance(w[0]))) {
            return Err(Error::InvalidParameter(format!(
                "parameters must approach the {} limit strictly monotonically",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LimitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LimitMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sweep mode '{s}'")))
    }
}

/// A curvature sweep, or the rescaled flows whose limit is the same curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Curvature(LimitMode),
    FlowLimit(LimitMode),
}

impl SweepMode {
    pub fn limit(self) -> LimitMode {
        match self {
            SweepMode::Curvature(m) | SweepMode::FlowLimit(m) => m,
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepMode::Curvature(m) => write!(f, "{m}"),
            SweepMode::FlowLimit(m) => write!(f, "flow:{m}"),
        }
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    /// `s_to_one` or `flow:s_to_one`.
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("flow:") {
            Some(inner) => Ok(SweepMode::FlowLimit(inner.parse()?)),
            None => Ok(SweepMode::Curvature(s.parse()?)),
        }
    }
}

/// How a flow-limit row is computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Ode { dt: f64 },
    Grid { h: f64, extent: f64, narrow_band: Option<usize>, cutoff: f64 },
}

impl Tier {
    pub fn name(&self) -> &'static str {
        match self {
            Tier::Ode { .. } => "ode",
            Tier::Grid { .. } => "grid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    /// A set in the `parse_set` syntax and the boundary point at angle θ (polar sets)
    /// or the endpoint 0 (segments).
    Boundary { set: String, theta: f64 },
    /// A circle evolved until `t_star`.
    Circle { radius: f64, t_star: f64, tier: Tier },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub params: Vec<f64>,
    pub target: SweepTarget,
}

impl SweepSpec {
    pub fn curvature(mode: LimitMode, params: Vec<f64>, set: &str, theta: f64) -> Self {
        Self { mode: SweepMode::Curvature(mode), params, target: SweepTarget::Boundary { set: set.into(), theta } }
    }

    pub fn flow(mode: LimitMode, params: Vec<f64>, radius: f64, t_star: f64, tier: Tier) -> Self {
        Self { mode: SweepMode::FlowLimit(mode), params, target: SweepTarget::Circle { radius, t_star, tier } }
    }

    pub fn validate(&self) -> Result<()> {
        let mode = self.mode.limit();
        mode.validate_params(&self.params)?;
        match (&self.mode, &self.target) {
            (SweepMode::Curvature(_), SweepTarget::Boundary { set, theta }) => {
                let handle = parse_set(set)?;
                if matches!(handle.repr, Representation::Grid { .. }) {
                    return Err(Error::InvalidParameter("curvature sweeps need a segment or polar set".into()));
                }
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter("boundary angle must be finite".into()));
                }
                Ok(())
            }
            (SweepMode::FlowLimit(_), SweepTarget::Circle { radius, t_star, tier }) => {
                if !(*radius > 0.0 && radius.is_finite() && *t_star > 0.0 && t_star.is_finite()) {
                    return Err(Error::InvalidParameter("flow limits need radius > 0 and t* > 0".into()));
                }
                match tier {
                    Tier::Ode { dt } if !(*dt > 0.0 && *dt <= *t_star) => {
                        Err(Error::InvalidParameter(format!("ODE step {dt} must lie in (0, t*]")))
                    }
                    Tier::Grid { .. } if mode == LimitMode::MinkowskiToZero => {
                        Err(Error::UnsupportedOnGrid { kind: "minkowski".into() })
                    }
                    Tier::Grid { .. } if self.params.iter().any(|p| !(0.1..=0.6).contains(&mode.distance(*p))) => {
                        Err(Error::InvalidParameter("grid-tier flow limits use exponents with |s| in [0.1, 0.6]".into()))
                    }
                    _ => Ok(()),
                }
            }
            _ => Err(Error::InvalidParameter(format!("target does not match mode {}", self.mode))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub param: f64,
    pub measured: f64,
    pub reference: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub spec: SweepSpec,
    pub rows: Vec<Row>,
    /// Least-squares slope of log(error) against log(distance to the limit), last three rows.
    pub fitted_exponent: Option<f64>,
    /// abs_error strictly decreasing over the last three rows.
    pub monotone: bool,
}

impl ConvergenceTable {
    pub const CSV_HEADER: &'static str = "n,param,measured,reference,abs_error";

    fn new(spec: SweepSpec, rows: Vec<Row>) -> Self {
        let tail = &rows[rows.len().saturating_sub(3)..];
        let monotone = tail.windows(2).all(|w| w[1].abs_error < w[0].abs_error);
        let mode = spec.mode.limit();
        let pts: Vec<(f64, f64)> = tail.iter().map(|r| (mode.distance(r.param).ln(), r.abs_error.ln())).collect();
        let fitted_exponent = least_squares(&pts).map(|(slope, _)| slope).filter(|e| e.is_finite());
        Self { spec, rows, fitted_exponent, monotone }
    }

    pub fn tier(&self) -> Option<&'static str> {
        match &self.spec.target {
            SweepTarget::Circle { tier, .. } => Some(tier.name()),
            SweepTarget::Boundary { .. } => None,
        }
    }

    /// `NonMonotoneErrors` unless the final errors strictly decrease.
    pub fn check(&self) -> Result<()> {
        if self.monotone {
            Ok(())
        } else {
            Err(Error::NonMonotoneErrors)
        }
    }

    pub fn last(&self) -> &Row {
        self.rows.last().expect("tables have rows")
    }

    /// Intercept at distance 0 of the straight line through the last three measurements.
    pub fn extrapolated_limit(&self) -> Option<f64> {
        let mode = self.spec.mode.limit();
        let tail = &self.rows[self.rows.len().saturating_sub(3)..];
        let pts: Vec<(f64, f64)> = tail.iter().map(|r| (mode.distance(r.param), r.measured)).collect();
        least_squares(&pts).map(|(_, intercept)| intercept)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{:?},{:?},{:?},{:?}\n", r.n, r.param, r.measured, r.reference, r.abs_error));
        }
        out
    }

    /// Sidecar with the spec, tier, fitted exponent, extrapolated limit and pass flag.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": self.spec,
            "tier": self.tier(),
            "fitted_exponent": self.fitted_exponent,
            "extrapolated_limit": self.extrapolated_limit(),
            "pass": self.monotone,
        })
    }

    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(&self.sidecar()).expect("plain data serializes")
    }
}

/// (slope, intercept) of the least-squares line; `None` for fewer than two points.
fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Returns the candidate within `rel_tol` of `value`, closest first.
pub fn match_constant<'a>(value: f64, candidates: &[(&'a str, f64)], rel_tol: f64) -> Option<(&'a str, f64)> {
    candidates
        .iter()
        .filter(|(_, c)| (value - c).abs() <= rel_tol * c.abs())
        .min_by(|a, b| (value - a.1).abs().total_cmp(&(value - b.1).abs()))
        .copied()
}

/// E_n: the n-th set bulged outward by a radial bump of amplitude 10⁻²/n that leaves the
/// boundary point (and its normal) fixed. Segments are lengthened away from the endpoint 0.
pub fn perturbed_set(set: &SetHandle<f64>, x: Point2<f64>, n: usize) -> Result<SetHandle<f64>> {
    let amp = PERTURBATION / n as f64;
    let repr = match &set.repr {
        Representation::Segment(seg) => Representation::Segment(Segment1D::new(seg.length() + amp)?),
        Representation::Polar(p) => Representation::Polar(p.perturbed(amp, (x - p.center()).arg())?),
        Representation::Grid { .. } => return Err(Error::InvalidParameter("grid sets are not perturbed".into())),
    };
    Ok(SetHandle { repr, complemented: set.complemented })
}

fn boundary_point(set: &SetHandle<f64>, theta: f64) -> Point2<f64> {
    match &set.repr {
        Representation::Polar(p) => p.boundary_data(theta).point,
        _ => Point2::new(0.0, 0.0),
    }
}

/// Limit value at the boundary point of the unperturbed set.
fn curvature_reference(mode: LimitMode, set: &SetHandle<f64>, x: Point2<f64>, settings: &QuadratureSettings) -> Result<f64> {
    let d = set.dimension();
    let classical = || curvature_eval(CurvatureKind::Classical, set, x, settings).map(|r| r.value);
    Ok(match mode {
        LimitMode::SToZeroOrder0 | LimitMode::RieszOrder0 => sphere_measure::<f64>(d),
        LimitMode::SToZeroOrder1 | LimitMode::RieszOrder1 => curvature_eval(CurvatureKind::Zero, set, x, settings)?.value,
        LimitMode::SToOne => unit_ball_volume::<f64>(d - 1) * classical()?,
        LimitMode::MinkowskiToZero => mollifier_cf() * classical()?,
    })
}

/// One row per parameter: the rescaled curvature of E_n at x against its limit on E.
pub fn sweep_curvature_limit(spec: &SweepSpec) -> Result<ConvergenceTable> {
    spec.validate()?;
    let (SweepMode::Curvature(mode), SweepTarget::Boundary { set, theta }) = (spec.mode, &spec.target) else {
        return Err(Error::InvalidParameter("curvature sweeps need a boundary target".into()));
    };
    let set = parse_set(set)?;
    let x = boundary_point(&set, *theta);
    let settings = QuadratureSettings::default();
    let reference = curvature_reference(mode, &set, x, &settings)?;
    let rows = spec
        .params
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let n = i + 1;
            let en = perturbed_set(&set, x, n)?;
            let value = curvature_eval(mode.kind(p), &en, x, &settings)?.value;
            let measured = mode.scale(p) * value;
            Ok(Row { n, param: p, measured, reference, abs_error: (measured - reference).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::new(spec.clone(), rows))
}

/// Radius at t* of the limit flow started from a circle of radius `r0`.
pub fn flow_limit_reference(mode: LimitMode, r0: f64, t_star: f64, dt: f64) -> Result<f64> {
    let two_pi = 2.0 * PI;
    match mode {
        LimitMode::SToZeroOrder0 => Ok(r0 - two_pi * t_star),
        LimitMode::RieszOrder0 => Ok(r0 + two_pi * t_star),
        LimitMode::SToOne => mcf_circle_exact(r0, unit_ball_volume::<f64>(1), t_star),
        LimitMode::MinkowskiToZero => mcf_circle_exact(r0, mollifier_cf(), t_star),
        LimitMode::SToZeroOrder1 | LimitMode::RieszOrder1 => {
            ode_radius(&BallSpeed::new(CurvatureKind::Zero, 2)?, r0, t_star, dt)
        }
    }
}

fn ode_radius(speed: &BallSpeed, r0: f64, t_star: f64, dt: f64) -> Result<f64> {
    let trace = ball_ode_evolve(speed, r0, t_star, dt)?;
    trace
        .radius_at(t_star)
        .filter(|r| r.is_finite() && *r > 0.0)
        .ok_or_else(|| Error::InvalidParameter(format!("the ball does not survive until t* = {t_star}")))
}

/// Rescaled flows of a circle against the limit flow, one row per parameter.
pub fn flow_limit_experiment(spec: &SweepSpec) -> Result<ConvergenceTable> {
    spec.validate()?;
    let (SweepMode::FlowLimit(mode), SweepTarget::Circle { radius, t_star, tier }) = (spec.mode, &spec.target) else {
        return Err(Error::InvalidParameter("flow limits need a circle target".into()));
    };
    let (r0, t_star) = (*radius, *t_star);
    let ref_dt = match tier {
        Tier::Ode { dt } => *dt,
        Tier::Grid { .. } => t_star / 500.0,
    };
    let reference = flow_limit_reference(mode, r0, t_star, ref_dt)?;
    let row = |i: usize, p: f64| -> Result<Row> {
        let kind = mode.kind(p);
        let lambda = mode.time_scale(p);
        let measured = match tier {
            Tier::Ode { dt } => ode_radius(&BallSpeed::new(kind, 2)?.with_time_scale(lambda)?, r0, t_star, *dt)?,
            Tier::Grid { h, extent, narrow_band, cutoff } => {
                let u0 = grid_sample(*extent, *h, &Profile::circle(r0), -0.5)?;
                let config = FlowConfig {
                    kind,
                    time_scale: lambda,
                    cutoff: *cutoff,
                    stop_time: t_star,
                    snapshot_interval: t_star / 5.0,
                    narrow_band: *narrow_band,
                    ..Default::default()
                };
                let trace = flow_run(u0, &config)?;
                trace
                    .radius_at(t_star)
                    .ok_or_else(|| Error::InvalidParameter(format!("the front does not survive until t* = {t_star}")))?
            }
        };
        Ok(Row { n: i + 1, param: p, measured, reference, abs_error: (measured - reference).abs() })
    };
    // Grid rows are parallel internally; ODE rows are cheap enough to share the pool.
    let rows = match tier {
        Tier::Ode { .. } => spec.params.par_iter().enumerate().map(|(i, &p)| row(i, p)).collect::<Result<Vec<_>>>()?,
        Tier::Grid { .. } => spec.params.iter().enumerate().map(|(i, &p)| row(i, p)).collect::<Result<Vec<_>>>()?,
    };
    Ok(ConvergenceTable::new(spec.clone(), rows))
}

/// Outcome of the randomized axiom checks for one kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub kind: CurvatureKind,
    pub seed: u64,
    pub trials: usize,
    /// H(x, E) ≥ H(x, F) for tangent pairs E ⊆ F.
    pub monotonicity: bool,
    pub translation: bool,
    /// H(x, E) = −H(x, closure of the complement).
    pub symmetry: bool,
    /// Smallest K with c(ρ) ≥ −Kρ over the scanned radii.
    pub ball_k: f64,
    /// Log-log slope of −c(ρ) on [2, 8] when the ball speed is negative there.
    pub blow_down_exponent: Option<f64>,
    /// −c(ρ) grows faster than ρ, so no linear barrier holds for large balls.
    pub superlinear: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.monotonicity && self.translation && self.symmetry
    }
}

pub const BALL_SCAN: (f64, f64) = (0.25, 8.0);
const SCAN_POINTS: usize = 257;
const AXIOM_TOL: f64 = 1e-7;
/// Lower end of the radii used for the blow-down fit.
const GROWTH_FROM: f64 = 2.0;

fn random_set(rng: &mut ChaCha8Rng) -> Result<PolarSet2D<f64>> {
    let harmonics = (0..3).map(|_| (rng.gen_range(-0.04..0.04), rng.gen_range(-0.04..0.04))).collect();
    let profile = RadialProfile { a0: rng.gen_range(0.8..1.2), harmonics, ellipse: None };
    PolarSet2D::new(Point2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)), profile)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= AXIOM_TOL * (1.0 + scale.abs())
}

/// Randomized checks of monotonicity, translation invariance and complement symmetry on
/// smooth star-shaped sets, plus a ball-speed scan for the linear lower barrier.
pub fn axiom_property_check(kind: CurvatureKind, seed: u64, trials: usize) -> Result<AxiomReport> {
    kind.validate(2)?;
    let settings = QuadratureSettings::default();
    let eval = |set: &SetHandle<f64>, x: Point2<f64>| curvature_eval(kind, set, x, &settings).map(|r| r.value);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let (mut mono, mut trans, mut sym) = (true, true, true);
    for trial in 0..trials {
        let e = random_set(&mut rng)?;
        let theta = rng.gen_range(0.0..2.0 * PI);
        let amp = rng.gen_range(0.05..0.3);
        let shift = Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let x = e.boundary_data(theta).point;
        let h_e = eval(&SetHandle::polar(e.clone()), x)?;

        let outer = eval(&SetHandle::polar(e.perturbed(amp, theta)?), x)?;
        let inner = eval(&SetHandle::polar(e.perturbed(-amp, theta)?), x)?;
        let slack = AXIOM_TOL * (1.0 + h_e.abs());
        if outer > h_e + slack || inner < h_e - slack {
            mono = false;
            failures.push(format!("trial {trial}: monotonicity {inner} >= {h_e} >= {outer} violated"));
        }

        let moved = eval(&SetHandle::polar(e.translated(shift)?), x + shift)?;
        if !close(moved, h_e, h_e) {
            trans = false;
            failures.push(format!("trial {trial}: translation changed {h_e} to {moved}"));
        }

        let comp = eval(&SetHandle::polar(e).complement(), x)?;
        if !close(comp, -h_e, h_e) {
            sym = false;
            failures.push(format!("trial {trial}: complement gives {comp}, expected {}", -h_e));
        }
    }

    let speed = BallSpeed::new(kind, 2)?;
    let (lo, hi) = BALL_SCAN;
    let ratio = |rho: f64| -ball_speed(&speed, rho) / rho;
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| lo * (hi / lo).powf(i as f64 / (SCAN_POINTS - 1) as f64))
        .collect();
    let (imax, _) = grid
        .iter()
        .enumerate()
        .max_by(|a, b| ratio(*a.1).total_cmp(&ratio(*b.1)))
        .expect("scan is not empty");
    let a = grid[imax.saturating_sub(1)];
    let b = grid[(imax + 1).min(SCAN_POINTS - 1)];
    let ball_k = golden_max(ratio, a, b).max(0.0);

    let upper: Vec<f64> = grid.iter().copied().filter(|&r| r >= GROWTH_FROM).collect();
    let blow_down_exponent = if upper.iter().all(|&r| ball_speed(&speed, r) < 0.0) {
        let pts: Vec<(f64, f64)> = upper.iter().map(|&r| (r.ln(), (-ball_speed(&speed, r)).ln())).collect();
        least_squares(&pts).map(|(slope, _)| slope)
    } else {
        None
    };
    let superlinear = blow_down_exponent.is_some_and(|e| e > 1.0 + 1e-9);
    Ok(AxiomReport {
        kind,
        seed,
        trials,
        monotonicity: mono,
        translation: trans,
        symmetry: sym,
        ball_k,
        blow_down_exponent,
        superlinear,
        failures,
    })
}

/// Maximum of a unimodal function on [a, b], endpoints included.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let edge = f(a).max(f(b));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b)).max(edge)
}
