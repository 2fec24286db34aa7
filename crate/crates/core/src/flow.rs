//! Explicit level-set evolution ∂_t u + λ|Du|·H(x, {u ≥ u(x)}) = 0 on a grid.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{CurvatureKind, GridCurvature, SortedLevels};
use crate::error::{Error, Result};
use crate::geom::{extract_front, GridField, Point2};

/// Largest grid side accepted for flows.
pub const MAX_FLOW_SIDE: usize = 512;
/// Lower clamp on the adaptive time step.
pub const MIN_DT: f64 = 1e-8;
/// Below this maximal speed the flow counts as stalled.
pub const STALL_SPEED: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub kind: CurvatureKind,
    /// Multiplies the velocity, realizing rescaled times t ↦ λt.
    pub time_scale: f64,
    pub cfl_factor: f64,
    pub cutoff: f64,
    pub stop_time: f64,
    pub front_level: f64,
    pub snapshot_interval: f64,
    /// Evaluate curvature only within this many cells of the front and extend it
    /// outward; `None` evaluates every cell.
    pub narrow_band: Option<usize>,
    /// Replaces the CFL step, e.g. to run two fields in lockstep.
    pub fixed_dt: Option<f64>,
    /// Stop once the mean front radius drops below this.
    pub stop_radius: Option<f64>,
    /// Centre for the radius statistics.
    pub center: (f64, f64),
    /// Keep the field at every snapshot, not just the last one.
    pub keep_fields: bool,
    /// Nominal |Du| near the front; sets the width of the grid phase ramp.
    pub phase_slope: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            kind: CurvatureKind::Constant { c: 2.0 * std::f64::consts::PI },
            time_scale: 1.0,
            cfl_factor: 0.25,
            cutoff: 3.0,
            stop_time: 0.1,
            front_level: 0.0,
            snapshot_interval: 0.01,
            narrow_band: None,
            fixed_dt: None,
            stop_radius: None,
            center: (0.0, 0.0),
            keep_fields: false,
            phase_slope: 1.0,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self, h: f64) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self.kind {
            CurvatureKind::Classical => return Err(Error::UnsupportedOnGrid { kind: "classical".into() }),
            CurvatureKind::MinkowskiRegularized { .. } => {
                return Err(Error::UnsupportedOnGrid { kind: "minkowski".into() })
            }
            k => k.validate(2)?,
        }
        if !(self.time_scale > 0.0 && self.time_scale.is_finite()) {
            return bad(format!("time_scale {} must be positive", self.time_scale));
        }
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= 0.5) {
            return bad(format!("cfl_factor {} must lie in (0, 0.5]", self.cfl_factor));
        }
        if !matches!(self.kind, CurvatureKind::Constant { .. }) && !(self.cutoff >= 10.0 * h) {
            return bad(format!("cutoff {} must be at least 10h = {}", self.cutoff, 10.0 * h));
        }
        if !(self.stop_time >= 0.0 && self.stop_time.is_finite()) {
            return bad(format!("stop_time {} must be finite and nonnegative", self.stop_time));
        }
        if !(self.snapshot_interval > 0.0 && self.snapshot_interval.is_finite()) {
            return bad(format!("snapshot_interval {} must be positive", self.snapshot_interval));
        }
        if !self.front_level.is_finite() {
            return bad("front_level must be finite".into());
        }
        if !(self.phase_slope > 0.0 && self.phase_slope.is_finite()) {
            return bad(format!("phase_slope {} must be positive", self.phase_slope));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("fixed_dt {dt} must be positive"));
            }
        }
        Ok(())
    }

    /// Exponent s of the kernel when it is nonnegative (the h^{1+s} step cap applies).
    fn step_cap_exponent(&self) -> Option<f64> {
        match self.kind {
            CurvatureKind::Fractional { s } | CurvatureKind::FractionalRenormalized { s } => Some(s),
            CurvatureKind::Zero => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub u: GridField<f64>,
    pub t: f64,
    pub step: u64,
}

impl FlowState {
    pub fn new(u: GridField<f64>) -> Self {
        Self { u, t: 0.0, step: 0 }
    }
}

/// Godunov upwind |Du| at an interior cell for a front moving with sign `sigma`.
pub fn upwind_gradient_norm(field: &GridField<f64>, index: (usize, usize), sigma: f64) -> f64 {
    let (ix, iy) = index;
    let (nx, ny) = field.dims();
    if sigma == 0.0 || ix == 0 || iy == 0 || ix + 1 >= nx || iy + 1 >= ny {
        return 0.0;
    }
    let h = field.h();
    let u = field.get(ix, iy);
    let dxm = (u - field.get(ix - 1, iy)) / h;
    let dxp = (field.get(ix + 1, iy) - u) / h;
    let dym = (u - field.get(ix, iy - 1)) / h;
    let dyp = (field.get(ix, iy + 1) - u) / h;
    let sq = |a: f64, b: f64| a * a + b * b;
    if sigma > 0.0 {
        (sq(dxm.max(0.0), dxp.min(0.0)) + sq(dym.max(0.0), dyp.min(0.0))).sqrt()
    } else {
        (sq(dxm.min(0.0), dxp.max(0.0)) + sq(dym.min(0.0), dyp.max(0.0))).sqrt()
    }
}

/// Per-step velocity data for the cells that may move.
#[derive(Clone, Debug)]
pub struct StepSpeeds {
    /// (cell index, H) for every active cell.
    pub curvature: Vec<(usize, f64)>,
    pub max_speed: f64,
}

/// Reusable flow driver: holds the lattice weights for one kind and spacing.
#[derive(Clone, Debug)]
pub struct FlowSolver {
    config: FlowConfig,
    evaluator: GridCurvature,
}

impl FlowSolver {
    pub fn new(config: FlowConfig, h: f64) -> Result<Self> {
        config.validate(h)?;
        let evaluator = GridCurvature::new(config.kind, h, config.cutoff)?.with_slope(config.phase_slope)?;
        Ok(Self { config, evaluator })
    }

    pub fn config(&self) -> &FlowConfig {
        &self.config
    }

    /// Cells that can move, and the band mask they are restricted to (if any).
    fn active_cells(&self, u: &GridField<f64>) -> (Vec<usize>, Option<Vec<bool>>) {
        let (nx, ny) = u.dims();
        let moving = |ix: usize, iy: usize| {
            upwind_gradient_norm(u, (ix, iy), 1.0) > 0.0 || upwind_gradient_norm(u, (ix, iy), -1.0) > 0.0
        };
        let cells = (0..nx * ny)
            .filter(|&i| {
                let (ix, iy) = (i % nx, i / nx);
                !u.is_frame(ix, iy) && moving(ix, iy)
            })
            .collect();
        let Some(k) = self.config.narrow_band else {
            return (cells, None);
        };
        let mut mask = vec![false; nx * ny];
        let level = self.config.front_level;
        let values = u.values();
        let k = k as isize;
        for iy in 0..ny {
            for ix in 0..nx {
                let v = values[iy * nx + ix];
                let differs = |w: f64| (v >= level) != (w >= level) || (v <= level) != (w <= level);
                let straddles = (ix + 1 < nx && differs(values[iy * nx + ix + 1]))
                    || (iy + 1 < ny && differs(values[(iy + 1) * nx + ix]));
                if !straddles {
                    continue;
                }
                // Cover both cells of the straddling pair.
                for dy in -k..=k + 1 {
                    for dx in -k..=k + 1 {
                        let (jx, jy) = (ix as isize + dx, iy as isize + dy);
                        if jx >= 0 && jy >= 0 && (jx as usize) < nx && (jy as usize) < ny {
                            mask[jy as usize * nx + jx as usize] = true;
                        }
                    }
                }
            }
        }
        (cells, Some(mask))
    }

    /// Curvature at every active cell, each measured on its own superlevel set. With a
    /// narrow band, cells outside it copy the value of the nearest band cell.
    pub fn speeds(&self, u: &GridField<f64>) -> Result<StepSpeeds> {
        let (cells, band) = self.active_cells(u);
        let (nx, ny) = u.dims();
        let sorted = match self.config.kind {
            CurvatureKind::Constant { .. } => None,
            _ => Some(SortedLevels::new(u)),
        };
        let values = u.values();
        let computed: Vec<usize> = match &band {
            Some(mask) => cells.iter().copied().filter(|&i| mask[i]).collect(),
            None => cells.clone(),
        };
        let exact: Vec<(usize, f64)> = computed
            .par_iter()
            .map(|&i| {
                self.evaluator
                    .eval(u, values[i], i % nx, i / nx, sorted.as_ref())
                    .map(|h| (i, h))
            })
            .collect::<Result<_>>()?;
        let curvature = match band {
            None => exact,
            Some(_) => {
                // Breadth-first extension over 8-neighbours, seeded in index order.
                let mut ext: Vec<Option<f64>> = vec![None; nx * ny];
                let mut queue = std::collections::VecDeque::with_capacity(exact.len());
                for &(i, h) in &exact {
                    ext[i] = Some(h);
                    queue.push_back(i);
                }
                while let Some(i) = queue.pop_front() {
                    let (ix, iy) = ((i % nx) as isize, (i / nx) as isize);
                    for (dx, dy) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
                        let (jx, jy) = (ix + dx, iy + dy);
                        if jx < 0 || jy < 0 || jx as usize >= nx || jy as usize >= ny {
                            continue;
                        }
                        let j = jy as usize * nx + jx as usize;
                        if ext[j].is_none() {
                            ext[j] = ext[i];
                            queue.push_back(j);
                        }
                    }
                }
                cells.iter().filter_map(|&i| ext[i].map(|h| (i, h))).collect()
            }
        };
        let lam = self.config.time_scale;
        let max_speed = curvature.iter().fold(0.0f64, |m, &(_, h)| m.max((lam * h).abs()));
        Ok(StepSpeeds { curvature, max_speed })
    }

    /// CFL step for the given speeds; `StalledFlow` when nothing moves.
    pub fn cfl_dt(&self, h: f64, speeds: &StepSpeeds) -> Result<f64> {
        let c = &self.config;
        if speeds.max_speed < STALL_SPEED {
            return Err(Error::StalledFlow { max_speed: speeds.max_speed });
        }
        let mut dt = c.cfl_factor * h / speeds.max_speed;
        if let Some(s) = c.step_cap_exponent() {
            dt = dt.min(c.cfl_factor * h.powf(1.0 + s));
        }
        Ok(dt.clamp(MIN_DT, c.snapshot_interval))
    }

    fn chosen_dt(&self, h: f64, speeds: &StepSpeeds) -> f64 {
        match self.config.fixed_dt {
            Some(dt) => dt,
            None => self.cfl_dt(h, speeds).unwrap_or(self.config.snapshot_interval),
        }
    }

    fn apply(&self, state: &FlowState, speeds: &StepSpeeds, dt: f64) -> Result<FlowState> {
        let u = &state.u;
        let (nx, _) = u.dims();
        let lam = self.config.time_scale;
        let mut values = u.values().to_vec();
        for &(i, hc) in &speeds.curvature {
            let v = lam * hc;
            let g = upwind_gradient_norm(u, (i % nx, i / nx), v);
            values[i] = u.values()[i] - dt * (v * g);
        }
        Ok(FlowState { u: u.with_values(values, u.far())?, t: state.t + dt, step: state.step + 1 })
    }

    /// One forward-Euler step of length at most `max_dt`.
    pub fn step(&self, state: &FlowState, max_dt: f64) -> Result<FlowState> {
        let speeds = self.speeds(&state.u)?;
        let dt = self.chosen_dt(state.u.h(), &speeds).min(max_dt);
        self.apply(state, &speeds, dt)
    }
}

fn check_size(u: &GridField<f64>) -> Result<()> {
    let (nx, ny) = u.dims();
    if nx.max(ny) > MAX_FLOW_SIDE {
        return Err(Error::GridTooLarge { ratio: nx.max(ny) as f64, limit: MAX_FLOW_SIDE as f64 });
    }
    Ok(())
}

/// Adaptive step for `state` under `config`; `StalledFlow` when no active cell moves.
pub fn cfl_dt(state: &FlowState, config: &FlowConfig) -> Result<f64> {
    let solver = FlowSolver::new(config.clone(), state.u.h())?;
    let speeds = solver.speeds(&state.u)?;
    solver.cfl_dt(state.u.h(), &speeds)
}

/// One step; stalled flows advance by the snapshot interval.
pub fn flow_step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    check_size(&state.u)?;
    FlowSolver::new(config.clone(), state.u.h())?.step(state, f64::INFINITY)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrontSample {
    pub t: f64,
    pub r_mean: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FlowStatus {
    ReachedT,
    Extinct,
    BelowStopRadius,
}

#[derive(Clone, Debug)]
pub struct FrontTrace {
    pub samples: Vec<FrontSample>,
    pub status: FlowStatus,
    pub steps: u64,
    pub final_state: FlowState,
    /// Field at each snapshot when `keep_fields` is set.
    pub fields: Vec<(f64, GridField<f64>)>,
}

impl FrontTrace {
    pub const CSV_HEADER: &'static str = "t,r_mean,r_min,r_max,n_points";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let _ = writeln!(out, "{:?},{:?},{:?},{:?},{}", s.t, s.r_mean, s.r_min, s.r_max, s.n_points);
        }
        out
    }

    /// Mean radius at snapshot time `t`, if recorded.
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        self.samples.iter().find(|s| (s.t - t).abs() <= 1e-12 * t.max(1.0)).map(|s| s.r_mean)
    }
}

/// Evolves `u0` until `stop_time`, extinction of the front, or the stop radius.
pub fn flow_run(u0: GridField<f64>, config: &FlowConfig) -> Result<FrontTrace> {
    check_size(&u0)?;
    let solver = FlowSolver::new(config.clone(), u0.h())?;
    let center = Point2::new(config.center.0, config.center.1);
    let mut state = FlowState::new(u0);
    let mut samples = Vec::new();
    let mut fields = Vec::new();
    let mut snap = 0u64;
    let record = |state: &FlowState, samples: &mut Vec<FrontSample>, fields: &mut Vec<(f64, GridField<f64>)>| {
        if config.keep_fields {
            fields.push((state.t, state.u.clone()));
        }
        match extract_front(&state.u, config.front_level, center) {
            Ok(c) => {
                samples.push(FrontSample {
                    t: state.t,
                    r_mean: c.mean_radius,
                    r_min: c.min_radius,
                    r_max: c.max_radius,
                    n_points: c.points.len(),
                });
                Ok(Some(c.mean_radius))
            }
            Err(Error::FrontNotFound { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut status = FlowStatus::ReachedT;
    loop {
        match record(&state, &mut samples, &mut fields)? {
            None => {
                status = FlowStatus::Extinct;
                break;
            }
            Some(r) if config.stop_radius.is_some_and(|stop| r < stop) => {
                status = FlowStatus::BelowStopRadius;
                break;
            }
            _ => {}
        }
        if state.t >= config.stop_time {
            break;
        }
        snap += 1;
        // Snapshot times are multiples of the interval, computed without drift.
        let target = (snap as f64 * config.snapshot_interval).min(config.stop_time);
        while state.t < target {
            let remaining = target - state.t;
            let next = solver.step(&state, remaining)?;
            state = next;
            if target - state.t <= 1e-12 * target {
                state.t = target;
            }
        }
    }
    if !config.keep_fields {
        fields.clear();
    }
    Ok(FrontTrace { samples, status, steps: state.step, final_state: state, fields })
}
