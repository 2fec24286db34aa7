use std::f64::consts::PI;
use std::path::PathBuf;

use nlcf_core::asymptotics::{
    axiom_property_check, flow_limit_experiment, match_constant, sweep_curvature_limit, ConvergenceTable, LimitMode,
    SweepMode, SweepSpec, Tier,
};
use nlcf_core::curvature::{curvature_eval, curvature_grid, CurvatureKind, QuadratureSettings};
use nlcf_core::flow::{flow_run, FlowConfig};
use nlcf_core::geom::{encode_grid, grid_sample, parse_set, read_grid, GridField, Point2, Profile, Representation, SetHandle};
use nlcf_core::oracles::{ball_ode_evolve, BallSpeed};
use nlcf_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::error::{invalid, CliError, CliResult};
use crate::output::Artifact;
use crate::Outcome;

pub fn kind_of(k: &KindArgs) -> CliResult<CurvatureKind> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| invalid(format!("--kind {:?} needs --{flag}", k.kind)));
    let kind = match k.kind {
        KindName::Classical => CurvatureKind::Classical,
        KindName::Frac => CurvatureKind::Fractional { s: need(k.s, "s")? },
        KindName::FracRenorm => CurvatureKind::FractionalRenormalized { s: need(k.s, "s")? },
        KindName::Zero => CurvatureKind::Zero,
        KindName::Riesz => CurvatureKind::Riesz { s: need(k.s, "s")? },
        KindName::RieszRenorm => CurvatureKind::RieszRenormalized { s: need(k.s, "s")? },
        KindName::Minkowski => CurvatureKind::MinkowskiRegularized { r: need(k.r, "r")? },
        KindName::Constant => CurvatureKind::Constant { c: need(k.c, "c")? },
    };
    Ok(kind)
}

fn json_line<T: Serialize>(v: &T) -> String {
    format!("{}\n", serde_json::to_string(v).expect("plain data serializes"))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn parse_pair<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<(T, T)> {
    let bad = || invalid(format!("{what} must be 'a,b', got '{text}'"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn parse_profile(text: &str) -> CliResult<Profile> {
    let (tag, rest) = text.split_once(':').ok_or_else(|| invalid(format!("profile '{text}' lacks a 'kind:' prefix")))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| invalid(format!("bad number '{v}' in profile")));
    let center = (0.0, 0.0);
    let profile = match tag {
        "circle" => Profile::Circle { radius: num(rest)?, center },
        "ellipse" => {
            let (a, b) = parse_pair(rest, "ellipse")?;
            Profile::Ellipse { a, b, center }
        }
        "cone" => {
            let (radius, slope) = parse_pair(rest, "cone")?;
            Profile::Cone { radius, slope, center }
        }
        "smooth" => {
            let (radius, width) = parse_pair(rest, "smooth")?;
            Profile::SmoothDisk { radius, width, center }
        }
        other => return Err(invalid(format!("unknown profile '{other}'"))),
    };
    Ok(profile)
}

pub fn parse_params(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| invalid(format!("bad parameter '{v}'")))
        })
        .collect()
}

// ---- curvature

enum Target {
    Point(SetHandle<f64>, Point2<f64>),
    Cell(GridField<f64>, f64, (usize, usize)),
}

struct CurvatureJob {
    kind: CurvatureKind,
    target: Target,
    settings: QuadratureSettings,
    cutoff: f64,
}

fn prepare_curvature(a: &CurvatureArgs) -> CliResult<CurvatureJob> {
    let kind = kind_of(&a.kind)?;
    let set = parse_set(&a.set)?;
    kind.validate(set.dimension())?;
    let settings = QuadratureSettings { angular_nodes: a.angular_nodes, ..Default::default() };
    settings.validate()?;
    let target = match &set.repr {
        Representation::Segment(seg) => {
            let x = if a.theta.cos() >= 0.0 { 0.0 } else { -seg.length() };
            Target::Point(set.clone(), Point2::new(x, 0.0))
        }
        Representation::Polar(p) => Target::Point(set.clone(), p.boundary_data(a.theta).point),
        Representation::Grid { field, level } => {
            let text = a.index.as_deref().ok_or_else(|| invalid("grid sets need --index ix,iy"))?;
            let (ix, iy): (usize, usize) = parse_pair(text, "--index")?;
            let (nx, ny) = field.dims();
            if ix >= nx || iy >= ny {
                return Err(invalid(format!("cell ({ix},{iy}) outside the {nx}x{ny} grid")));
            }
            // The complement's superlevel set is {−u ≥ −λ}.
            if set.complemented {
                Target::Cell(field.map(|v| -v)?, -level, (ix, iy))
            } else {
                Target::Cell(field.clone(), *level, (ix, iy))
            }
        }
    };
    Ok(CurvatureJob { kind, target, settings, cutoff: a.cutoff })
}

fn run_curvature(a: &CurvatureArgs) -> CliResult<Outcome> {
    let job = prepare_curvature(a)?;
    let record = match &job.target {
        Target::Point(set, x) => {
            let r = curvature_eval(job.kind, set, *x, &job.settings)?;
            json!({
                "kind": job.kind.label(),
                "set": a.set,
                "point": [x.x, x.y],
                "value": r.value,
                "estimated_abs_error": r.estimated_abs_error,
                "diagnostics": r.diagnostics,
            })
        }
        Target::Cell(field, level, index) => {
            let value = curvature_grid(job.kind, field, *level, *index, job.cutoff)?;
            json!({ "kind": job.kind.label(), "set": a.set, "index": [index.0, index.1], "value": value })
        }
    };
    let line = json_line(&record);
    Ok(Outcome { stdout: line.clone(), artifacts: vec![Artifact::text("curvature.json", line)], ..Default::default() })
}

// ---- ball-ode

fn prepare_ball(a: &BallOdeArgs) -> CliResult<BallSpeed> {
    if !(a.r0 > 0.0 && a.t_end > 0.0 && a.dt > 0.0) {
        return Err(invalid("--r0, --t-end and --dt must be positive"));
    }
    Ok(BallSpeed::new(kind_of(&a.kind)?, a.dim)?.with_time_scale(a.time_scale)?)
}

fn run_ball(a: &BallOdeArgs) -> CliResult<Outcome> {
    let speed = prepare_ball(a)?;
    let trace = ball_ode_evolve(&speed, a.r0, a.t_end, a.dt)?;
    let mut csv = String::from("t,radius\n");
    for (t, r) in &trace.samples {
        csv.push_str(&format!("{t:?},{r:?}\n"));
    }
    let summary = json!({
        "kind": speed.kind().label(),
        "status": trace.status,
        "final_time": trace.final_time(),
        "final_radius": trace.final_radius(),
        "extinction_bracket": trace.extinction_bracket,
    });
    let to_dir = a.common.out_dir.is_some();
    Ok(Outcome {
        stdout: if to_dir { json_line(&summary) } else { csv.clone() },
        artifacts: vec![Artifact::text("ball_ode.csv", csv), Artifact::text("ball_ode.json", pretty(&summary))],
        ..Default::default()
    })
}

// ---- flow

fn prepare_flow(a: &FlowArgs) -> CliResult<(GridField<f64>, FlowConfig)> {
    let config = FlowConfig {
        kind: kind_of(&a.kind)?,
        time_scale: a.time_scale,
        cfl_factor: a.cfl_factor,
        cutoff: a.cutoff,
        stop_time: a.stop_time,
        front_level: a.front_level,
        snapshot_interval: a.snapshot_interval,
        narrow_band: a.narrow_band,
        fixed_dt: a.fixed_dt,
        stop_radius: a.stop_radius,
        center: (0.0, 0.0),
        keep_fields: a.keep_fields,
        phase_slope: a.phase_slope,
    };
    let u0 = match &a.init {
        Some(path) => read_grid(path)?,
        None => grid_sample(a.extent, a.h, &parse_profile(&a.profile)?, a.far)?,
    };
    config.validate(u0.h())?;
    Ok((u0, config))
}

fn run_flow(a: &FlowArgs) -> CliResult<Outcome> {
    let (u0, config) = prepare_flow(a)?;
    let trace = flow_run(u0, &config)?;
    let csv = trace.to_csv();
    let summary = json!({
        "kind": config.kind.label(),
        "status": trace.status,
        "steps": trace.steps,
        "final_time": trace.final_state.t,
        "samples": trace.samples.len(),
    });
    let mut artifacts = vec![
        Artifact::text("flow.csv", csv.clone()),
        Artifact::text("flow.json", pretty(&summary)),
        Artifact { name: "final.grid".into(), bytes: encode_grid(&trace.final_state.u) },
    ];
    for (i, (_, field)) in trace.fields.iter().enumerate() {
        artifacts.push(Artifact { name: format!("snapshot_{i:04}.grid"), bytes: encode_grid(field) });
    }
    let to_dir = a.common.out_dir.is_some();
    Ok(Outcome { stdout: if to_dir { json_line(&summary) } else { csv }, artifacts, ..Default::default() })
}

// ---- sweep

fn prepare_sweep(a: &SweepArgs) -> CliResult<SweepSpec> {
    let mode: SweepMode = a.mode.parse()?;
    let params = parse_params(&a.params)?;
    let spec = match mode {
        SweepMode::Curvature(m) => SweepSpec::curvature(m, params, &a.set, a.theta),
        SweepMode::FlowLimit(m) => {
            let tier = match a.tier {
                TierName::Ode => Tier::Ode { dt: a.dt },
                TierName::Grid => {
                    Tier::Grid { h: a.h, extent: a.extent, narrow_band: Some(a.narrow_band), cutoff: a.cutoff }
                }
            };
            SweepSpec::flow(m, params, a.radius, a.t_star, tier)
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// For the s → 1 sweep: which of the candidate constants 2 and 2π the extrapolated limit
/// lies within 10% of.
pub fn limit_constant(table: &ConvergenceTable) -> Option<Value> {
    if table.spec.mode != SweepMode::Curvature(LimitMode::SToOne) {
        return None;
    }
    let limit = table.extrapolated_limit()?;
    let matched = match_constant(limit, &[("2", 2.0), ("2pi", 2.0 * PI)], 0.1).map(|m| m.0);
    Some(json!({ "extrapolated_limit": limit, "matched_constant": matched }))
}

pub fn run_table(spec: &SweepSpec) -> CliResult<ConvergenceTable> {
    Ok(match spec.mode {
        SweepMode::Curvature(_) => sweep_curvature_limit(spec)?,
        SweepMode::FlowLimit(_) => flow_limit_experiment(spec)?,
    })
}

/// CSV and sidecar artifacts for a table named `stem`.
pub fn table_artifacts(stem: &str, table: &ConvergenceTable) -> Vec<Artifact> {
    let mut sidecar = table.sidecar();
    if let Some(extra) = limit_constant(table) {
        sidecar["limit_constant"] = extra;
    }
    vec![Artifact::text(format!("{stem}.csv"), table.to_csv()), Artifact::text(format!("{stem}.json"), pretty(&sidecar))]
}

fn run_sweep(a: &SweepArgs) -> CliResult<Outcome> {
    let spec = prepare_sweep(a)?;
    let table = run_table(&spec)?;
    if let Some(info) = limit_constant(&table) {
        eprintln!("{}", json!({ "log": "s_to_one limit", "detail": info }));
    }
    let (stem, out_dir) = match &a.out {
        Some(path) => {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| invalid(format!("--out '{}' needs a file name", path.display())))?
                .to_string();
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).map(PathBuf::from).unwrap_or_else(|| ".".into());
            (stem, Some(dir))
        }
        None => ("table".to_string(), None),
    };
    let stdout = if a.out.is_some() || a.common.out_dir.is_some() { String::new() } else { table.to_csv() };
    let failure = (!table.monotone).then_some(CliError::Core(Error::NonMonotoneErrors));
    Ok(Outcome { stdout, artifacts: table_artifacts(&stem, &table), out_dir, failure })
}

// ---- axioms

fn run_axioms(a: &AxiomArgs) -> CliResult<Outcome> {
    let kind = kind_of(&a.kind)?;
    let report = axiom_property_check(kind, a.common.seed, a.trials)?;
    let text = pretty(&report);
    Ok(Outcome { stdout: text.clone(), artifacts: vec![Artifact::text("axioms.json", text)], ..Default::default() })
}

/// Validates a command and describes what it would compute.
pub fn plan(command: &Command) -> CliResult<Value> {
    let resolved = match command {
        Command::Curvature(a) => {
            let job = prepare_curvature(a)?;
            let target = match &job.target {
                Target::Point(_, x) => json!({ "point": [x.x, x.y] }),
                Target::Cell(_, level, i) => json!({ "level": level, "index": [i.0, i.1] }),
            };
            json!({ "kind": job.kind, "target": target, "angular_nodes": job.settings.angular_nodes })
        }
        Command::BallOde(a) => json!({ "speed": prepare_ball(a)? }),
        Command::Flow(a) => {
            let (u0, config) = prepare_flow(a)?;
            json!({ "config": config, "grid": u0.dims(), "h": u0.h() })
        }
        Command::Sweep(a) => json!({ "spec": prepare_sweep(a)? }),
        Command::Axioms(a) => {
            let kind = kind_of(&a.kind)?;
            kind.validate(2)?;
            json!({ "kind": kind, "trials": a.trials })
        }
        Command::Verify(_) => json!({ "checks": crate::verify::CHECKS }),
    };
    Ok(json!({ "command": command, "resolved": resolved }))
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Curvature(a) => run_curvature(a),
        Command::BallOde(a) => run_ball(a),
        Command::Flow(a) => run_flow(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Axioms(a) => run_axioms(a),
        Command::Verify(a) => crate::verify::run_verify(a.common.seed),
    }
}
