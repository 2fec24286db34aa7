use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const CONFIG_HELP: &str = "\
CONFIG FILES
  --config PATH reads `key = value` lines. Keys are the long option names of the chosen
  subcommand with `_` or `-` as separator (for example `cfl_factor = 0.25`); `#` starts a
  comment; switches take `true` or `false`. Options given on the command line override
  the file. Unknown and duplicate keys are rejected with the offending line number.

ENVIRONMENT
  NLCF_WORKERS  worker threads; overrides --workers.

EXIT CODES
  0 success, 2 invalid input, 3 numerical or I/O failure. Failures print one JSON line
  on stderr.";

#[derive(Debug, Parser)]
#[command(name = "nlcf", version, about = "Nonlocal curvature evaluators, level-set flows and limit sweeps")]
#[command(after_long_help = CONFIG_HELP, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Curvature of a set at one boundary point.
    Curvature(CurvatureArgs),
    /// Radius ODE of a ball moving with its own curvature.
    BallOde(BallOdeArgs),
    /// Level-set flow of a sampled initial field.
    Flow(FlowArgs),
    /// Convergence table toward a limiting curvature or flow.
    Sweep(SweepArgs),
    /// Randomized checks of the curvature axioms.
    Axioms(AxiomArgs),
    /// Oracle and property suite with a pass/fail summary.
    Verify(VerifyArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Curvature(a) => &a.common,
            Command::BallOde(a) => &a.common,
            Command::Flow(a) => &a.common,
            Command::Sweep(a) => &a.common,
            Command::Axioms(a) => &a.common,
            Command::Verify(a) => &a.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Curvature(_) => "curvature",
            Command::BallOde(_) => "ball-ode",
            Command::Flow(_) => "flow",
            Command::Sweep(_) => "sweep",
            Command::Axioms(_) => "axioms",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// `key = value` file with defaults for the options below.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Directory for CSV, grid and JSON artifacts plus manifest.json.
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Validate and print the resolved plan without computing.
    #[arg(long)]
    #[serde(skip)]
    pub dry_run: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindName {
    Classical,
    Frac,
    FracRenorm,
    Zero,
    Riesz,
    RieszRenorm,
    Minkowski,
    Constant,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KindArgs {
    #[arg(long, value_enum)]
    pub kind: KindName,
    /// Exponent for frac, riesz and their renormalized forms.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Radius for minkowski.
    #[arg(long)]
    pub r: Option<f64>,
    /// Speed for constant.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    /// segment:L, disk:R, ellipse:a,b, polar:a0;a1,b1;..., gridfile:PATH,level; `!c` suffix
    /// for the complement.
    #[arg(long)]
    pub set: String,
    /// Boundary point angle; on segments cos θ ≥ 0 picks the endpoint 0, else −L.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Cell `ix,iy` for grid sets.
    #[arg(long)]
    pub index: Option<String>,
    /// Kernel cutoff radius for grid sets.
    #[arg(long, default_value_t = 3.0)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 512)]
    pub angular_nodes: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BallOdeArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub time_scale: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    /// circle:R, ellipse:a,b, cone:R,slope or smooth:R,width, centred at the origin.
    #[arg(long, default_value = "circle:1")]
    pub profile: String,
    /// Start from a grid file instead of a profile.
    #[arg(long, value_name = "PATH")]
    pub init: Option<PathBuf>,
    #[arg(long, default_value_t = 0.02)]
    pub h: f64,
    /// Half-width A of the domain [−A, A]².
    #[arg(long, default_value_t = 1.5)]
    pub extent: f64,
    /// Field value outside the profile.
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub far: f64,
    #[arg(long, default_value_t = 1.0)]
    pub time_scale: f64,
    #[arg(long, default_value_t = 0.25)]
    pub cfl_factor: f64,
    #[arg(long, default_value_t = 3.0)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 0.1)]
    pub stop_time: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub front_level: f64,
    #[arg(long, default_value_t = 0.01)]
    pub snapshot_interval: f64,
    #[arg(long)]
    pub narrow_band: Option<usize>,
    #[arg(long)]
    pub fixed_dt: Option<f64>,
    #[arg(long)]
    pub stop_radius: Option<f64>,
    /// Write the field at every snapshot.
    #[arg(long)]
    pub keep_fields: bool,
    #[arg(long, default_value_t = 1.0)]
    pub phase_slope: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TierName {
    Ode,
    Grid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// s_to_zero_order0, s_to_zero_order1, s_to_one, riesz_order0, riesz_order1,
    /// minkowski_to_zero; prefix `flow:` for the flow limit.
    #[arg(long)]
    pub mode: String,
    /// Comma-separated parameters approaching the limit.
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
    #[arg(long, default_value = "disk:1")]
    pub set: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Initial circle radius (flow modes).
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.05)]
    pub t_star: f64,
    #[arg(long, value_enum, default_value_t = TierName::Ode)]
    pub tier: TierName,
    /// ODE step (ode tier).
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Grid spacing, half-width, band and cutoff (grid tier).
    #[arg(long, default_value_t = 0.04)]
    pub h: f64,
    #[arg(long, default_value_t = 1.6)]
    pub extent: f64,
    #[arg(long, default_value_t = 4)]
    pub narrow_band: usize,
    #[arg(long, default_value_t = 3.0)]
    pub cutoff: f64,
    /// CSV path for the table; the JSON sidecar and manifest go beside it.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AxiomArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
}
