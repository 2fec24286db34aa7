//! Command-line driver: argument and config resolution, dispatch, and result files.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use error::{CliError, CliResult, EXIT_OK};
use output::{sha256_hex, write_results, Artifact};

pub const WORKERS_ENV: &str = "NLCF_WORKERS";

/// What a command produced: text for stdout, files for the output directory, and an
/// error to report after the files are written.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub artifacts: Vec<Artifact>,
    /// Overrides `--out-dir` (sweeps writing next to `--out`).
    pub out_dir: Option<PathBuf>,
    pub failure: Option<CliError>,
}

fn clap_command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.args_override_self(true))
}

fn parse(argv: &[OsString]) -> CliResult<Cli> {
    let matches = clap_command().try_get_matches_from(argv).map_err(clap_error)?;
    Cli::from_arg_matches(&matches).map_err(clap_error)
}

fn clap_error(e: clap::Error) -> CliError {
    CliError::Usage(e.render().to_string().trim_end().to_string())
}

/// `--config PATH` or `--config=PATH` after the subcommand.
fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let args: Vec<String> = argv.iter().skip(2).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut found = None;
    for (i, a) in args.iter().enumerate() {
        if let Some(v) = a.strip_prefix("--config=") {
            found = Some(PathBuf::from(v));
        } else if a == "--config" {
            found = args.get(i + 1).map(PathBuf::from);
        }
    }
    found
}

/// Command-line options win over config-file values: the file's options are inserted
/// right after the subcommand and later occurrences override earlier ones.
pub fn resolve(argv: &[OsString]) -> CliResult<Cli> {
    let Some(path) = config_path(argv) else {
        return parse(argv);
    };
    let root = clap_command();
    let Some(sub) = argv.get(1).and_then(|name| root.find_subcommand(name)) else {
        return parse(argv);
    };
    let entries = config::load_config(&path)?;
    let extra = config::entries_to_args(&entries, sub)?;
    let mut merged: Vec<OsString> = argv[..2].to_vec();
    merged.extend(extra.into_iter().map(OsString::from));
    merged.extend(argv[2..].iter().cloned());
    parse(&merged)
}

fn worker_count(cli: &Cli) -> CliResult<Option<usize>> {
    let from_env = match std::env::var(WORKERS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV}='{v}' is not a positive integer")))?,
        ),
        Err(_) => None,
    };
    let n = from_env.or(cli.command.common().workers);
    if n == Some(0) {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    Ok(n)
}

/// Hash of everything that determines the outputs (worker count and paths excluded).
pub fn spec_hash(command: &Command) -> String {
    sha256_hex(serde_json::to_string(command).expect("plain data serializes").as_bytes())
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    let common = cli.command.common();
    if common.dry_run {
        let plan = commands::plan(&cli.command)?;
        let text = serde_json::json!({ "dry_run": true, "spec_hash": spec_hash(&cli.command), "plan": plan });
        return Ok(Outcome { stdout: format!("{text}\n"), ..Default::default() });
    }
    let mut outcome = commands::run(&cli.command)?;
    let dir = outcome.out_dir.clone().or_else(|| common.out_dir.clone());
    if let Some(dir) = dir {
        if !outcome.artifacts.is_empty() {
            let manifest = write_results(&outcome.artifacts, &dir, &spec_hash(&cli.command))?;
            eprintln!("{}", serde_json::json!({ "manifest": manifest }));
        }
    }
    outcome.artifacts.clear();
    Ok(outcome)
}

fn run_inner(argv: &[OsString]) -> CliResult<Outcome> {
    let cli = resolve(argv)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count(&cli)? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    pool.install(|| execute(&cli))
}

/// Runs one invocation and returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // Help and version requests are successes and print to stdout.
    if let Err(e) = clap_command().try_get_matches_from(&argv) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            print!("{}", e.render());
            return EXIT_OK;
        }
    }
    match run_inner(&argv) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            match outcome.failure {
                Some(e) => {
                    eprintln!("{}", e.to_json_line());
                    e.exit_code()
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            e.exit_code()
        }
    }
}
