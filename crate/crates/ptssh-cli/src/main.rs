//! `ptssh` — reproducible spectral experiments on PT-symmetric SSH chains.
//!
//! Each subcommand reads a flat `key = value` config (file and/or `--set`
//! overrides), runs the experiment, and emits one CSV whose header repeats
//! the fully resolved config: re-running any command with identical inputs
//! reproduces the file bit for bit, regardless of `--threads`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;
use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "ptssh", version, about = "Spectral experiments on PT-symmetric SSH chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the full chain over a gain/loss grid.
    SpectrumSweep(CommonArgs),
    /// Locate one edge-state exceptional point by bisection.
    EpFind(CommonArgs),
    /// Exceptional points over an (M, u) grid.
    EpSweep(CommonArgs),
    /// Bulk PT phase, winding number and gap over a (u, gamma) grid.
    BulkPhase(CommonArgs),
    /// Closed-form edge wavefunctions.
    AnsatzProfile(CommonArgs),
    /// Exact edge eigenvector vs the two-state prediction.
    WavefunctionCompare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file of `key = value` lines; `#` starts a comment.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override or supply a single key, e.g. `--set m=12`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output CSV path (stdout when absent). Writes are atomic.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for the random profile family.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for sweeps; affects speed only, never output.
    #[arg(long)]
    threads: Option<usize>,

    /// Also render a simple SVG scatter of the emitted data.
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SpectrumSweep(_) => "spectrum-sweep",
            Command::EpFind(_) => "ep-find",
            Command::EpSweep(_) => "ep-sweep",
            Command::BulkPhase(_) => "bulk-phase",
            Command::AnsatzProfile(_) => "ansatz-profile",
            Command::WavefunctionCompare(_) => "wavefunction-compare",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::SpectrumSweep(a)
            | Command::EpFind(a)
            | Command::EpSweep(a)
            | Command::BulkPhase(a)
            | Command::AnsatzProfile(a)
            | Command::WavefunctionCompare(a) => a,
        }
    }
}

fn resolve_config(name: &str, args: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::parse(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    for assignment in &args.set {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            config::ConfigError::Syntax {
                line: 0,
                text: assignment.clone(),
            }
        })?;
        cfg.set(key.trim(), value.trim(), 0)?;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.display().to_string());
    }
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(threads) = args.threads {
        cfg.threads = Some(threads);
    }
    if let Some(svg) = &args.svg {
        cfg.svg = Some(svg.display().to_string());
    }
    match &cfg.command {
        Some(c) if c != name => {
            return Err(config::ConfigError::CommandMismatch {
                file: c.clone(),
                cli: name.to_string(),
            }
            .into())
        }
        _ => cfg.command = Some(name.to_string()),
    }
    Ok(cfg)
}

fn execute(name: &str, cfg: &ExperimentConfig) -> Result<commands::CommandResult, CliError> {
    match cfg.threads {
        // A scoped pool so thread count is a per-run property. Row order in
        // every sweep is fixed by the grid, so output bytes never depend on
        // the worker count.
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| config::ConfigError::Invalid(format!("thread pool: {e}")))?
            .install(|| commands::run(name, cfg)),
        None => commands::run(name, cfg),
    }
}

fn run() -> Result<usize, CliError> {
    let cli = Cli::parse();
    let name = cli.command.name();
    let cfg = resolve_config(name, cli.command.args())?;
    let result = execute(name, &cfg)?;

    let csv_text = result.csv.render();
    match &cfg.out {
        Some(path) => output::write_atomic(std::path::Path::new(path), &csv_text)?,
        None => print!("{csv_text}"),
    }
    if let Some(svg_path) = &cfg.svg {
        let svg = output::render_svg(&result.svg_title, &result.svg_series);
        output::write_atomic(std::path::Path::new(svg_path), &svg)?;
    }
    if result.failed_rows > 0 {
        eprintln!(
            "ptssh: status=error rows_failed={} rows_total={}",
            result.failed_rows, result.total_rows
        );
    }
    Ok(result.failed_rows)
}

fn main() -> ExitCode {
    match run() {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ptssh: status=fatal error=\"{e}\"");
            ExitCode::from(2)
        }
    }
}
