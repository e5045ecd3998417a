use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stbeam::config::{read_config, FileConfig};
use stbeam::output::{emit_feasibility_csv, write_feasibility, write_results};
use stbeam::{emit_csv, run_experiment, run_feasibility, AppError, AppResult, Engine, ExperimentKind, ExperimentSpec};

/// Space-time beamforming experiments for LEO multi-satellite downlinks.
#[derive(Debug, Parser)]
#[command(name = "stbeam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ergodic sum spectral efficiency at a single transmit power.
    Run(CommonArgs),
    /// Sweep the transmit power (dBm).
    SweepPower(CommonArgs),
    /// Sweep the number of satellite-user pairs.
    SweepUsers(CommonArgs),
    /// Sweep the number of repetitions M for ST-SLNR schemes.
    SweepM(CommonArgs),
    /// Doppler feasibility map of ST-ZF over a satellite footprint.
    TleFeasibility(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML config; omitted keys take the default scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; defaults to the config's `output` or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed of the random streams.
    #[arg(long, env = "STBEAM_SEED")]
    seed: Option<u64>,
    /// Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, env = "STBEAM_THREADS")]
    threads: Option<usize>,
}

fn build_spec(kind: ExperimentKind, args: &CommonArgs) -> AppResult<ExperimentSpec> {
    let mut cfg = match &args.config {
        Some(path) => {
            let mut cfg = read_config(path)?;
            cfg.resolve_paths(path.parent().unwrap_or(Path::new("")));
            cfg
        }
        None => FileConfig::default(),
    };
    if let Some(name) = cfg.experiment.as_deref() {
        if ExperimentKind::from_name(name) != Some(kind) {
            eprintln!("note: config experiment {name:?} overridden by subcommand {}", kind.name());
        }
    }
    cfg.experiment = Some(kind.name().to_string());
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.trials.is_some() {
        cfg.trials = args.trials;
    }
    ExperimentSpec::from_file(cfg)
}

fn run(kind: ExperimentKind, args: &CommonArgs) -> AppResult<()> {
    let spec = build_spec(kind, args)?;
    let out = args.out.clone().or_else(|| spec.output_path.clone());
    if kind == ExperimentKind::TleFeasibility {
        let run = run_feasibility(&spec)?;
        for r in &run.rejected {
            eprintln!("skipped TLE group: {r}");
        }
        let feasible = run.cells.iter().filter(|c| c.feasible).count();
        eprintln!(
            "{}: {} visible cells, {} feasible, reference ({:.4}, {:.4})",
            run.satellite,
            run.cells.len(),
            feasible,
            run.reference.0,
            run.reference.1
        );
        return match out {
            Some(path) => emit_feasibility_csv(&run.cells, &path),
            None => write_stdout(|w| write_feasibility(&run.cells, w)),
        };
    }
    let engine = Engine::new(args.threads)?;
    let rows = run_experiment(&spec, &engine)?;
    match out {
        Some(path) => emit_csv(&rows, &path),
        None => write_stdout(|w| write_results(&rows, w)),
    }
}

fn write_stdout(f: impl FnOnce(&mut std::io::StdoutLock<'static>) -> csv::Result<()>) -> AppResult<()> {
    let mut lock = std::io::stdout().lock();
    let path = PathBuf::from("<stdout>");
    f(&mut lock).map_err(|source| AppError::Csv { path: path.clone(), source })?;
    lock.flush().map_err(|source| AppError::Io { path, source })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Run(a) => (ExperimentKind::SingleRun, a),
        Command::SweepPower(a) => (ExperimentKind::SweepPower, a),
        Command::SweepUsers(a) => (ExperimentKind::SweepUsers, a),
        Command::SweepM(a) => (ExperimentKind::SweepM, a),
        Command::TleFeasibility(a) => (ExperimentKind::TleFeasibility, a),
    };
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
