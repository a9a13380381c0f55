use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdicv_core::experiment::{
    run_backtest, run_esd_compare, run_mc_rfl, run_mp_curve, run_simulate, write_backtest_outputs, write_esd_outputs,
    write_mp_outputs, write_rfl_outputs, write_simulation, ExperimentConfig, ExperimentKind,
};
use hdicv_core::{Error, ErrorClass};

#[derive(Parser)]
#[command(name = "hdicv", version, about = "Integrated covariance experiments on simulated or recorded tick data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate multi-transaction noisy panels and their realized ICV.
    Simulate(Common),
    /// Compare estimator spectra with a sample-covariance reference.
    EsdCompare(Common),
    /// Relative Frobenius loss of the shrinkage estimators.
    McRfl(Common),
    /// Rolling minimum-variance portfolio backtest.
    Backtest(Common),
    /// Limiting spectral density from the Marčenko–Pastur equation.
    MpCurve(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; the built-in preset is used when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    threads: Option<usize>,
}

impl Command {
    fn parts(&self) -> (ExperimentKind, &Common) {
        match self {
            Command::Simulate(c) => (ExperimentKind::Simulate, c),
            Command::EsdCompare(c) => (ExperimentKind::EsdCompare, c),
            Command::McRfl(c) => (ExperimentKind::McRfl, c),
            Command::Backtest(c) => (ExperimentKind::Backtest, c),
            Command::MpCurve(c) => (ExperimentKind::MpCurve, c),
        }
    }
}

fn load(kind: ExperimentKind, common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::preset(kind),
    };
    if cfg.kind != kind {
        return Err(Error::Config(format!("config describes {:?}, not {:?}", cfg.kind, kind)));
    }
    if let Some(r) = common.reps {
        cfg.reps = r;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(out) = &common.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<(), Error> {
    let out = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let out: &Path = &out;
    match kind {
        ExperimentKind::Simulate => {
            for rep in 0..cfg.reps {
                let scenario = run_simulate(cfg, rep)?;
                write_simulation(cfg, rep, &scenario, out)?;
            }
            println!("wrote {} panel(s) to {}", cfg.reps, out.display());
        }
        ExperimentKind::EsdCompare => {
            let outcome = run_esd_compare(cfg)?;
            write_esd_outputs(&outcome, out)?;
            print_json(&outcome.summary)?;
        }
        ExperimentKind::McRfl => {
            let outcome = run_mc_rfl(cfg)?;
            write_rfl_outputs(&outcome, out)?;
            print_json(&outcome.summary)?;
        }
        ExperimentKind::Backtest => {
            let outcome = run_backtest(cfg)?;
            write_backtest_outputs(&outcome, out)?;
            print_json(&outcome.summary)?;
        }
        ExperimentKind::MpCurve => {
            let curve = run_mp_curve(cfg)?;
            write_mp_outputs(&curve, out)?;
            println!("wrote {} density points to {}", curve.x.len(), out.display());
        }
    }
    Ok(())
}

fn exit_code(err: &Error) -> ExitCode {
    match err.class() {
        ErrorClass::Config => ExitCode::from(2),
        ErrorClass::Numerical => ExitCode::from(3),
        ErrorClass::Io => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = cli.command.parts();
    if let Some(k) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot start {k} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = load(kind, common).and_then(|cfg| run(kind, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
