//! `boseloops` command-line tool.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use boseloops::cli::{render, run, Command, Format, RunConfig};
use boseloops::Error;

#[derive(Debug, Parser)]
#[command(
    name = "boseloops",
    version,
    about = "Loop expansions for the harmonically trapped ideal Bose gas"
)]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (overrides the configuration; standard output by default).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format (overrides the configuration).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Reserved; all computations are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Chemical potential, gap, ground occupation, g-BEC band and critical numbers.
    Thermo,
    /// Solve for the chemical potential and compare with the asymptotic gap.
    MuSolve,
    /// Reduced density matrix at point pairs.
    Rdm,
    /// Scaled density profile against the open-trap limits.
    Profile,
    /// Short/mesoscopic/macroscopic loop decomposition.
    Loops,
    /// Anisotropic regime and mesoscopic-loop checks.
    AnisoCheck,
}

impl From<&Cmd> for Command {
    fn from(c: &Cmd) -> Self {
        match c {
            Cmd::Thermo => Command::Thermo,
            Cmd::MuSolve => Command::MuSolve,
            Cmd::Rdm => Command::Rdm,
            Cmd::Profile => Command::Profile,
            Cmd::Loops => Command::Loops,
            Cmd::AnisoCheck => Command::AnisoCheck,
        }
    }
}

fn execute(args: &Args) -> Result<(), Error> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    let cfg = RunConfig::from_path(path)?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    if args.seed.is_some() {
        log::debug!("--seed is reserved and has no effect");
    }
    let command = Command::from(&args.command);
    log::info!("running {} on {}", command.name(), path.display());
    let table = run(command, &cfg)?;
    let format = args.format.unwrap_or(cfg.output.format);
    let text = render(&table, format)?;
    match args.output.as_ref().or(cfg.output.path.as_ref()) {
        Some(out) => std::fs::write(out, text).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BOSELOOPS_LOG", "warn")).init();
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("boseloops: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
