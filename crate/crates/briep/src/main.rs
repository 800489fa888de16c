use std::path::PathBuf;
use std::process::ExitCode;

use briep::config::{parse_degrees, GridSpec, RunConfig};
use briep::{artifacts, runner, CliError};
use clap::{Parser, Subcommand};
use log::info;

#[derive(Parser)]
#[command(
    name = "briep",
    version,
    about = "Barycentric interpolation with equilibrium-potential nodes and poles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a JSON config and write CSV artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `outputs`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Degrees as `1,2,5` or `start:step:end`.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        panels: Option<usize>,
        /// `<nx>x<ny>@<x0,y0,x1,y1>`
        #[arg(long)]
        grid: Option<GridSpec>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("BRIEP_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Config(format!("BRIEP_THREADS='{v}' is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let Command::Run {
        config,
        out,
        n,
        gamma,
        panels,
        grid,
    } = cli.command;
    let mut cfg = RunConfig::load(&config)?;
    if let Some(n) = n {
        cfg.n_list = parse_degrees(&n).map_err(CliError::Config)?;
    }
    if let Some(g) = gamma {
        cfg.gamma = g;
    }
    if panels.is_some() {
        cfg.panels = panels;
    }
    if grid.is_some() {
        cfg.grid = grid;
    }
    if let Some(out) = out {
        cfg.outputs = out;
    }
    cfg.validate()?;
    let report = runner::run(&cfg)?;
    artifacts::emit(&report, &cfg, &cfg.outputs)?;
    let last = report.sweeps.last().unwrap();
    info!("n={} max error {:.3e}", last.n, last.max_error);
    println!(
        "{} run: c1={:.6}{} n={} max_error={:.3e} -> {}",
        match report.mode {
            runner::Mode::Polynomial => "polynomial",
            runner::Mode::Rational => "rational",
        },
        report.c1,
        report.c2.map(|c| format!(" c2={c:.6}")).unwrap_or_default(),
        last.n,
        last.max_error,
        cfg.outputs.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("briep: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
