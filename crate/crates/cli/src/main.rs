//! `topofiltr`: DONUT generation, persistence, diagram metrics, alignment,
//! probing, set-prediction losses and FILTR inference from the command line.

mod align;
mod cloud;
mod donut;
mod filtr;
mod loss;
mod pd;
mod ph;
mod probe;
mod report;
mod util;

use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "topofiltr", version, about)]
struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "TOPOFILTR_JOBS", default_value_t = 0)]
    jobs: usize,

    /// Raise log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate and verify DONUT datasets.
    #[command(subcommand)]
    Donut(donut::Cmd),
    /// Sample and normalise point clouds.
    #[command(subcommand)]
    Cloud(cloud::Cmd),
    /// Vietoris-Rips persistence diagrams and target preparation.
    #[command(subcommand)]
    Ph(ph::Cmd),
    /// Distances and images of persistence diagrams.
    #[command(subcommand)]
    Pd(pd::Cmd),
    /// CKA, permutation ablation and diagram vectorization.
    #[command(subcommand)]
    Align(align::Cmd),
    /// Linear probes over feature tensors.
    #[command(subcommand)]
    Probe(probe::Cmd),
    /// Set-prediction losses and gradient checks.
    #[command(subcommand)]
    Loss(loss::Cmd),
    /// FILTR decoder inference and evaluation.
    #[command(subcommand)]
    Filtr(filtr::Cmd),
    /// CSV data for plots.
    #[command(subcommand)]
    Report(report::Cmd),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("TOPOFILTR_LOG")
        .init();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    let outcome = match cli.command {
        Command::Donut(c) => donut::run(c),
        Command::Cloud(c) => cloud::run(c),
        Command::Ph(c) => ph::run(c),
        Command::Pd(c) => pd::run(c),
        Command::Align(c) => align::run(c),
        Command::Probe(c) => probe::run(c),
        Command::Loss(c) => loss::run(c),
        Command::Filtr(c) => filtr::run(c),
        Command::Report(c) => report::run(c),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
