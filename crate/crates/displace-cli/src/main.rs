use clap::{Parser, Subcommand};

use displace_cli::commands::{
    cmd_estimate, cmd_evaluate, cmd_experiment, cmd_simulate, EstimateArgs, EvaluateArgs,
    ExperimentArgs, SimulateArgs,
};

/// Estimate the distribution of time displacements between paired event
/// streams from per-interval counts.
///
/// Exit codes: 0 success, 1 runtime or domain error, 2 usage error.
#[derive(Parser)]
#[command(name = "displace", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic counts file from a Poisson arrival model
    Simulate(SimulateArgs),
    /// Estimate displacement probabilities and a step CDF from counts
    Estimate(EstimateArgs),
    /// Compare an estimated step CDF against an analytic distribution
    Evaluate(EvaluateArgs),
    /// Run a Monte Carlo parameter grid and summarize accuracy per cell
    Experiment(ExperimentArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
