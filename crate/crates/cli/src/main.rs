//! Command-line front end for the `superlin` toolkit: calibrate measured
//! detector responses, optimize and judge detector-control attacks,
//! tabulate the key-rate security bound, and run seeded protocol
//! simulations. Every subcommand writes machine-readable tables plus a
//! run manifest sufficient to reproduce it; identical invocations with
//! identical seeds produce byte-identical outputs.

mod commands;
mod manifest;
mod spec;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "superlin",
    version,
    about = "Superlinear threshold detectors and the detector-control attack on quantum key distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate detector efficiency and superlinearity from a measured
    /// response curve.
    Calibrate(commands::calibrate::CalibrateArgs),
    /// Sweep trigger pulses against a detector pair and judge the best
    /// attack against monitoring thresholds.
    Attack(commands::attack::AttackArgs),
    /// Tabulate the key-rate bound against the strongest attack.
    Bound(commands::bound::BoundArgs),
    /// Monte Carlo simulation of the intercepted protocol.
    Simulate(commands::simulate::SimulateArgs),
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Calibrate(args) => commands::calibrate::run(&args),
        Command::Attack(args) => commands::attack::run(&args),
        Command::Bound(args) => commands::bound::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
    }
}
