//! `superlin simulate`: seeded Monte Carlo run of the intercepted
//! protocol, as a stochastic cross-check of the analytic rates.

use std::env;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use superlin::sim::{simulate, BasisMode, SimConfig};

use crate::manifest::RunManifest;
use crate::spec::{parse_model, MODEL_SPEC_HELP};

/// Environment variable consulted when `--seed` is not given.
pub const SEED_ENV: &str = "SUPERLIN_SEED";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    /// One analyzer switched into a random basis each round.
    Active,
    /// Beam splitter feeding both analyzers at half energy.
    Passive,
}

#[derive(Args)]
#[command(after_help = MODEL_SPEC_HELP)]
pub struct SimulateArgs {
    /// Model spec for the bit-0 detector (see below).
    #[arg(long, value_name = "SPEC")]
    pub detector0: String,

    /// Model spec for the bit-1 detector; defaults to the bit-0 spec.
    #[arg(long, value_name = "SPEC")]
    pub detector1: Option<String>,

    /// Mean photon number of the trigger pulse at the receiver.
    #[arg(long, value_name = "MU")]
    pub mu: f64,

    /// Trigger arrival time (ns), for time-resolved detector data.
    #[arg(long, value_name = "T")]
    pub t: Option<f64>,

    /// Protocol rounds to simulate.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Receiver architecture.
    #[arg(long, value_enum, default_value = "active")]
    pub basis_mode: BasisArg,

    /// RNG seed; defaults to $SUPERLIN_SEED, then 0. Equal seeds give
    /// byte-identical statistics.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Directory for the statistics and manifest.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct Params<'a> {
    detector0: &'a str,
    detector1: &'a str,
    mu: f64,
    t: Option<f64>,
    trials: u64,
    basis_mode: &'static str,
    seed: u64,
    out_dir: String,
}

fn resolve_seed(flag: Option<u64>) -> Result<(u64, &'static str)> {
    if let Some(seed) = flag {
        return Ok((seed, "flag"));
    }
    match env::var(SEED_ENV) {
        Ok(raw) => {
            let seed = raw
                .parse::<u64>()
                .with_context(|| format!("{SEED_ENV}={raw} is not an unsigned integer"))?;
            Ok((seed, "env"))
        }
        Err(env::VarError::NotPresent) => Ok((0, "default")),
        Err(e) => Err(e).context(format!("reading {SEED_ENV}")),
    }
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let spec0 = args.detector0.as_str();
    let spec1 = args.detector1.as_deref().unwrap_or(spec0);
    let d0 = parse_model(spec0)?;
    let d1 = parse_model(spec1)?;
    let (seed, seed_source) = resolve_seed(args.seed)?;
    let basis_mode = match args.basis_mode {
        BasisArg::Active => BasisMode::Active,
        BasisArg::Passive => BasisMode::Passive,
    };

    let config = SimConfig {
        trials: args.trials,
        mu: args.mu,
        t: args.t,
        basis_mode,
        seed,
        detector0: d0.model,
        detector1: d1.model,
    };
    let stats = simulate(&config)?;

    let params = Params {
        detector0: spec0,
        detector1: spec1,
        mu: args.mu,
        t: args.t,
        trials: args.trials,
        basis_mode: match args.basis_mode {
            BasisArg::Active => "active",
            BasisArg::Passive => "passive",
        },
        seed,
        out_dir: args.out_dir.display().to_string(),
    };
    let mut manifest = RunManifest::new("simulate", &params)?;
    manifest.set_seed(seed, seed_source);
    for source in [&d0.source, &d1.source].into_iter().flatten() {
        manifest.digest_input(source)?;
    }

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    manifest.write_output(&args.out_dir, "simulate_stats.json", &stats)?;
    manifest.write(&args.out_dir)?;

    match (stats.qber_estimate, stats.qber_stderr) {
        (Some(q), Some(se)) => println!(
            "qber = {q:.6} +/- {se:.6} over {} sifted detections",
            stats.sifted_detections
        ),
        _ => println!("no sifted detections; error rate undefined"),
    }
    println!(
        "transmittance = {:.6} +/- {:.6} ({} detections, {} double clicks)",
        stats.transmittance_estimate,
        stats.transmittance_stderr,
        stats.detections,
        stats.double_clicks
    );
    Ok(())
}
