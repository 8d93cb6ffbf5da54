//! `superlin attack`: sweep trigger-pulse settings against a detector
//! pair, report the full scan, the best setting per energy, the overall
//! optimum, and (given monitoring thresholds) a detectability verdict.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use superlin::io::{write_scan, ScanFormat};
use superlin::scan::{
    feasibility_verdict, optimize_attack, AttackPoint, Objective, PulseKind, Verdict,
};

use crate::manifest::RunManifest;
use crate::spec::{parse_grid, parse_model, GRID_SPEC_HELP, MODEL_SPEC_HELP};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PulseArg {
    /// Coherent (laser) pulses of the given mean photon numbers.
    Coherent,
    /// Ideal Fock pulses; the energy grid must hold whole photon numbers.
    Fock,
}

#[derive(Args)]
#[command(after_help = format!("{MODEL_SPEC_HELP}\n\n{GRID_SPEC_HELP}"))]
pub struct AttackArgs {
    /// Model spec for the bit-0 detector (see below).
    #[arg(long, value_name = "SPEC")]
    pub detector0: String,

    /// Model spec for the bit-1 detector; defaults to the bit-0 spec.
    #[arg(long, value_name = "SPEC")]
    pub detector1: Option<String>,

    /// Trigger pulse family.
    #[arg(long, value_enum, default_value = "coherent")]
    pub pulse: PulseArg,

    /// Pulse-energy grid: comma list, lin:START:STOP:COUNT, or
    /// log:START:STOP:COUNT.
    #[arg(long, value_name = "GRID")]
    pub mu: String,

    /// Trigger-time grid (ns), for time-resolved detector data.
    #[arg(long, value_name = "GRID")]
    pub t: Option<String>,

    /// Error rate above which the receiver's monitoring flags the attack.
    /// Needs --loss-budget-db so a full verdict can be formed.
    #[arg(long, value_name = "Q", requires = "loss_budget_db")]
    pub qber_threshold: Option<f64>,

    /// Channel-loss budget in dB the receiver would notice being
    /// exceeded; judged against the optimum. Needs --qber-threshold.
    #[arg(long, value_name = "DB", requires = "qber_threshold")]
    pub loss_budget_db: Option<f64>,

    /// Restrict the optimizer itself to settings whose induced loss stays
    /// within this many dB (settings above it are infeasible, and the
    /// scan may find no feasible attack at all).
    #[arg(long, value_name = "DB")]
    pub max_loss_db: Option<f64>,

    /// Directory for the scan tables, summary, and manifest.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Emit the scan tables as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct Params<'a> {
    detector0: &'a str,
    detector1: &'a str,
    pulse: &'static str,
    mu_grid: &'a [f64],
    t_grid: Option<&'a [f64]>,
    qber_threshold: Option<f64>,
    loss_budget_db: Option<f64>,
    max_loss_db: Option<f64>,
    out_dir: String,
    json: bool,
}

#[derive(Serialize)]
struct AttackSummary {
    #[serde(flatten)]
    objective: Objective,
    evaluated_points: usize,
    best: Option<AttackPoint>,
    qber_threshold: Option<f64>,
    loss_budget_db: Option<f64>,
    verdict: Option<Verdict>,
    finding: &'static str,
}

fn finding(best: Option<&AttackPoint>, verdict: Option<Verdict>) -> &'static str {
    match (best, verdict) {
        (None, _) => "no feasible attack: every setting exceeds the loss limit",
        (Some(_), None) => {
            "best attack characterized; set --qber-threshold and --loss-budget-db for a verdict"
        }
        (Some(_), Some(Verdict::BreaksKey)) => "attack stays under both monitors and breaks the key",
        (Some(_), Some(Verdict::DetectableByQber)) => "attack is exposed by the error-rate monitor",
        (Some(_), Some(Verdict::DetectableByLoss)) => "attack is exposed by the loss monitor",
        (Some(_), Some(Verdict::DetectableByBoth)) => "attack is exposed by both monitors",
    }
}

pub fn run(args: &AttackArgs) -> Result<()> {
    let spec0 = args.detector0.as_str();
    let spec1 = args.detector1.as_deref().unwrap_or(spec0);
    let d0 = parse_model(spec0)?;
    let d1 = parse_model(spec1)?;
    let mu_grid = parse_grid(&args.mu)?;
    let t_grid = args.t.as_deref().map(parse_grid).transpose()?;
    let kind = match args.pulse {
        PulseArg::Coherent => PulseKind::Coherent,
        PulseArg::Fock => PulseKind::Fock,
    };
    let objective = match args.max_loss_db {
        Some(budget_db) => Objective::MinQberWithinLoss { budget_db },
        None => Objective::MinQber,
    };

    let scan = optimize_attack(&d0.model, &d1.model, kind, &mu_grid, t_grid.as_deref(), objective)?;
    let verdict = match (scan.best.as_ref(), args.qber_threshold, args.loss_budget_db) {
        (Some(best), Some(q), Some(l)) => Some(feasibility_verdict(best, q, l)?),
        _ => None,
    };

    let params = Params {
        detector0: spec0,
        detector1: spec1,
        pulse: match args.pulse {
            PulseArg::Coherent => "coherent",
            PulseArg::Fock => "fock",
        },
        mu_grid: &mu_grid,
        t_grid: t_grid.as_deref(),
        qber_threshold: args.qber_threshold,
        loss_budget_db: args.loss_budget_db,
        max_loss_db: args.max_loss_db,
        out_dir: args.out_dir.display().to_string(),
        json: args.json,
    };
    let mut manifest = RunManifest::new("attack", &params)?;
    for source in [&d0.source, &d1.source].into_iter().flatten() {
        manifest.digest_input(source)?;
    }

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let (format, ext) = if args.json { (ScanFormat::Json, "json") } else { (ScanFormat::Csv, "csv") };
    for (stem, points) in [("attack_scan", &scan.points), ("attack_per_mu", &scan.per_mu_best)] {
        let name = format!("{stem}.{ext}");
        write_scan(points, &args.out_dir.join(&name), format)?;
        manifest.record_output(&name);
    }
    let summary = AttackSummary {
        objective,
        evaluated_points: scan.points.len(),
        best: scan.best,
        qber_threshold: args.qber_threshold,
        loss_budget_db: args.loss_budget_db,
        verdict,
        finding: finding(scan.best.as_ref(), verdict),
    };
    manifest.write_output(&args.out_dir, "attack_summary.json", &summary)?;
    manifest.write(&args.out_dir)?;

    match &scan.best {
        Some(best) => {
            let when = best.t.map_or(String::new(), |t| format!(" at t = {t} ns"));
            println!(
                "best attack: mu = {}{when}, qber = {:.6}, transmittance = {:.6} ({:.4} dB)",
                best.mu, best.qber, best.transmittance, best.loss_db
            );
        }
        None => println!("no setting on the grid meets the loss budget"),
    }
    println!("{}", summary.finding);
    Ok(())
}
