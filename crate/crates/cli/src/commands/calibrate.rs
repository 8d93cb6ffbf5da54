//! `superlin calibrate`: estimate a detector's single-photon efficiency
//! from one faint point of a measured response curve and report how far
//! the rest of the curve departs from the linear law.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;
use superlin::detector::{efficiency_from_coherent_point, superlinearity_ratio};
use superlin::io::load_curve;

use crate::manifest::RunManifest;

#[derive(Args)]
pub struct CalibrateArgs {
    /// Measured response curve (CSV: mu,p).
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,

    /// Reference energy for the efficiency estimate; defaults to the
    /// faintest measured point, where the linear law is most trustworthy.
    #[arg(long, value_name = "MU")]
    pub reference_mu: Option<f64>,

    /// Directory for the report, summary, and manifest.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Emit the report table as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct Params<'a> {
    data: String,
    reference_mu: f64,
    out_dir: String,
    json: bool,
    label: &'a str,
}

#[derive(Serialize)]
struct ReportRow {
    mu: f64,
    p: f64,
    /// Measured click probability over the linear-law prediction at the
    /// reference efficiency; 1 means linear, > 1 means superlinear.
    ratio: f64,
}

#[derive(Serialize)]
struct CalibrateSummary<'a> {
    label: &'a str,
    mu_ref: f64,
    p_ref: f64,
    eta: f64,
    rows: usize,
    max_ratio: f64,
    max_ratio_mu: f64,
}

pub fn run(args: &CalibrateArgs) -> Result<()> {
    let curve = load_curve(&args.data)?;
    let mu_ref = args.reference_mu.unwrap_or_else(|| curve.mu_min());
    let p_ref = curve.evaluate(mu_ref)?;
    let eta = efficiency_from_coherent_point(p_ref, mu_ref)?;

    let rows = curve
        .points()
        .iter()
        .map(|&(mu, p)| {
            Ok(ReportRow { mu, p, ratio: superlinearity_ratio(&curve, mu, mu_ref)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let peak = rows
        .iter()
        .reduce(|best, row| if row.ratio > best.ratio { row } else { best })
        .expect("a loaded curve has at least two points");
    let summary = CalibrateSummary {
        label: curve.label(),
        mu_ref,
        p_ref,
        eta,
        rows: rows.len(),
        max_ratio: peak.ratio,
        max_ratio_mu: peak.mu,
    };

    let params = Params {
        data: args.data.display().to_string(),
        reference_mu: mu_ref,
        out_dir: args.out_dir.display().to_string(),
        json: args.json,
        label: curve.label(),
    };
    let mut manifest = RunManifest::new("calibrate", &params)?;
    manifest.digest_input(&args.data)?;

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    if args.json {
        manifest.write_output(&args.out_dir, "calibrate_report.json", &rows)?;
    } else {
        let mut table = String::from("mu,p,ratio\n");
        for row in &rows {
            table.push_str(&format!("{},{},{}\n", row.mu, row.p, row.ratio));
        }
        let path = args.out_dir.join("calibrate_report.csv");
        fs::write(&path, table).with_context(|| format!("writing {}", path.display()))?;
        manifest.record_output("calibrate_report.csv");
    }
    manifest.write_output(&args.out_dir, "calibrate_summary.json", &summary)?;
    manifest.write(&args.out_dir)?;

    println!(
        "{}: eta = {:.6} at reference mu = {} (p = {})",
        curve.label(),
        eta,
        mu_ref,
        p_ref
    );
    println!(
        "superlinearity peaks at {:.4}x the linear law at mu = {}",
        summary.max_ratio, summary.max_ratio_mu
    );
    Ok(())
}
