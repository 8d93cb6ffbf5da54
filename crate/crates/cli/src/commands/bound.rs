//! `superlin bound`: tabulate the key-rate security bound against the
//! reach of detector-control attacks, along either axis — per detector
//! efficiency, or inverted per target error rate.

use std::fs;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args};
use serde::Serialize;
use superlin::attack::{
    bound_crossing_qber, classify_region, key_rate_bound, worst_case_qber, SecurityRegion,
};

use crate::manifest::RunManifest;
use crate::spec::{parse_grid, GRID_SPEC_HELP};

#[derive(Args)]
#[command(
    group(ArgGroup::new("axis").required(true).args(["eta", "qber"])),
    after_help = GRID_SPEC_HELP,
)]
pub struct BoundArgs {
    /// Detector-efficiency grid: tabulate the bound-crossing error rate
    /// and the strongest attack's error rate per efficiency.
    #[arg(long, value_name = "GRID")]
    pub eta: Option<String>,

    /// Error-rate grid: solve inversely for the efficiency where the
    /// bound crosses zero (and where the strongest attack reaches) per
    /// error rate.
    #[arg(long, value_name = "GRID")]
    pub qber: Option<String>,

    /// Directory for the table and manifest.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Emit the table as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct Params<'a> {
    axis: &'static str,
    grid: &'a [f64],
    out_dir: String,
    json: bool,
}

#[derive(Serialize)]
struct EtaRow {
    eta: f64,
    /// Error rate where the key-rate bound crosses zero: key is
    /// extractable below, not above.
    crossing_qber: f64,
    /// Error rate of the strongest detector-control attack at this
    /// efficiency.
    attack_qber: f64,
    /// Key-rate bound evaluated at the attack's error rate.
    key_rate_at_attack: f64,
    region: SecurityRegion,
}

#[derive(Serialize)]
struct QberRow {
    qber: f64,
    /// Smallest efficiency that still permits key extraction at this
    /// error rate; absent when no efficiency suffices.
    eta_bound: Option<f64>,
    /// Efficiency whose strongest attack induces exactly this error
    /// rate; absent when no attack reaches an error rate this high.
    eta_attack: Option<f64>,
}

fn region_str(region: SecurityRegion) -> &'static str {
    match region {
        SecurityRegion::Extractable => "extractable",
        SecurityRegion::Attackable => "attackable",
        SecurityRegion::AssumeInsecure => "assume_insecure",
    }
}

/// Solve `f(eta) = target` for a continuous function that increases from
/// `f(0) = 0` over `[0, 1]`.
fn invert_monotone(f: impl Fn(f64) -> f64, target: f64) -> Option<f64> {
    if target == 0.0 {
        return Some(0.0);
    }
    if f(1.0) < target {
        return None;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn run(args: &BoundArgs) -> Result<()> {
    let (axis, grid) = match (&args.eta, &args.qber) {
        (Some(spec), None) => ("eta", parse_grid(spec)?),
        (None, Some(spec)) => ("qber", parse_grid(spec)?),
        _ => unreachable!("clap enforces exactly one axis"),
    };
    for &v in &grid {
        if !(0.0..=1.0).contains(&v) {
            anyhow::bail!("{axis} grid value {v} is outside [0, 1]");
        }
    }

    let params = Params {
        axis,
        grid: &grid,
        out_dir: args.out_dir.display().to_string(),
        json: args.json,
    };
    let mut manifest = RunManifest::new("bound", &params)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let ext = if args.json { "json" } else { "csv" };
    let name = format!("bound_table.{ext}");
    match axis {
        "eta" => {
            let rows: Vec<EtaRow> = grid
                .iter()
                .map(|&eta| {
                    let attack_qber = worst_case_qber(eta);
                    EtaRow {
                        eta,
                        crossing_qber: bound_crossing_qber(eta),
                        attack_qber,
                        key_rate_at_attack: key_rate_bound(eta, attack_qber),
                        region: classify_region(eta, attack_qber).region,
                    }
                })
                .collect();
            if args.json {
                manifest.write_output(&args.out_dir, &name, &rows)?;
            } else {
                let mut table =
                    String::from("eta,crossing_qber,attack_qber,key_rate_at_attack,region\n");
                for r in &rows {
                    let _ = writeln!(
                        table,
                        "{},{},{},{},{}",
                        r.eta,
                        r.crossing_qber,
                        r.attack_qber,
                        r.key_rate_at_attack,
                        region_str(r.region)
                    );
                }
                fs::write(args.out_dir.join(&name), table)?;
                manifest.record_output(&name);
            }
            if let [row] = &grid[..] {
                println!(
                    "eta = {}: bound crossing at qber = {:.6}, strongest attack at qber = {:.6}",
                    row,
                    bound_crossing_qber(*row),
                    worst_case_qber(*row)
                );
            } else {
                println!("{} efficiencies tabulated", grid.len());
            }
        }
        _ => {
            let rows: Vec<QberRow> = grid
                .iter()
                .map(|&qber| QberRow {
                    qber,
                    eta_bound: invert_monotone(bound_crossing_qber, qber),
                    eta_attack: invert_monotone(worst_case_qber, qber),
                })
                .collect();
            if args.json {
                manifest.write_output(&args.out_dir, &name, &rows)?;
            } else {
                let mut table = String::from("qber,eta_bound,eta_attack\n");
                for r in &rows {
                    let _ = write!(table, "{},", r.qber);
                    if let Some(e) = r.eta_bound {
                        let _ = write!(table, "{e}");
                    }
                    table.push(',');
                    if let Some(e) = r.eta_attack {
                        let _ = write!(table, "{e}");
                    }
                    table.push('\n');
                }
                fs::write(args.out_dir.join(&name), table)?;
                manifest.record_output(&name);
            }
            if let [row] = &grid[..] {
                match invert_monotone(bound_crossing_qber, *row) {
                    Some(eta) => println!(
                        "qber = {}: key extraction needs eta >= {:.6}",
                        row, eta
                    ),
                    None => println!(
                        "qber = {}: no efficiency permits key extraction at this error rate",
                        row
                    ),
                }
            } else {
                println!("{} error rates tabulated", grid.len());
            }
        }
    }
    manifest.write(&args.out_dir)?;
    Ok(())
}
