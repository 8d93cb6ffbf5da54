//! Regenerates the synthetic detector-response fixtures under `data/`.
//!
//! Usage: `cargo run -p superlin --example gen_fixtures -- [out_dir]`
//! (defaults to `data`).
//!
//! Every fixture is sampled from the parametric detector laws in this
//! crate — none of it is measured hardware data. The energy axis is the
//! ratio-2 grid `0.5 * 2^k`, so the half-energy of any interior grid point
//! is itself a knot and attack scans over the grid never interpolate the
//! faint-pulse response.

use std::env;
use std::fs;
use std::path::PathBuf;

use superlin::detector::{
    DetectorModel, LinearDetector, ParametricSuperlinearDetector, ResponseCurve,
    TimeResolvedResponse,
};
use superlin::io::{write_curve, write_grid};
use superlin::Result;

const EVAL_TOL: f64 = 1e-15;

fn knots() -> Vec<f64> {
    (0..=12).map(|k| 0.5 * f64::powi(2.0, k)).collect()
}

fn sampled_curve(label: &str, model: &DetectorModel) -> Result<ResponseCurve> {
    let points = knots()
        .into_iter()
        .map(|mu| Ok((mu, model.coherent_prob(mu, EVAL_TOL)?)))
        .collect::<Result<Vec<_>>>()?;
    ResponseCurve::new(label, points)
}

fn main() -> Result<()> {
    let out = PathBuf::from(env::args().nth(1).unwrap_or_else(|| "data".into()));
    let fixtures = out.join("fixtures");
    fs::create_dir_all(&fixtures)?;

    let superlinear: DetectorModel = ParametricSuperlinearDetector::new(1e-4, 2e-3)?.into();
    write_curve(
        &sampled_curve("synthetic superlinear detector", &superlinear)?,
        &fixtures.join("superlinear.csv"),
    )?;

    for (eta, name) in [(0.1, "linear_eta01.csv"), (0.3, "linear_eta03.csv")] {
        let model: DetectorModel = LinearDetector::new(eta)?.into();
        write_curve(
            &sampled_curve(&format!("synthetic linear detector eta={eta}"), &model)?,
            &fixtures.join(name),
        )?;
    }

    // Time-resolved gate scan: the pair channel strengthens towards the
    // gate tail while single-photon sensitivity decays, so late trigger
    // timing is where threshold control works best.
    let gates = [(0.0, 5e-3, 1e-6), (2.5, 1e-3, 2e-4), (5.0, 1e-4, 2e-3)];
    let mut times = Vec::with_capacity(gates.len());
    let mut curves = Vec::with_capacity(gates.len());
    for (t, eta1, eta2) in gates {
        let model: DetectorModel = ParametricSuperlinearDetector::new(eta1, eta2)?.into();
        times.push(t);
        curves.push(sampled_curve(&format!("gate[t={t}]"), &model)?);
    }
    let grid = TimeResolvedResponse::new(times, curves)?;
    write_grid(&grid, &fixtures.join("gate_scan.csv"), "synthetic gate scan")?;

    println!("fixtures written under {}", fixtures.display());
    Ok(())
}
