//! Cross-checks against independently coded reference computations.
// Frozen reference values keep every digit of the independent derivation.
#![allow(clippy::excessive_precision)]
//!
//! The oracles here deliberately avoid the library's own numerics: the
//! Poisson average is a plain fixed-cutoff sum over directly exponentiated
//! miss probabilities, and the coherent closed forms are written out
//! explicitly. Agreement pins the library's series truncation,
//! renormalization and log-space evaluation to an independent path.

use approx::assert_relative_eq;

use superlin::detector::{
    DetectorModel, LinearDetector, ParametricSuperlinearDetector, ResponseCurve, WorstCaseDetector,
};
use superlin::scan::{evaluate_attack, TriggerPulse};

/// Plain forward Poisson sum with a generous fixed cutoff.
fn poisson_average_oracle(mu: f64, law: impl Fn(u64) -> f64) -> f64 {
    if mu == 0.0 {
        return law(0);
    }
    let cutoff = (mu + 40.0 * mu.sqrt() + 80.0) as u64;
    let mut weight = (-mu).exp();
    let mut acc = 0.0;
    for n in 0..=cutoff {
        acc += weight * law(n);
        weight *= mu / (n + 1) as f64;
    }
    acc
}

fn linear_law(eta: f64) -> impl Fn(u64) -> f64 {
    move |n| 1.0 - (1.0 - eta).powi(n as i32)
}

fn superlinear_law(eta1: f64, eta2: f64) -> impl Fn(u64) -> f64 {
    move |n| {
        let pairs = (n * n.saturating_sub(1) / 2) as i32;
        1.0 - (1.0 - eta1).powi(n as i32) * (1.0 - eta2).powi(pairs)
    }
}

fn worst_case_law(eta: f64) -> impl Fn(u64) -> f64 {
    move |n| match n {
        0 => 0.0,
        1 => eta,
        _ => 1.0,
    }
}

#[test]
fn fock_laws_match_direct_exponentiation() {
    let lin: DetectorModel = LinearDetector::new(0.37).unwrap().into();
    let sup: DetectorModel = ParametricSuperlinearDetector::new(0.04, 0.007).unwrap().into();
    let wc: DetectorModel = WorstCaseDetector::new(0.61).unwrap().into();
    for n in 0..=60 {
        assert_relative_eq!(
            lin.fock_prob(n).unwrap(),
            linear_law(0.37)(n),
            max_relative = 1e-13,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            sup.fock_prob(n).unwrap(),
            superlinear_law(0.04, 0.007)(n),
            max_relative = 1e-13,
            epsilon = 1e-15
        );
        assert_relative_eq!(wc.fock_prob(n).unwrap(), worst_case_law(0.61)(n), max_relative = 0.0);
    }
}

#[test]
fn coherent_averages_match_the_plain_sum() {
    let mus = [0.01, 0.3, 1.0, 2.0, 7.5, 40.0, 150.0];

    for eta in [0.003, 0.1, 0.45, 0.99] {
        let model: DetectorModel = LinearDetector::new(eta).unwrap().into();
        for &mu in &mus {
            assert_relative_eq!(
                model.coherent_prob(mu, 1e-15).unwrap(),
                poisson_average_oracle(mu, linear_law(eta)),
                max_relative = 5e-13,
                epsilon = 1e-15
            );
        }
    }

    for (eta1, eta2) in [(1e-4, 2e-3), (0.01, 0.002), (0.1, 0.05)] {
        let model: DetectorModel =
            ParametricSuperlinearDetector::new(eta1, eta2).unwrap().into();
        for &mu in &mus {
            assert_relative_eq!(
                model.coherent_prob(mu, 1e-15).unwrap(),
                poisson_average_oracle(mu, superlinear_law(eta1, eta2)),
                max_relative = 5e-13,
                epsilon = 1e-15
            );
        }
    }

    for eta in [0.1, 0.5, 0.9] {
        let model: DetectorModel = WorstCaseDetector::new(eta).unwrap().into();
        for &mu in &mus {
            assert_relative_eq!(
                model.coherent_prob(mu, 1e-15).unwrap(),
                poisson_average_oracle(mu, worst_case_law(eta)),
                max_relative = 5e-13,
                epsilon = 1e-15
            );
        }
    }
}

#[test]
fn coherent_closed_forms_pin_the_series() {
    // Linear: p = 1 - e^(-mu eta). Worst case: only the vacuum and the
    // single-photon miss survive, p = 1 - e^-mu (1 + mu (1 - eta)).
    for (eta, mu) in [(0.045_f64, 40.0_f64), (0.25, 1.5), (0.8, 0.2)] {
        let lin: DetectorModel = LinearDetector::new(eta).unwrap().into();
        assert_relative_eq!(
            lin.coherent_prob(mu, 1e-15).unwrap(),
            -(-mu * eta).exp_m1(),
            max_relative = 1e-13
        );
        let wc: DetectorModel = WorstCaseDetector::new(eta).unwrap().into();
        assert_relative_eq!(
            wc.coherent_prob(mu, 1e-15).unwrap(),
            1.0 - (-mu).exp() * (1.0 + mu * (1.0 - eta)),
            max_relative = 1e-12
        );
    }
}

#[test]
fn measured_curve_route_reproduces_the_reference_operating_point() {
    // A curve holding the measured pair (p(mu/2), p(mu)) exactly at its
    // knots must reproduce the reference rates through the full
    // interpolation + attack pipeline.
    let curve: DetectorModel = ResponseCurve::new(
        "gated APD tail",
        vec![(20.0, 0.00089), (40.0, 0.0054)],
    )
    .unwrap()
    .into();
    let point = evaluate_attack(&curve, &curve, TriggerPulse::Coherent { mu: 40.0 }, None).unwrap();
    assert_eq!(point.p_f0, 0.0054);
    assert_eq!(point.p_h1, 0.00089);
    assert_relative_eq!(point.qber, 0.12391394181522449, max_relative = 1e-14);
    assert_relative_eq!(point.transmittance, 0.00358960395, max_relative = 1e-14);
    assert_relative_eq!(point.loss_db, 24.449534655770939, max_relative = 1e-14);
}
