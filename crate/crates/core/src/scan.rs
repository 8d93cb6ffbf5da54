//! Attack evaluation against concrete detectors and trigger-pulse grids.
//!
//! [`evaluate_attack`] resolves the four click probabilities an
//! intercept-resend attacker induces (each detector at full and at half
//! trigger energy) from any [`DetectorModel`], then reduces them to an
//! operating point: error rate, transmittance, loss. [`optimize_attack`]
//! sweeps that evaluation over a grid of pulse energies, and optionally
//! trigger arrival times, to find the attacker's best setting. Grids are
//! evaluated in parallel when the `parallel` feature is enabled (the
//! default); [`optimize_attack_sequential`] is always available and
//! returns bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::attack::{loss_db, qber_general, transmittance_general};
use crate::detector::DetectorModel;
use crate::error::{Error, Result};

/// Series tolerance used when resolving coherent click probabilities.
///
/// Deliberately tighter than [`crate::detector::DEFAULT_POISSON_TOL`]:
/// truncation bias enters the derived error rate roughly as `tol / (8 T)`
/// at transmittance `T`, so keeping the analytic identities good to 1e-12
/// for click probabilities down to ~1e-4 requires pushing the tail bound
/// to the bottom of what f64 resolves.
const EVAL_TOL: f64 = 1e-15;

/// Near-ties in the scanned error rate within this absolute band are
/// broken deterministically (smallest energy, then earliest time) so the
/// optimizer does not depend on evaluation order.
const TIE_EPS: f64 = 1e-12;

/// Trigger pulse fired by the attacker at full energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TriggerPulse {
    /// Coherent (laser) pulse of mean photon number `mu`.
    Coherent { mu: f64 },
    /// Ideal `photons`-photon Fock pulse; a half-energy split carries
    /// `floor(n/2)` or `ceil(n/2)` photons with equal probability.
    Fock { photons: u64 },
}

impl TriggerPulse {
    /// Mean photon number of the full-energy pulse.
    pub fn energy(&self) -> f64 {
        match *self {
            TriggerPulse::Coherent { mu } => mu,
            TriggerPulse::Fock { photons } => photons as f64,
        }
    }

    fn validate(&self) -> Result<()> {
        if let TriggerPulse::Coherent { mu } = *self {
            if !(mu.is_finite() && mu >= 0.0) {
                return Err(Error::param(
                    "mu",
                    format!("pulse energy must be finite and non-negative, got {mu}"),
                ));
            }
        }
        Ok(())
    }
}

/// Fraction of the trigger energy reaching one detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PowerFraction {
    /// Matched basis: the whole pulse hits the attacker's target detector.
    Full,
    /// Conflicting basis: the pulse splits over the two detectors.
    Half,
    /// Passive basis choice: the pulse first splits over the two analyzers.
    Quarter,
}

impl PowerFraction {
    fn scale(self) -> f64 {
        match self {
            PowerFraction::Full => 1.0,
            PowerFraction::Half => 0.5,
            PowerFraction::Quarter => 0.25,
        }
    }
}

/// Click probability of `model` when a `frac` share of `pulse` lands on
/// it, at trigger arrival time `t` where the model resolves time.
pub(crate) fn click_probability(
    model: &DetectorModel,
    pulse: TriggerPulse,
    frac: PowerFraction,
    t: Option<f64>,
) -> Result<f64> {
    if let DetectorModel::Stub(stub) = model {
        return Ok(match frac {
            PowerFraction::Full => stub.p_full(),
            PowerFraction::Half => stub.p_half(),
            PowerFraction::Quarter => stub.p_quarter(),
        });
    }
    match pulse {
        TriggerPulse::Coherent { mu } => {
            let scaled = mu * frac.scale();
            match model {
                DetectorModel::Curve(curve) => curve.evaluate(scaled),
                DetectorModel::Grid(grid) => grid.lookup(t.ok_or(Error::TimeRequired)?, scaled),
                // Analytic responses carry no time dependence; `t` only
                // labels the operating point.
                _ => model.coherent_prob(scaled, EVAL_TOL),
            }
        }
        TriggerPulse::Fock { photons } => match frac {
            PowerFraction::Full => model.fock_prob(photons),
            PowerFraction::Half => {
                let lo = photons / 2;
                let hi = photons - lo;
                Ok(0.5 * (model.fock_prob(lo)? + model.fock_prob(hi)?))
            }
            PowerFraction::Quarter => Err(Error::param(
                "pulse",
                "photon-number pulses resolve full and half energy only",
            )),
        },
    }
}

/// One evaluated attack setting: the four induced click probabilities and
/// the rates they imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttackPoint {
    /// Mean photon number of the full trigger pulse.
    pub mu: f64,
    /// Trigger arrival time, when the scan resolves time.
    pub t: Option<f64>,
    /// Full-energy click probability of detector 0.
    pub p_f0: f64,
    /// Full-energy click probability of detector 1.
    pub p_f1: f64,
    /// Half-energy click probability of detector 0.
    pub p_h0: f64,
    /// Half-energy click probability of detector 1.
    pub p_h1: f64,
    /// Sifted-key error rate induced by the attack.
    pub qber: f64,
    /// Detection probability per attack round.
    pub transmittance: f64,
    /// Transmittance expressed as attenuation in dB.
    pub loss_db: f64,
}

/// Evaluate one attack setting against a detector pair.
///
/// Fails when a click probability cannot be resolved (extrapolation, a
/// missing time coordinate, photon-number queries on measured data) or
/// when no detection is possible at all.
pub fn evaluate_attack(
    detector0: &DetectorModel,
    detector1: &DetectorModel,
    pulse: TriggerPulse,
    t: Option<f64>,
) -> Result<AttackPoint> {
    pulse.validate()?;
    let p_f0 = click_probability(detector0, pulse, PowerFraction::Full, t)?;
    let p_f1 = click_probability(detector1, pulse, PowerFraction::Full, t)?;
    let p_h0 = click_probability(detector0, pulse, PowerFraction::Half, t)?;
    let p_h1 = click_probability(detector1, pulse, PowerFraction::Half, t)?;
    let qber = qber_general(p_f0, p_f1, p_h0, p_h1)?;
    let transmittance = transmittance_general(p_f0, p_f1, p_h0, p_h1)?;
    let loss_db = loss_db(transmittance)?;
    Ok(AttackPoint {
        mu: pulse.energy(),
        t,
        p_f0,
        p_f1,
        p_h0,
        p_h1,
        qber,
        transmittance,
        loss_db,
    })
}

/// Family of trigger pulses swept by [`optimize_attack`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    Coherent,
    Fock,
}

/// What the attacker optimizes for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "objective", rename_all = "snake_case")]
pub enum Objective {
    /// Minimize the induced error rate outright.
    MinQber,
    /// Minimize the induced error rate among settings whose loss stays
    /// within the stated budget; settings above the budget are infeasible.
    MinQberWithinLoss { budget_db: f64 },
}

/// Result of a grid sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackScan {
    /// Every evaluated setting, in grid order (energies outer, times inner).
    pub points: Vec<AttackPoint>,
    /// Best setting per pulse energy, over the time grid.
    pub per_mu_best: Vec<AttackPoint>,
    /// Objective winner; `None` means no feasible setting exists, which is
    /// a finding (the detector resists the attack under that budget), not
    /// an error.
    pub best: Option<AttackPoint>,
}

fn validate_axis(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Empty { what: name });
    }
    for &v in grid {
        if !v.is_finite() {
            return Err(Error::param(name, format!("grid values must be finite, got {v}")));
        }
    }
    Ok(())
}

fn make_pulse(kind: PulseKind, mu: f64) -> Result<TriggerPulse> {
    match kind {
        PulseKind::Coherent => Ok(TriggerPulse::Coherent { mu }),
        PulseKind::Fock => {
            if mu < 0.0 || mu.fract() != 0.0 || mu > 2f64.powi(53) {
                return Err(Error::param(
                    "mu",
                    format!("photon-number grids must hold non-negative integers, got {mu}"),
                ));
            }
            Ok(TriggerPulse::Fock { photons: mu as u64 })
        }
    }
}

/// Pick the lowest-qber point; near-ties within [`TIE_EPS`] go to the
/// smallest pulse energy, then the earliest time. Purely value-based, so
/// the outcome does not depend on evaluation order.
fn select_best<'a>(points: impl Iterator<Item = &'a AttackPoint> + Clone) -> Option<AttackPoint> {
    let min_q = points
        .clone()
        .map(|p| p.qber)
        .fold(f64::INFINITY, f64::min);
    points
        .filter(|p| p.qber <= min_q + TIE_EPS)
        .min_by(|a, b| {
            let ka = (a.mu, a.t.unwrap_or(f64::NEG_INFINITY));
            let kb = (b.mu, b.t.unwrap_or(f64::NEG_INFINITY));
            ka.partial_cmp(&kb).expect("grid values are finite")
        })
        .copied()
}

fn feasible(p: &AttackPoint, objective: Objective) -> bool {
    match objective {
        Objective::MinQber => true,
        Objective::MinQberWithinLoss { budget_db } => p.loss_db <= budget_db,
    }
}

fn build_scan(points: Vec<AttackPoint>, times_per_mu: usize, objective: Objective) -> AttackScan {
    let per_mu_best = points
        .chunks(times_per_mu)
        .map(|chunk| select_best(chunk.iter()).expect("chunks are non-empty"))
        .collect();
    let best = select_best(points.iter().filter(|p| feasible(p, objective)));
    AttackScan {
        points,
        per_mu_best,
        best,
    }
}

fn settings(kind: PulseKind, mu_grid: &[f64], t_grid: Option<&[f64]>) -> Result<Vec<(TriggerPulse, Option<f64>)>> {
    validate_axis("mu grid", mu_grid)?;
    if let Some(ts) = t_grid {
        validate_axis("t grid", ts)?;
    }
    let times: Vec<Option<f64>> = match t_grid {
        Some(ts) => ts.iter().map(|&t| Some(t)).collect(),
        None => vec![None],
    };
    let mut out = Vec::with_capacity(mu_grid.len() * times.len());
    for &mu in mu_grid {
        let pulse = make_pulse(kind, mu)?;
        for &t in &times {
            out.push((pulse, t));
        }
    }
    Ok(out)
}

/// Sweep the attack over a grid of pulse energies (and optionally trigger
/// times), returning every evaluated point plus the per-energy and global
/// winners under `objective`.
///
/// Every grid point must be evaluable; the first failure (in grid order)
/// aborts the sweep.
pub fn optimize_attack(
    detector0: &DetectorModel,
    detector1: &DetectorModel,
    kind: PulseKind,
    mu_grid: &[f64],
    t_grid: Option<&[f64]>,
    objective: Objective,
) -> Result<AttackScan> {
    let settings = settings(kind, mu_grid, t_grid)?;
    let times_per_mu = t_grid.map_or(1, <[f64]>::len);

    #[cfg(feature = "parallel")]
    let evaluated: Vec<Result<AttackPoint>> = settings
        .par_iter()
        .map(|&(pulse, t)| evaluate_attack(detector0, detector1, pulse, t))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let evaluated: Vec<Result<AttackPoint>> = settings
        .iter()
        .map(|&(pulse, t)| evaluate_attack(detector0, detector1, pulse, t))
        .collect();

    let points = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(build_scan(points, times_per_mu, objective))
}

/// [`optimize_attack`] on a single thread, regardless of crate features.
/// Produces bit-identical results; exists so parallel runs can be checked
/// and benchmarked against a reference.
pub fn optimize_attack_sequential(
    detector0: &DetectorModel,
    detector1: &DetectorModel,
    kind: PulseKind,
    mu_grid: &[f64],
    t_grid: Option<&[f64]>,
    objective: Objective,
) -> Result<AttackScan> {
    let settings = settings(kind, mu_grid, t_grid)?;
    let times_per_mu = t_grid.map_or(1, <[f64]>::len);
    let points = settings
        .into_iter()
        .map(|(pulse, t)| evaluate_attack(detector0, detector1, pulse, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(build_scan(points, times_per_mu, objective))
}

/// What an attack operating point means for the protocol, given the
/// receiver's monitoring thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Neither monitor fires: the attacker reads the key undetected.
    BreaksKey,
    /// The induced error rate alone exposes the attack.
    DetectableByQber,
    /// The induced channel loss alone exposes the attack.
    DetectableByLoss,
    /// Both monitors fire.
    DetectableByBoth,
}

/// Judge an attack point against an error-rate threshold and a loss
/// budget. A value exactly at a threshold still passes as consistent with
/// the channel, i.e. counts as undetected.
pub fn feasibility_verdict(
    point: &AttackPoint,
    qber_threshold: f64,
    loss_budget_db: f64,
) -> Result<Verdict> {
    if !(qber_threshold.is_finite() && qber_threshold > 0.0) {
        return Err(Error::param(
            "qber_threshold",
            format!("must be positive, got {qber_threshold}"),
        ));
    }
    if !(loss_budget_db.is_finite() && loss_budget_db > 0.0) {
        return Err(Error::param(
            "loss_budget_db",
            format!("must be positive, got {loss_budget_db}"),
        ));
    }
    let by_qber = point.qber > qber_threshold;
    let by_loss = point.loss_db > loss_budget_db;
    Ok(match (by_qber, by_loss) {
        (false, false) => Verdict::BreaksKey,
        (true, false) => Verdict::DetectableByQber,
        (false, true) => Verdict::DetectableByLoss,
        (true, true) => Verdict::DetectableByBoth,
    })
}

#[cfg(test)]
// Frozen reference values keep every digit of the independent derivation.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::attack::worst_case_qber;
    use crate::detector::{
        LinearDetector, ParametricSuperlinearDetector, ResponseCurve, StubDetector,
        TimeResolvedResponse, WorstCaseDetector,
    };
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn linear(eta: f64) -> DetectorModel {
        LinearDetector::new(eta).unwrap().into()
    }

    fn worst(eta: f64) -> DetectorModel {
        WorstCaseDetector::new(eta).unwrap().into()
    }

    fn stub(p_full: f64, p_half: f64) -> DetectorModel {
        StubDetector::new(p_full, p_half, p_half).unwrap().into()
    }

    #[test]
    fn perfect_control_stub_reproduces_the_ideal_attack() {
        let d = stub(1.0, 0.0);
        let point = evaluate_attack(&d, &d, TriggerPulse::Coherent { mu: 40.0 }, None).unwrap();
        assert_eq!(point.qber, 0.0);
        assert_eq!(point.transmittance, 0.5);
        assert_relative_eq!(point.loss_db, 3.0102999566398120, max_relative = 1e-15);
    }

    #[test]
    fn linear_detectors_pin_the_error_rate_at_one_quarter() {
        for (eta, mu) in [(0.1, 2.0), (0.45, 17.0), (0.9, 0.3)] {
            let d = linear(eta);
            let point = evaluate_attack(&d, &d, TriggerPulse::Coherent { mu }, None).unwrap();
            assert_abs_diff_eq!(point.qber, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_photon_pulses_on_the_extremal_detector_reach_the_worst_case() {
        let d = worst(0.1);
        let point = evaluate_attack(&d, &d, TriggerPulse::Fock { photons: 2 }, None).unwrap();
        assert_eq!(point.p_f0, 1.0);
        assert_eq!(point.p_h0, 0.1);
        assert_eq!(point.qber, worst_case_qber(0.1));
    }

    #[test]
    fn odd_photon_numbers_mix_the_two_split_sizes() {
        let d = worst(0.1);
        // 3 photons split to 1 or 2: p_h = (0.1 + 1) / 2.
        let point = evaluate_attack(&d, &d, TriggerPulse::Fock { photons: 3 }, None).unwrap();
        assert_eq!(point.p_h0, 0.55);
        // 1 photon split to 0 or 1: p_h = 0.1 / 2.
        let point = evaluate_attack(&d, &d, TriggerPulse::Fock { photons: 1 }, None).unwrap();
        assert_eq!(point.p_h0, 0.05);
    }

    #[test]
    fn attack_point_rates_recompute_from_its_click_probabilities() {
        let d = linear(0.23);
        let p = evaluate_attack(&d, &d, TriggerPulse::Coherent { mu: 3.7 }, None).unwrap();
        let qber = qber_general(p.p_f0, p.p_f1, p.p_h0, p.p_h1).unwrap();
        let t = transmittance_general(p.p_f0, p.p_f1, p.p_h0, p.p_h1).unwrap();
        assert_abs_diff_eq!(p.qber, qber, epsilon = 1e-12);
        assert_abs_diff_eq!(p.transmittance, t, epsilon = 1e-12);
        assert_abs_diff_eq!(p.loss_db, loss_db(t).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn dead_detectors_cannot_be_attacked() {
        let d = stub(0.0, 0.0);
        assert!(matches!(
            evaluate_attack(&d, &d, TriggerPulse::Coherent { mu: 1.0 }, None),
            Err(Error::NoDetections)
        ));
    }

    #[test]
    fn photon_number_grid_finds_the_two_photon_optimum() {
        let d = worst(0.1);
        let scan = optimize_attack(&d, &d, PulseKind::Fock, &[1.0, 2.0, 3.0], None, Objective::MinQber).unwrap();
        let best = scan.best.unwrap();
        assert_eq!(best.mu, 2.0);
        assert_eq!(best.qber, worst_case_qber(0.1));
        assert_eq!(scan.points.len(), 3);
        assert_eq!(scan.per_mu_best.len(), 3);
    }

    #[test]
    fn fock_grids_must_hold_integers() {
        let d = worst(0.1);
        assert!(optimize_attack(&d, &d, PulseKind::Fock, &[1.5], None, Objective::MinQber).is_err());
        assert!(optimize_attack(&d, &d, PulseKind::Fock, &[-1.0], None, Objective::MinQber).is_err());
    }

    #[test]
    fn empty_grids_are_rejected() {
        let d = linear(0.1);
        assert!(matches!(
            optimize_attack(&d, &d, PulseKind::Coherent, &[], None, Objective::MinQber),
            Err(Error::Empty { .. })
        ));
        assert!(optimize_attack(&d, &d, PulseKind::Coherent, &[1.0], Some(&[]), Objective::MinQber).is_err());
    }

    #[test]
    fn ties_resolve_to_the_smallest_energy_and_earliest_time() {
        // A stub responds identically at every grid setting, so every
        // point ties.
        let d = stub(0.8, 0.1);
        let scan = optimize_attack(
            &d,
            &d,
            PulseKind::Coherent,
            &[4.0, 1.0, 2.0],
            Some(&[9.0, 3.0]),
            Objective::MinQber,
        )
        .unwrap();
        let best = scan.best.unwrap();
        assert_eq!(best.mu, 1.0);
        assert_eq!(best.t, Some(3.0));
        assert_eq!(scan.points.len(), 6);
    }

    #[test]
    fn loss_budget_can_rule_out_every_setting() {
        // Linear detector: transmittance stays far below 1, so a 0.05 dB
        // budget excludes everything.
        let d = linear(0.2);
        let grid = [0.5, 1.0, 2.0, 4.0];
        let scan = optimize_attack(
            &d,
            &d,
            PulseKind::Coherent,
            &grid,
            None,
            Objective::MinQberWithinLoss { budget_db: 0.05 },
        )
        .unwrap();
        assert!(scan.best.is_none());
        assert_eq!(scan.points.len(), grid.len());

        let generous = optimize_attack(
            &d,
            &d,
            PulseKind::Coherent,
            &grid,
            None,
            Objective::MinQberWithinLoss { budget_db: 30.0 },
        )
        .unwrap();
        assert!(generous.best.is_some());
    }

    #[test]
    fn time_resolved_scans_pick_the_superlinear_gate_tail() {
        // Early slice: nearly linear. Late slice: strongly superlinear.
        let mus = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
        let slice = |eta1: f64, eta2: f64| {
            let d: DetectorModel = ParametricSuperlinearDetector::new(eta1, eta2).unwrap().into();
            let pts = mus.iter().map(|&mu| (mu, d.coherent_prob(mu, 1e-15).unwrap())).collect();
            ResponseCurve::new("slice", pts).unwrap()
        };
        let grid: DetectorModel = TimeResolvedResponse::new(
            vec![1.0, 2.0],
            vec![slice(0.2, 1e-6), slice(1e-3, 0.05)],
        )
        .unwrap()
        .into();
        let scan = optimize_attack(
            &grid,
            &grid,
            PulseKind::Coherent,
            &[1.0, 2.0, 4.0, 8.0, 16.0],
            Some(&[1.0, 2.0]),
            Objective::MinQber,
        )
        .unwrap();
        let best = scan.best.unwrap();
        assert_eq!(best.t, Some(2.0));
        assert!(best.qber < 0.25);
        // The per-energy table has one row per grid energy.
        assert_eq!(scan.per_mu_best.len(), 5);
    }

    #[test]
    fn grid_models_require_a_time_coordinate() {
        let curve = ResponseCurve::new("c", vec![(0.5, 0.1), (2.0, 0.4)]).unwrap();
        let grid: DetectorModel = TimeResolvedResponse::new(vec![1.0], vec![curve]).unwrap().into();
        assert!(matches!(
            evaluate_attack(&grid, &grid, TriggerPulse::Coherent { mu: 1.0 }, None),
            Err(Error::TimeRequired)
        ));
    }

    #[test]
    fn curve_scans_refuse_escaping_the_tabulated_range() {
        let curve: DetectorModel =
            ResponseCurve::new("c", vec![(0.5, 0.1), (2.0, 0.4)]).unwrap().into();
        // mu = 2 needs mu/2 = 1 (fine) but mu = 4 needs p(4): out of range.
        assert!(evaluate_attack(&curve, &curve, TriggerPulse::Coherent { mu: 4.0 }, None).is_err());
        assert!(evaluate_attack(&curve, &curve, TriggerPulse::Coherent { mu: 2.0 }, None).is_ok());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_scans_are_bit_identical() {
        let d0 = linear(0.13);
        let d1: DetectorModel = ParametricSuperlinearDetector::new(0.01, 0.002).unwrap().into();
        let mu_grid: Vec<f64> = (1..=64).map(|k| 0.25 * k as f64).collect();
        let par = optimize_attack(&d0, &d1, PulseKind::Coherent, &mu_grid, None, Objective::MinQber).unwrap();
        let seq =
            optimize_attack_sequential(&d0, &d1, PulseKind::Coherent, &mu_grid, None, Objective::MinQber)
                .unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn verdicts_cover_all_four_quadrants() {
        let mk = |qber: f64, loss_db: f64| AttackPoint {
            mu: 1.0,
            t: None,
            p_f0: 1.0,
            p_f1: 1.0,
            p_h0: 0.0,
            p_h1: 0.0,
            qber,
            transmittance: 1.0,
            loss_db,
        };
        assert_eq!(feasibility_verdict(&mk(0.01, 3.0), 0.11, 20.0).unwrap(), Verdict::BreaksKey);
        assert_eq!(
            feasibility_verdict(&mk(0.2, 3.0), 0.11, 20.0).unwrap(),
            Verdict::DetectableByQber
        );
        assert_eq!(
            feasibility_verdict(&mk(0.01, 25.0), 0.11, 20.0).unwrap(),
            Verdict::DetectableByLoss
        );
        assert_eq!(
            feasibility_verdict(&mk(0.2, 25.0), 0.11, 20.0).unwrap(),
            Verdict::DetectableByBoth
        );
        // Exactly at a threshold passes as consistent with the channel.
        assert_eq!(feasibility_verdict(&mk(0.11, 20.0), 0.11, 20.0).unwrap(), Verdict::BreaksKey);
        assert!(feasibility_verdict(&mk(0.1, 3.0), 0.0, 20.0).is_err());
        assert!(feasibility_verdict(&mk(0.1, 3.0), 0.11, f64::NAN).is_err());
    }
}
