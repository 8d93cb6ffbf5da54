//! Monte Carlo simulation of BB84 reception under the detector-control
//! attack, and an exact enumeration of the same event tree.
//!
//! The simulation is the stochastic oracle for the analytic rates: it
//! models each protocol round event by event (basis choices, pulse
//! splitting, detector clicks, double-click resolution, sifting) without
//! reusing any of the closed-form expressions, so agreement between the
//! two is evidence for both.
//!
//! One round: Alice sends a qubit in a uniformly random basis. The
//! attacker measures it in her own uniformly random basis, learning
//! Alice's bit when the bases agree and a uniform bit otherwise, then
//! fires a trigger pulse at the receiver encoding her basis and bit. At an
//! *active* receiver the pulse either lands wholly on the detector
//! matching the attacker's bit (bases agree) or splits evenly over the two
//! detectors of the conjugate basis. At a *passive* receiver a beam
//! splitter halves the pulse between the analyzers first, so the matching
//! analyzer's target detector sees half energy and each detector of the
//! conjugate analyzer sees a quarter. Simultaneous clicks are resolved by
//! fair coins (bit within an analyzer, basis across analyzers); rounds
//! whose resolved basis differs from Alice's are discarded by sifting.
//!
//! Trials are split into fixed-size batches, each driven by its own
//! counter-seeded RNG stream, and batch tallies are summed. The parallel
//! and sequential drivers therefore produce bit-identical statistics for
//! a given seed and trial count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::detector::DetectorModel;
use crate::error::{check_probability, Error, Result};
use crate::scan::{click_probability, PowerFraction, TriggerPulse};

/// Trials per RNG stream. Fixed so that a tally is a pure function of
/// `(seed, trials)`, independent of thread scheduling.
const TRIALS_PER_BATCH: u64 = 16_384;

/// Receiver basis-choice architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisMode {
    /// The receiver switches one analyzer into a random basis each round.
    Active,
    /// A beam splitter routes each pulse to both analyzers at half energy.
    Passive,
}

/// Full description of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Protocol rounds to simulate.
    pub trials: u64,
    /// Mean photon number of the attacker's trigger pulse at the
    /// receiver's entrance.
    pub mu: f64,
    /// Trigger arrival time, for time-resolved detector data.
    pub t: Option<f64>,
    /// Receiver architecture dispatched by [`simulate`].
    pub basis_mode: BasisMode,
    /// RNG seed; equal seeds reproduce equal statistics exactly.
    pub seed: u64,
    /// Detector carrying bit 0, in either analyzer.
    pub detector0: DetectorModel,
    /// Detector carrying bit 1, in either analyzer.
    pub detector1: DetectorModel,
}

/// Tallies and derived estimates of one simulation run.
///
/// `qber_estimate` and its standard error are `None` when no sifted
/// detection occurred; a run without detections is a valid (flagged)
/// outcome, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimStats {
    pub trials: u64,
    /// Rounds with at least one click, sifted or not.
    pub detections: u64,
    /// Sifted detections whose resolved bit differs from Alice's.
    pub errors: u64,
    /// Rounds where more than one detector fired.
    pub double_clicks: u64,
    /// Detections discarded because the resolved basis differs from
    /// Alice's.
    pub wrong_basis_detections: u64,
    /// Detections surviving sifting.
    pub sifted_detections: u64,
    /// `errors / sifted_detections`.
    pub qber_estimate: Option<f64>,
    /// `detections / trials`.
    pub transmittance_estimate: f64,
    /// Binomial standard error of `qber_estimate` over the sifted sample.
    pub qber_stderr: Option<f64>,
    /// Binomial standard error of `transmittance_estimate`.
    pub transmittance_stderr: f64,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    detections: u64,
    errors: u64,
    double_clicks: u64,
    wrong_basis: u64,
    sifted: u64,
}

impl Tally {
    fn merge(self, other: Self) -> Self {
        Tally {
            detections: self.detections + other.detections,
            errors: self.errors + other.errors,
            double_clicks: self.double_clicks + other.double_clicks,
            wrong_basis: self.wrong_basis + other.wrong_basis,
            sifted: self.sifted + other.sifted,
        }
    }
}

/// Click probabilities resolved ahead of the trial loop.
struct ActiveProbs {
    p_f: [f64; 2],
    p_h: [f64; 2],
}

struct PassiveProbs {
    /// Matching analyzer, target detector, at half energy.
    q_match: [f64; 2],
    /// Conjugate analyzer detectors, at quarter energy.
    q_mis: [f64; 2],
}

fn validate(config: &SimConfig) -> Result<TriggerPulse> {
    if config.trials == 0 {
        return Err(Error::param("trials", "at least one trial is required"));
    }
    if !(config.mu.is_finite() && config.mu >= 0.0) {
        return Err(Error::param(
            "mu",
            format!("pulse energy must be finite and non-negative, got {}", config.mu),
        ));
    }
    Ok(TriggerPulse::Coherent { mu: config.mu })
}

fn active_probs(config: &SimConfig) -> Result<ActiveProbs> {
    let pulse = validate(config)?;
    let dets = [&config.detector0, &config.detector1];
    let mut p_f = [0.0; 2];
    let mut p_h = [0.0; 2];
    for (i, det) in dets.iter().enumerate() {
        p_f[i] = click_probability(det, pulse, PowerFraction::Full, config.t)?;
        p_h[i] = click_probability(det, pulse, PowerFraction::Half, config.t)?;
    }
    Ok(ActiveProbs { p_f, p_h })
}

fn passive_probs(config: &SimConfig) -> Result<PassiveProbs> {
    let pulse = validate(config)?;
    let dets = [&config.detector0, &config.detector1];
    let mut q_match = [0.0; 2];
    let mut q_mis = [0.0; 2];
    for (i, det) in dets.iter().enumerate() {
        q_match[i] = click_probability(det, pulse, PowerFraction::Half, config.t)?;
        q_mis[i] = click_probability(det, pulse, PowerFraction::Quarter, config.t)?;
    }
    Ok(PassiveProbs { q_match, q_mis })
}

fn coin(rng: &mut ChaCha8Rng) -> bool {
    rng.random::<f64>() < 0.5
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.random::<f64>() < p
}

fn active_trial(rng: &mut ChaCha8Rng, p: &ActiveProbs, tally: &mut Tally) {
    let eve_matches_alice = coin(rng);
    let bob_matches_eve = coin(rng);
    let alice_bit = usize::from(coin(rng));
    let eve_bit = if eve_matches_alice { alice_bit } else { usize::from(coin(rng)) };
    // Sifting keeps rounds where Bob's basis equals Alice's.
    let sifted_round = eve_matches_alice == bob_matches_eve;

    if bob_matches_eve {
        if bernoulli(rng, p.p_f[eve_bit]) {
            tally.detections += 1;
            if sifted_round {
                tally.sifted += 1;
                if eve_bit != alice_bit {
                    tally.errors += 1;
                }
            } else {
                tally.wrong_basis += 1;
            }
        }
    } else {
        let c0 = bernoulli(rng, p.p_h[0]);
        let c1 = bernoulli(rng, p.p_h[1]);
        if c0 || c1 {
            tally.detections += 1;
            let bob_bit = match (c0, c1) {
                (true, false) => 0,
                (false, true) => 1,
                _ => {
                    tally.double_clicks += 1;
                    usize::from(coin(rng))
                }
            };
            if sifted_round {
                tally.sifted += 1;
                if bob_bit != alice_bit {
                    tally.errors += 1;
                }
            } else {
                tally.wrong_basis += 1;
            }
        }
    }
}

fn passive_trial(rng: &mut ChaCha8Rng, p: &PassiveProbs, tally: &mut Tally) {
    let eve_matches_alice = coin(rng);
    let alice_bit = usize::from(coin(rng));
    let eve_bit = if eve_matches_alice { alice_bit } else { usize::from(coin(rng)) };

    // Click pattern: the matching analyzer concentrates its half of the
    // pulse on the attacker's target detector; the conjugate analyzer
    // splits its half over both of its detectors.
    let m = bernoulli(rng, p.q_match[eve_bit]);
    let c0 = bernoulli(rng, p.q_mis[0]);
    let c1 = bernoulli(rng, p.q_mis[1]);
    if !(m || c0 || c1) {
        return;
    }
    tally.detections += 1;
    if usize::from(m) + usize::from(c0) + usize::from(c1) > 1 {
        tally.double_clicks += 1;
    }

    // Resolve which analyzer's result Bob records, and its bit.
    let (bob_in_eve_basis, bob_bit) = match (m, c0, c1) {
        (true, false, false) => (true, eve_bit),
        (false, true, false) => (false, 0),
        (false, false, true) => (false, 1),
        (false, true, true) => (false, usize::from(coin(rng))),
        // Clicks in both analyzers: a fair coin picks the basis first.
        _ => {
            if coin(rng) {
                (true, eve_bit)
            } else {
                let bit = match (c0, c1) {
                    (true, false) => 0,
                    (false, true) => 1,
                    (true, true) => usize::from(coin(rng)),
                    (false, false) => unreachable!("cross-basis branch requires a conjugate click"),
                };
                (false, bit)
            }
        }
    };

    // Alice's basis is Eve's exactly when their bases matched.
    if bob_in_eve_basis == eve_matches_alice {
        tally.sifted += 1;
        if bob_bit != alice_bit {
            tally.errors += 1;
        }
    } else {
        tally.wrong_basis += 1;
    }
}

fn batch_tally(
    seed: u64,
    trials: u64,
    batch: u64,
    trial: &(impl Fn(&mut ChaCha8Rng, &mut Tally) + Sync),
) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    let in_batch = (trials - batch * TRIALS_PER_BATCH).min(TRIALS_PER_BATCH);
    let mut tally = Tally::default();
    for _ in 0..in_batch {
        trial(&mut rng, &mut tally);
    }
    tally
}

fn run_batches(seed: u64, trials: u64, trial: impl Fn(&mut ChaCha8Rng, &mut Tally) + Sync) -> Tally {
    let n_batches = trials.div_ceil(TRIALS_PER_BATCH);
    #[cfg(feature = "parallel")]
    {
        (0..n_batches)
            .into_par_iter()
            .map(|b| batch_tally(seed, trials, b, &trial))
            .reduce(Tally::default, Tally::merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_batches)
            .map(|b| batch_tally(seed, trials, b, &trial))
            .fold(Tally::default(), Tally::merge)
    }
}

fn run_batches_sequential(
    seed: u64,
    trials: u64,
    trial: impl Fn(&mut ChaCha8Rng, &mut Tally) + Sync,
) -> Tally {
    let n_batches = trials.div_ceil(TRIALS_PER_BATCH);
    (0..n_batches)
        .map(|b| batch_tally(seed, trials, b, &trial))
        .fold(Tally::default(), Tally::merge)
}

fn finish(trials: u64, tally: Tally) -> SimStats {
    let t_est = tally.detections as f64 / trials as f64;
    let t_se = (t_est * (1.0 - t_est) / trials as f64).sqrt();
    let (qber_estimate, qber_stderr) = if tally.sifted > 0 {
        let q = tally.errors as f64 / tally.sifted as f64;
        (Some(q), Some((q * (1.0 - q) / tally.sifted as f64).sqrt()))
    } else {
        (None, None)
    };
    SimStats {
        trials,
        detections: tally.detections,
        errors: tally.errors,
        double_clicks: tally.double_clicks,
        wrong_basis_detections: tally.wrong_basis,
        sifted_detections: tally.sifted,
        qber_estimate,
        transmittance_estimate: t_est,
        qber_stderr,
        transmittance_stderr: t_se,
    }
}

/// Simulate an actively switched receiver under attack.
pub fn simulate_active(config: &SimConfig) -> Result<SimStats> {
    let probs = active_probs(config)?;
    let tally = run_batches(config.seed, config.trials, |rng, tally| {
        active_trial(rng, &probs, tally)
    });
    Ok(finish(config.trials, tally))
}

/// [`simulate_active`] on a single thread, regardless of crate features.
/// Bit-identical to the parallel driver by construction.
pub fn simulate_active_sequential(config: &SimConfig) -> Result<SimStats> {
    let probs = active_probs(config)?;
    let tally = run_batches_sequential(config.seed, config.trials, |rng, tally| {
        active_trial(rng, &probs, tally)
    });
    Ok(finish(config.trials, tally))
}

/// Simulate a passive (beam-splitter) receiver under attack.
pub fn simulate_passive(config: &SimConfig) -> Result<SimStats> {
    let probs = passive_probs(config)?;
    let tally = run_batches(config.seed, config.trials, |rng, tally| {
        passive_trial(rng, &probs, tally)
    });
    Ok(finish(config.trials, tally))
}

/// [`simulate_passive`] on a single thread, regardless of crate features.
pub fn simulate_passive_sequential(config: &SimConfig) -> Result<SimStats> {
    let probs = passive_probs(config)?;
    let tally = run_batches_sequential(config.seed, config.trials, |rng, tally| {
        passive_trial(rng, &probs, tally)
    });
    Ok(finish(config.trials, tally))
}

/// Run the receiver architecture selected by `config.basis_mode`.
pub fn simulate(config: &SimConfig) -> Result<SimStats> {
    match config.basis_mode {
        BasisMode::Active => simulate_active(config),
        BasisMode::Passive => simulate_passive(config),
    }
}

/// Exact per-round rates of the active-receiver event tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactRates {
    /// Error probability within sifted detections.
    pub qber: f64,
    /// Detection probability per round.
    pub transmittance: f64,
}

/// Enumerate the active-receiver event tree leaf by leaf for given click
/// probabilities, weighting every branch exactly.
///
/// This walks the same tree as [`simulate_active`] but integrates it
/// analytically, without the closed-form rate expressions; it serves as an
/// independent cross-check for both.
pub fn enumerate_exact(p_f0: f64, p_f1: f64, p_h0: f64, p_h1: f64) -> Result<ExactRates> {
    let p_f = [
        check_probability("p_f0", p_f0)?,
        check_probability("p_f1", p_f1)?,
    ];
    let p_h = [
        check_probability("p_h0", p_h0)?,
        check_probability("p_h1", p_h1)?,
    ];

    let mut detect_w = 0.0;
    let mut sift_w = 0.0;
    let mut err_w = 0.0;

    for ema in [true, false] {
        for bme in [true, false] {
            for alice_bit in 0usize..2 {
                // Eve's bit: Alice's when their bases match, else uniform.
                let eve_bits: &[(usize, f64)] = if ema {
                    &[(alice_bit, 1.0)]
                } else {
                    &[(0, 0.5), (1, 0.5)]
                };
                for &(eve_bit, w_eve) in eve_bits {
                    // Three fair coins: Eve-vs-Alice basis, Bob-vs-Eve
                    // basis, Alice's bit.
                    let w = 0.125 * w_eve;
                    let sifted = ema == bme;
                    if bme {
                        let w_click = w * p_f[eve_bit];
                        detect_w += w_click;
                        if sifted {
                            sift_w += w_click;
                            if eve_bit != alice_bit {
                                err_w += w_click;
                            }
                        }
                    } else {
                        for c0 in [false, true] {
                            for c1 in [false, true] {
                                if !(c0 || c1) {
                                    continue;
                                }
                                let w0 = if c0 { p_h[0] } else { 1.0 - p_h[0] };
                                let w1 = if c1 { p_h[1] } else { 1.0 - p_h[1] };
                                let w_pat = w * w0 * w1;
                                detect_w += w_pat;
                                if sifted {
                                    sift_w += w_pat;
                                    match (c0, c1) {
                                        (true, false) => {
                                            if alice_bit != 0 {
                                                err_w += w_pat;
                                            }
                                        }
                                        (false, true) => {
                                            if alice_bit != 1 {
                                                err_w += w_pat;
                                            }
                                        }
                                        // Double click: fair coin, wrong
                                        // half the time whatever Alice sent.
                                        _ => err_w += 0.5 * w_pat,
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if sift_w == 0.0 {
        return Err(Error::NoDetections);
    }
    Ok(ExactRates {
        qber: err_w / sift_w,
        transmittance: detect_w,
    })
}
