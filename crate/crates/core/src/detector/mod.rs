//! Detector response models.
//!
//! Single-photon threshold detectors answer "click" or "no click"; they do
//! not resolve photon number. An ideal *linear* threshold detector misses
//! each photon independently with probability `1 - eta`, so its response to
//! `n` photons is `1 - (1 - eta)^n` and its response to coherent light is
//! `1 - exp(-mu eta)`: on a log-log plot of click probability against pulse
//! energy the low-signal slope is one. Real detectors driven outside their
//! intended regime (APDs gated in the tail of the gate window,
//! superconducting detectors biased close to threshold) respond *steeper*
//! than that, and the steepness is what a faked-state attacker exploits: a
//! trigger pulse at full energy fires the detector far more reliably than
//! the same pulse split in half.
//!
//! This module provides three analytic models (the linear reference, a
//! synthetic superlinear family, and the idealized worst case), a stub with
//! directly pinned click probabilities, and containers for measured
//! response curves, optionally resolved over trigger arrival time. Measured
//! curves are interpolated log-linearly in pulse energy and are never
//! extrapolated.

mod poisson;

pub use poisson::DEFAULT_POISSON_TOL;

use crate::error::{check_probability, Error, Result};

use poisson::poisson_mixture;

/// Ideal threshold detector: photons are lost independently with
/// probability `1 - eta`, any surviving photon fires the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearDetector {
    eta: f64,
}

impl LinearDetector {
    pub fn new(eta: f64) -> Result<Self> {
        Ok(Self {
            eta: check_probability("eta", eta)?,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn fock_prob(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        -((n as f64) * (-self.eta).ln_1p()).exp_m1()
    }
}

/// Synthetic superlinear threshold detector.
///
/// Each photon fires the detector with probability `eta1` and each
/// unordered photon pair contributes an additional independent firing
/// channel of probability `eta2`, giving
///
/// ```text
/// p(n) = 1 - (1 - eta1)^n (1 - eta2)^(n(n-1)/2)
/// ```
///
/// Choosing `eta2 > 0` makes the response
/// grow faster than any linear detector's between one photon and many.
/// This is a test family with convenient closed-form photon-number
/// response, not a physical model of any particular device; measured
/// devices enter through [`ResponseCurve`] instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricSuperlinearDetector {
    eta1: f64,
    eta2: f64,
}

impl ParametricSuperlinearDetector {
    pub fn new(eta1: f64, eta2: f64) -> Result<Self> {
        Ok(Self {
            eta1: check_probability("eta1", eta1)?,
            eta2: check_probability("eta2", eta2)?,
        })
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    fn fock_prob(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let singles = n as f64;
        let pairs = singles * (n - 1) as f64 / 2.0;
        let mut ln_miss = singles * (-self.eta1).ln_1p();
        if pairs > 0.0 {
            ln_miss += pairs * (-self.eta2).ln_1p();
        }
        -ln_miss.exp_m1()
    }
}

/// Extremal superlinear detector: single photons click with probability
/// `eta`, two or more photons click with certainty. No threshold detector
/// of single-photon efficiency `eta` is steeper, so this model bounds what
/// superlinearity can ever buy an attacker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCaseDetector {
    eta: f64,
}

impl WorstCaseDetector {
    pub fn new(eta: f64) -> Result<Self> {
        Ok(Self {
            eta: check_probability("eta", eta)?,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn fock_prob(&self, n: u64) -> f64 {
        match n {
            0 => 0.0,
            1 => self.eta,
            _ => 1.0,
        }
    }
}

/// Detector with directly pinned click probabilities at full, half and
/// quarter trigger energy. Useful for exercising the attack and protocol
/// layers with exactly known inputs, e.g. a perfectly controlled detector
/// (`p_full = 1`, `p_half = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StubDetector {
    p_full: f64,
    p_half: f64,
    p_quarter: f64,
}

impl StubDetector {
    pub fn new(p_full: f64, p_half: f64, p_quarter: f64) -> Result<Self> {
        Ok(Self {
            p_full: check_probability("p_full", p_full)?,
            p_half: check_probability("p_half", p_half)?,
            p_quarter: check_probability("p_quarter", p_quarter)?,
        })
    }

    pub fn p_full(&self) -> f64 {
        self.p_full
    }

    pub fn p_half(&self) -> f64 {
        self.p_half
    }

    pub fn p_quarter(&self) -> f64 {
        self.p_quarter
    }
}

/// Measured coherent-state response: click probability tabulated against
/// mean photon number. Points are strictly increasing in `mu`; queries
/// between knots interpolate linearly in `(ln mu, p)` and queries outside
/// the tabulated range are refused.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseCurve {
    label: String,
    points: Vec<(f64, f64)>,
}

impl ResponseCurve {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        let label = label.into();
        if points.len() < 2 {
            return Err(Error::param(
                "points",
                format!("a response curve needs at least 2 points, got {}", points.len()),
            ));
        }
        for &(mu, p) in &points {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::param("mu", format!("knot energies must be finite and positive, got {mu}")));
            }
            check_probability("p", p)?;
        }
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::param(
                    "mu",
                    format!("knot energies must be strictly increasing, got {} after {}", pair[1].0, pair[0].0),
                ));
            }
        }
        Ok(Self { label, points })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn mu_min(&self) -> f64 {
        self.points[0].0
    }

    pub fn mu_max(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// Click probability at mean photon number `mu`.
    ///
    /// Exact at the knots; log-linear in `mu` between them; clamped to
    /// `[0, 1]`; refused outside `[mu_min, mu_max]`.
    pub fn evaluate(&self, mu: f64) -> Result<f64> {
        if !mu.is_finite() || mu < self.mu_min() || mu > self.mu_max() {
            return Err(Error::OutOfRange {
                axis: "mu",
                value: mu,
                min: self.mu_min(),
                max: self.mu_max(),
            });
        }
        let idx = self.points.partition_point(|&(x, _)| x < mu);
        if idx < self.points.len() && self.points[idx].0 == mu {
            return Ok(self.points[idx].1);
        }
        let (x0, p0) = self.points[idx - 1];
        let (x1, p1) = self.points[idx];
        let t = (mu.ln() - x0.ln()) / (x1.ln() - x0.ln());
        Ok((p0 + t * (p1 - p0)).clamp(0.0, 1.0))
    }
}

/// Measured response resolved over trigger arrival time: one
/// [`ResponseCurve`] per tabulated time, all sharing the same energy axis.
/// Time lookup snaps to the nearest tabulated time (earlier wins a tie);
/// queries outside the tabulated time window are refused.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeResolvedResponse {
    times: Vec<f64>,
    curves: Vec<ResponseCurve>,
}

impl TimeResolvedResponse {
    pub fn new(times: Vec<f64>, curves: Vec<ResponseCurve>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::param("times", "a time-resolved response needs at least one time slice"));
        }
        if times.len() != curves.len() {
            return Err(Error::param(
                "curves",
                format!("{} times but {} curves", times.len(), curves.len()),
            ));
        }
        for &t in &times {
            if !t.is_finite() {
                return Err(Error::param("times", format!("times must be finite, got {t}")));
            }
        }
        for pair in times.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::param(
                    "times",
                    format!("times must be strictly increasing, got {} after {}", pair[1], pair[0]),
                ));
            }
        }
        let axis: Vec<f64> = curves[0].points().iter().map(|&(mu, _)| mu).collect();
        for curve in &curves[1..] {
            let same = curve.points().len() == axis.len()
                && curve.points().iter().zip(&axis).all(|(&(mu, _), &a)| mu == a);
            if !same {
                return Err(Error::param("curves", "all time slices must share one energy axis"));
            }
        }
        Ok(Self { times, curves })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn curves(&self) -> &[ResponseCurve] {
        &self.curves
    }

    pub fn t_min(&self) -> f64 {
        self.times[0]
    }

    pub fn t_max(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Curve belonging to the tabulated time nearest to `t`.
    pub fn slice_at(&self, t: f64) -> Result<&ResponseCurve> {
        if !t.is_finite() || t < self.t_min() || t > self.t_max() {
            return Err(Error::OutOfRange {
                axis: "t",
                value: t,
                min: self.t_min(),
                max: self.t_max(),
            });
        }
        let idx = self.times.partition_point(|&x| x < t);
        if idx == 0 {
            return Ok(&self.curves[0]);
        }
        if idx == self.times.len() {
            return Ok(&self.curves[idx - 1]);
        }
        // Equidistant queries resolve to the earlier tabulated time.
        if t - self.times[idx - 1] <= self.times[idx] - t {
            Ok(&self.curves[idx - 1])
        } else {
            Ok(&self.curves[idx])
        }
    }

    /// Click probability at arrival time `t` and mean photon number `mu`.
    pub fn lookup(&self, t: f64, mu: f64) -> Result<f64> {
        self.slice_at(t)?.evaluate(mu)
    }
}

/// Any detector description accepted by the attack and simulation layers.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectorModel {
    Linear(LinearDetector),
    Superlinear(ParametricSuperlinearDetector),
    WorstCase(WorstCaseDetector),
    Stub(StubDetector),
    Curve(ResponseCurve),
    Grid(TimeResolvedResponse),
}

impl DetectorModel {
    /// Human-readable model kind, used in error messages and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            DetectorModel::Linear(_) => "linear detector",
            DetectorModel::Superlinear(_) => "parametric superlinear detector",
            DetectorModel::WorstCase(_) => "worst-case detector",
            DetectorModel::Stub(_) => "stub detector",
            DetectorModel::Curve(_) => "measured response curve",
            DetectorModel::Grid(_) => "time-resolved response grid",
        }
    }

    /// Click probability under an `n`-photon Fock pulse.
    ///
    /// Only the analytic models carry a photon-number law; stubs and
    /// measured data refuse.
    pub fn fock_prob(&self, n: u64) -> Result<f64> {
        match self {
            DetectorModel::Linear(d) => Ok(d.fock_prob(n)),
            DetectorModel::Superlinear(d) => Ok(d.fock_prob(n)),
            DetectorModel::WorstCase(d) => Ok(d.fock_prob(n)),
            DetectorModel::Stub(_) | DetectorModel::Curve(_) | DetectorModel::Grid(_) => {
                Err(Error::NoFockLaw { model: self.kind() })
            }
        }
    }

    /// Click probability under a coherent pulse of mean photon number
    /// `mu`, computed by Poisson-averaging the photon-number law with tail
    /// tolerance `tol`.
    ///
    /// Like [`DetectorModel::fock_prob`] this is defined for the analytic
    /// models only; measured curves are queried through
    /// [`ResponseCurve::evaluate`] or [`TimeResolvedResponse::lookup`].
    pub fn coherent_prob(&self, mu: f64, tol: f64) -> Result<f64> {
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::param("mu", format!("mean photon number must be finite and non-negative, got {mu}")));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::param("tol", format!("tail tolerance must be positive, got {tol}")));
        }
        match self {
            DetectorModel::Linear(d) => Ok(poisson_mixture(mu, tol, |n| d.fock_prob(n))),
            DetectorModel::Superlinear(d) => Ok(poisson_mixture(mu, tol, |n| d.fock_prob(n))),
            DetectorModel::WorstCase(d) => Ok(poisson_mixture(mu, tol, |n| d.fock_prob(n))),
            DetectorModel::Stub(_) | DetectorModel::Curve(_) | DetectorModel::Grid(_) => {
                Err(Error::NoFockLaw { model: self.kind() })
            }
        }
    }
}

impl From<LinearDetector> for DetectorModel {
    fn from(d: LinearDetector) -> Self {
        DetectorModel::Linear(d)
    }
}

impl From<ParametricSuperlinearDetector> for DetectorModel {
    fn from(d: ParametricSuperlinearDetector) -> Self {
        DetectorModel::Superlinear(d)
    }
}

impl From<WorstCaseDetector> for DetectorModel {
    fn from(d: WorstCaseDetector) -> Self {
        DetectorModel::WorstCase(d)
    }
}

impl From<StubDetector> for DetectorModel {
    fn from(d: StubDetector) -> Self {
        DetectorModel::Stub(d)
    }
}

impl From<ResponseCurve> for DetectorModel {
    fn from(c: ResponseCurve) -> Self {
        DetectorModel::Curve(c)
    }
}

impl From<TimeResolvedResponse> for DetectorModel {
    fn from(g: TimeResolvedResponse) -> Self {
        DetectorModel::Grid(g)
    }
}

/// Click probability of `model` under an `n`-photon Fock pulse.
pub fn fock_detection_prob(model: &DetectorModel, n: u64) -> Result<f64> {
    model.fock_prob(n)
}

/// Click probability of `model` under a coherent pulse of mean photon
/// number `mu`, with Poisson tail tolerance `tol`
/// (see [`DEFAULT_POISSON_TOL`]).
pub fn coherent_detection_prob(model: &DetectorModel, mu: f64, tol: f64) -> Result<f64> {
    model.coherent_prob(mu, tol)
}

/// Single-photon efficiency inferred from one coherent-state measurement
/// `(mu, p)` under the linear-detector assumption `p = 1 - exp(-mu eta)`.
///
/// Saturated points (`p = 1`) carry no efficiency information and are
/// refused, as are points whose inferred efficiency exceeds one.
pub fn efficiency_from_coherent_point(p: f64, mu: f64) -> Result<f64> {
    check_probability("p", p)?;
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::param("mu", format!("mean photon number must be finite and positive, got {mu}")));
    }
    if p == 1.0 {
        return Err(Error::Saturated { mu });
    }
    let eta = -(-p).ln_1p() / mu;
    if eta > 1.0 {
        return Err(Error::SuperunityEfficiency { eta, mu });
    }
    Ok(eta)
}

/// Interpolated click probability of a measured curve at `mu`.
pub fn interpolate_response(curve: &ResponseCurve, mu: f64) -> Result<f64> {
    curve.evaluate(mu)
}

/// Click probability of a time-resolved measurement at arrival time `t`
/// and mean photon number `mu`.
pub fn time_resolved_lookup(grid: &TimeResolvedResponse, t: f64, mu: f64) -> Result<f64> {
    grid.lookup(t, mu)
}

/// How much steeper a measured curve is at `mu` than the linear detector
/// calibrated to match it at `mu_ref`.
///
/// The reference efficiency is extracted from the curve's own response at
/// `mu_ref`; the ratio is `p(mu) / (1 - exp(-mu eta_ref))`. A linear
/// detector gives 1 everywhere; values above 1 quantify superlinearity.
pub fn superlinearity_ratio(curve: &ResponseCurve, mu: f64, mu_ref: f64) -> Result<f64> {
    let p_ref = curve.evaluate(mu_ref)?;
    if p_ref == 0.0 {
        return Err(Error::ZeroReference { mu_ref });
    }
    let eta_ref = efficiency_from_coherent_point(p_ref, mu_ref)?;
    let p = curve.evaluate(mu)?;
    Ok(p / -(-mu * eta_ref).exp_m1())
}
