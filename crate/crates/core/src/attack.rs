//! Analytic rates of the intercept-resend detector-control attack and the
//! security bound they are judged against.
//!
//! The attack model: an eavesdropper measures every intercepted qubit in a
//! random basis and fires a bright trigger pulse at the receiver encoding
//! her result. When the receiver's active basis choice matches hers, the
//! full pulse lands on the detector carrying her bit value and fires it
//! with probability `p_f`. When the bases differ, the pulse splits evenly
//! and each of the two detectors in the conjugate basis sees half the
//! energy, clicking independently with probability `p_h`; simultaneous
//! clicks are resolved by a fair coin, as receivers commonly do. Basis
//! choices on both sides are uniform, so matching and conflicting rounds
//! are equally likely.
//!
//! Sifted errors can only come from conflicting rounds, and only half of
//! the conflicting-round detections survive sifting on average, which is
//! where the factors of two below come from. The interesting regime is
//! `p_h << p_f`: a detector that barely responds at half energy hands the
//! eavesdropper a clean copy of the key at vanishing error rate.
//!
//! Detected or not, the attack also reshapes the channel transmittance, so
//! both signatures (error rate and loss) are computed here. The defender
//! side is represented by a one-way post-processing key-rate bound and by
//! the worst attack any detector of given single-photon efficiency could
//! ever support.

use serde::Serialize;

use crate::error::{check_probability, Error, Result};

/// Combined click probability of the two conjugate-basis detectors under
/// half-energy pulses: at least one of two independent detectors fires.
fn either_half_click(p_h0: f64, p_h1: f64) -> f64 {
    p_h0 + p_h1 - p_h0 * p_h1
}

/// Sifted-key quantum bit error rate of the attack for per-detector click
/// probabilities, `p_f` at full and `p_h` at half trigger energy.
///
/// Detector 0 and detector 1 may respond differently; the result lies in
/// `[0, 0.5]`. Errs with [`Error::NoDetections`] when no click is possible
/// at either energy.
pub fn qber_general(p_f0: f64, p_f1: f64, p_h0: f64, p_h1: f64) -> Result<f64> {
    let p_f0 = check_probability("p_f0", p_f0)?;
    let p_f1 = check_probability("p_f1", p_f1)?;
    let p_h0 = check_probability("p_h0", p_h0)?;
    let p_h1 = check_probability("p_h1", p_h1)?;
    let mis = either_half_click(p_h0, p_h1);
    let denom = p_f0 + p_f1 + 2.0 * mis;
    if denom == 0.0 {
        return Err(Error::NoDetections);
    }
    Ok(mis / denom)
}

/// [`qber_general`] specialized to two identical detectors.
pub fn qber_equal(p_f: f64, p_h: f64) -> Result<f64> {
    let p_f = check_probability("p_f", p_f)?;
    let p_h = check_probability("p_h", p_h)?;
    let mis = 2.0 * p_h - p_h * p_h;
    let denom = 2.0 * p_f + 2.0 * mis;
    if denom == 0.0 {
        return Err(Error::NoDetections);
    }
    Ok(mis / denom)
}

/// Probability that a given attack round produces a detection at the
/// receiver, i.e. the channel transmittance the attack presents.
pub fn transmittance_general(p_f0: f64, p_f1: f64, p_h0: f64, p_h1: f64) -> Result<f64> {
    let p_f0 = check_probability("p_f0", p_f0)?;
    let p_f1 = check_probability("p_f1", p_f1)?;
    let p_h0 = check_probability("p_h0", p_h0)?;
    let p_h1 = check_probability("p_h1", p_h1)?;
    Ok(0.25 * (p_f0 + p_f1) + 0.5 * either_half_click(p_h0, p_h1))
}

/// [`transmittance_general`] specialized to two identical detectors.
pub fn transmittance_equal(p_f: f64, p_h: f64) -> Result<f64> {
    let p_f = check_probability("p_f", p_f)?;
    let p_h = check_probability("p_h", p_h)?;
    Ok(0.5 * p_f + 0.5 * (2.0 * p_h - p_h * p_h))
}

/// Channel transmittance expressed as attenuation in dB.
///
/// `loss_db(1) = 0` exactly; zero transmittance is refused as infinite
/// loss.
pub fn loss_db(transmittance: f64) -> Result<f64> {
    if transmittance == 0.0 {
        return Err(Error::ZeroTransmittance);
    }
    let t = check_probability("transmittance", transmittance)?;
    Ok(-10.0 * t.log10())
}

/// Binary entropy in bits. `binary_entropy(0.5) = 1` exactly.
pub fn binary_entropy(x: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&x),
        "binary_entropy: argument {x} outside [0, 1]"
    );
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -(x * x.log2() + (1.0 - x) * (1.0 - x).log2())
}

/// Asymptotic one-way secret-key rate bound
/// `R = -h(Q) + eta (1 - h(Q))`
/// for an eavesdropper limited by detection efficiency `eta` when faking
/// states, at observed error rate `Q`. Negative values mean no key is
/// extractable against such an eavesdropper.
pub fn key_rate_bound(eta: f64, qber: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&eta),
        "key_rate_bound: eta {eta} outside [0, 1]"
    );
    assert!(
        (0.0..=0.5).contains(&qber),
        "key_rate_bound: qber {qber} outside [0, 0.5]"
    );
    let h = binary_entropy(qber);
    -h + eta * (1.0 - h)
}

/// Error rate at which [`key_rate_bound`] crosses zero for a given `eta`,
/// i.e. the solution of `h(Q) = eta / (1 + eta)` on `[0, 0.5]`.
///
/// Located by bisection; the returned `Q` satisfies
/// `|key_rate_bound(eta, Q)| < 1e-10`.
pub fn bound_crossing_qber(eta: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&eta),
        "bound_crossing_qber: eta {eta} outside [0, 1]"
    );
    if eta == 0.0 {
        return 0.0;
    }
    let target = eta / (1.0 + eta);
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_entropy(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Highest error rate the detector-control attack can be forced to show
/// by a detector of single-photon efficiency `eta`, over all trigger
/// strategies: the extremal detector (`p(1) = eta`, `p(n >= 2) = 1`) hit
/// with two-photon pulses, so `p_f = 1` and `p_h = eta`.
pub fn worst_case_qber(eta: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&eta),
        "worst_case_qber: eta {eta} outside [0, 1]"
    );
    let mis = 2.0 * eta - eta * eta;
    mis / (2.0 + 2.0 * mis)
}

/// Security region of an observed operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecurityRegion {
    /// The key-rate bound is non-negative: key can be distilled even
    /// against a detector-control eavesdropper of this efficiency.
    Extractable,
    /// No key is extractable and the error rate is high enough that an
    /// eavesdropper of this efficiency can fully control the outcome.
    Attackable,
    /// No key is extractable, but no explicit attack reaches this point
    /// either; the gap is conservatively treated as insecure.
    AssumeInsecure,
}

/// Verdict of [`classify_region`] for one `(eta, qber)` operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecurityAssessment {
    pub eta: f64,
    pub qber: f64,
    /// Key-rate bound at this point; negative means not extractable.
    pub key_rate: f64,
    /// Error rate of the strongest attack available at this `eta`.
    pub attack_qber: f64,
    pub region: SecurityRegion,
    /// Set when the point satisfies the extraction and attack conditions
    /// simultaneously; such points classify as [`SecurityRegion::Extractable`].
    pub on_boundary: bool,
}

/// Place an observed `(eta, qber)` operating point relative to the
/// key-rate bound and the reach of explicit attacks.
pub fn classify_region(eta: f64, qber: f64) -> SecurityAssessment {
    let key_rate = key_rate_bound(eta, qber);
    let attack_qber = worst_case_qber(eta);
    let extractable = key_rate >= 0.0;
    let attackable = qber >= attack_qber;
    let region = if extractable {
        SecurityRegion::Extractable
    } else if attackable {
        SecurityRegion::Attackable
    } else {
        SecurityRegion::AssumeInsecure
    };
    SecurityAssessment {
        eta,
        qber,
        key_rate,
        attack_qber,
        region,
        on_boundary: extractable && attackable,
    }
}
