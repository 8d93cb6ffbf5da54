//! Poisson-weighted averaging of photon-number response laws.
//!
//! A coherent pulse of mean photon number `mu` delivers `n` photons with
//! probability `e^-mu mu^n / n!`. The click probability of a detector under
//! such a pulse is the Poisson average of its photon-number response. The
//! series is truncated at the smallest photon number whose remaining tail
//! mass drops below a caller-chosen tolerance, then renormalized by the
//! mass actually included, so the truncation bias stays below the
//! tolerance even when the response keeps growing in the tail.

use statrs::function::gamma::ln_gamma;

/// Default tail-mass tolerance for truncating Poisson averages.
pub const DEFAULT_POISSON_TOL: f64 = 1e-12;

/// Above this mean photon number the series is summed outward from the
/// modal term; summing upward from `n = 0` would start from a weight that
/// underflows long before the mode carries any mass.
const MODE_ANCHOR_THRESHOLD: f64 = 500.0;

/// Hard cap on the number of photon-number terms. The tail-mass stopping
/// rules fire far earlier; the cap only guards against a non-converging
/// loop under pathological floating-point input.
fn term_cap(mu: f64) -> u64 {
    (mu + 60.0 * mu.sqrt() + 200.0) as u64
}

/// Poisson average of `p_det` over photon number at mean `mu`.
///
/// `p_det` must map every photon number into `[0, 1]`; the result is
/// clamped there to absorb summation round-off. `mu = 0` short-circuits
/// to the vacuum response.
pub(crate) fn poisson_mixture(mu: f64, tol: f64, p_det: impl Fn(u64) -> f64) -> f64 {
    debug_assert!(mu >= 0.0, "mean photon number must be non-negative");
    debug_assert!(tol > 0.0, "tail tolerance must be positive");
    if mu == 0.0 {
        return p_det(0);
    }
    if mu <= MODE_ANCHOR_THRESHOLD {
        forward_sum(mu, tol, p_det)
    } else {
        mode_anchored_sum(mu, tol, p_det)
    }
}

/// Upward summation from `n = 0`, tracking the exact cumulative mass.
fn forward_sum(mu: f64, tol: f64, p_det: impl Fn(u64) -> f64) -> f64 {
    let cap = term_cap(mu);
    let mut w = (-mu).exp();
    let mut acc = 0.0;
    let mut mass = 0.0;
    let mut n = 0u64;
    loop {
        acc += w * p_det(n);
        mass += w;
        if 1.0 - mass < tol || n >= cap {
            break;
        }
        n += 1;
        w *= mu / n as f64;
    }
    (acc / mass).clamp(0.0, 1.0)
}

/// Two-sided summation anchored at the modal weight, for large means.
///
/// The anchor weight is computed in log space and carries a few ulps of
/// `ln_gamma` error; dividing by the included mass cancels that common
/// factor. Terms below `floor_w` are dropped: the neglected tail is
/// smaller than `tol` relative to the total mass because the weights decay
/// at least geometrically past the stopping points.
fn mode_anchored_sum(mu: f64, tol: f64, p_det: impl Fn(u64) -> f64) -> f64 {
    let mode = mu.floor();
    let w_mode = (mode * mu.ln() - mu - ln_gamma(mode + 1.0)).exp();
    let floor_w = w_mode * (tol * 1e-3) / (1.0 + mu.sqrt());
    let mode = mode as u64;
    let cap = term_cap(mu);

    let mut acc = w_mode * p_det(mode);
    let mut mass = w_mode;

    let mut w = w_mode;
    let mut n = mode;
    while n < cap {
        n += 1;
        w *= mu / n as f64;
        acc += w * p_det(n);
        mass += w;
        if w < floor_w {
            break;
        }
    }

    w = w_mode;
    n = mode;
    while n > 0 {
        w *= n as f64 / mu;
        n -= 1;
        acc += w * p_det(n);
        mass += w;
        if w < floor_w {
            break;
        }
    }

    (acc / mass).clamp(0.0, 1.0)
}
