//! Schramm's left-passage probability for chordal SLE in the half-plane.
//!
//! With `u = tan t` and `b = 4 / kappa`,
//!
//! ```text
//! P(t) = 1/2 + C(kappa) * u * 2F1(1/2, b; 3/2; -u^2),
//! C(kappa) = Gamma(b) / (sqrt(pi) * Gamma(b - 1/2)),
//! ```
//!
//! and `u * 2F1(1/2, b; 3/2; -u^2)` is the integral of `(1 + s^2)^-b` from 0
//! to `u`. That integral is summed as a Pfaff-transformed series for moderate
//! `u` and as its tail expansion in `1/u^2` for large `u`, which reaches
//! `t = pi/2` exactly.

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;
// Above this u^2 the tail series converges at least as fast as 1/4 per term.
const TAIL_FROM: f64 = 4.0;

/// `2F1(1/2, b; 3/2; -u2)` for `u2 >= 0`.
///
/// For `b <= 1/2` the tail expansion does not exist and the Pfaff series is
/// used throughout; it slows down as `u2` grows (about `u2` terms).
pub fn gauss_2f1_negz(b: f64, u2: f64) -> f64 {
    if u2 == 0.0 {
        return 1.0;
    }
    if u2.is_infinite() {
        return 0.0;
    }
    let u = u2.sqrt();
    if u2 <= TAIL_FROM || b <= 0.5 {
        pfaff_series(b, u2)
    } else {
        integral(b, u) / u
    }
}

// (1 + u2)^-b * sum_n (b)_n / (3/2)_n x^n with x = u2 / (1 + u2).
fn pfaff_series(b: f64, u2: f64) -> f64 {
    let x = u2 / (1.0 + u2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (b + n) / (1.5 + n) * x;
        sum += term;
        if term.abs() <= REL_TOL * sum.abs() {
            break;
        }
    }
    (1.0 + u2).powf(-b) * sum
}

/// `integral_0^u (1 + s^2)^-b ds` for `u >= 0`; needs `b > 1/2` once `u^2 > 4`.
fn integral(b: f64, u: f64) -> f64 {
    if u * u <= TAIL_FROM {
        return u * pfaff_series(b, u * u);
    }
    debug_assert!(b > 0.5);
    // full integral minus sum_k binom(-b, k) u^(1 - 2b - 2k) / (2b + 2k - 1)
    let full = std::f64::consts::PI.sqrt() / 2.0 * (ln_gamma(b - 0.5) - ln_gamma(b)).exp();
    if u.is_infinite() {
        return full;
    }
    let inv2 = 1.0 / (u * u);
    let mut coeff = 1.0; // binom(-b, k)
    let mut power = u.powf(1.0 - 2.0 * b);
    let mut tail = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let term = coeff * power / (2.0 * b + 2.0 * kf - 1.0);
        tail += term;
        if term.abs() <= REL_TOL * tail.abs() {
            break;
        }
        coeff *= -(b + kf) / (kf + 1.0);
        power *= inv2;
    }
    full - tail
}

/// `Gamma(4/kappa) / (sqrt(pi) Gamma((8 - kappa) / (2 kappa)))`.
pub fn schramm_prefactor(kappa: f64) -> f64 {
    let b = 4.0 / kappa;
    gamma(b) / (std::f64::consts::PI.sqrt() * gamma(b - 0.5))
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa < 8.0) {
        return Err(Error::Domain(format!(
            "kappa must lie in (0, 8), got {kappa}"
        )));
    }
    Ok(())
}

/// Probability that an SLE_kappa trace from 0 to infinity passes to the left of
/// a point seen at angle `t` from the vertical. `t = +-pi/2` gives the limits.
pub fn schramm_lpp(t: f64, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(t.abs() <= half_pi) {
        return Err(Error::Domain(format!(
            "angle must lie in [-pi/2, pi/2], got {t}"
        )));
    }
    let b = 4.0 / kappa;
    let u = if t.abs() == half_pi {
        f64::INFINITY
    } else {
        t.tan().abs()
    };
    // ratio of gammas in log form: b = 4/kappa grows without bound as kappa -> 0
    let c = (ln_gamma(b) - ln_gamma(b - 0.5)).exp() / std::f64::consts::PI.sqrt();
    let half_width = (c * integral(b, u)).min(0.5);
    Ok(if t >= 0.0 {
        0.5 + half_width
    } else {
        0.5 - half_width
    })
}
