//! Tricomi's confluent hypergeometric function U(a; b; z) for real a > 0, z > 0.
//!
//! Uses the integral representation
//!
//! ```text
//! U(a, b, z) = 1/Gamma(a) * int_0^inf exp(-z t) t^(a-1) (1+t)^(b-a-1) dt
//! ```
//!
//! rescaled with tau = z t so the exponential weight is exp(-tau):
//!
//! ```text
//! U(a, b, z) = z^(-a) / Gamma(a) * int_0^inf exp(-tau) tau^(a-1) (1 + tau/z)^(b-a-1) dtau
//! ```
//!
//! The integrand is positive for every real b, so there is no cancellation even
//! when b is large and negative. The range is split at tau = 1; the head uses
//! tau = w^(1/a) when a < 1 to remove the endpoint singularity, the tail uses
//! tau = exp(u).

use super::adaptive::integrate_adaptive;
use super::gamma::ln_gamma;
use super::{ADAPTIVE_MAX_INTERVALS, SPECIAL_FN_REL_TOL};
use crate::error::{Error, Result};

/// Per-piece tolerance; two positive pieces keep the sum within the public target.
const PIECE_REL_TOL: f64 = SPECIAL_FN_REL_TOL * 1e-2;

/// ln U(a, b, z).
pub fn tricomi_u_ln(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "tricomi_u needs a finite a > 0"));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("z", z, "tricomi_u needs a finite z > 0"));
    }
    if !b.is_finite() {
        return Err(Error::domain("b", b, "tricomi_u needs a finite b"));
    }

    let c = b - a - 1.0;
    // Exactly Gamma(a): U(a, a+1, z) = z^-a.
    if c == 0.0 {
        return Ok(-a * z.ln());
    }

    let ln_weight = |tau: f64| c * (tau / z).ln_1p() - tau;
    let ln_integrand = |tau: f64| (a - 1.0) * tau.ln() + ln_weight(tau);

    let tau_max = 800.0 + 20.0 * (a + c.max(0.0));
    let shift = (0..=64)
        .map(|k| {
            let tau = 1e-6 * (tau_max / 1e-6).powf(k as f64 / 64.0);
            ln_integrand(tau)
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let head = if a < 1.0 {
        integrate_adaptive(
            |w: f64| {
                if w == 0.0 {
                    return (-shift).exp() / a;
                }
                (ln_weight(w.powf(1.0 / a)) - shift).exp() / a
            },
            0.0,
            1.0,
            PIECE_REL_TOL,
            0.0,
            ADAPTIVE_MAX_INTERVALS,
        )?
    } else {
        integrate_adaptive(
            |tau: f64| {
                if tau == 0.0 {
                    return if a == 1.0 { (-shift).exp() } else { 0.0 };
                }
                (ln_integrand(tau) - shift).exp()
            },
            0.0,
            1.0,
            PIECE_REL_TOL,
            0.0,
            ADAPTIVE_MAX_INTERVALS,
        )?
    };

    let tail = integrate_adaptive(
        |u: f64| {
            let tau = u.exp();
            (ln_integrand(tau) + u - shift).exp()
        },
        0.0,
        tau_max.ln(),
        PIECE_REL_TOL,
        0.0,
        ADAPTIVE_MAX_INTERVALS,
    )?;

    let total = head.value + tail.value;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Convergence {
            what: "tricomi_u",
            estimate: total,
            delta: head.abs_error + tail.abs_error,
            nodes: 21 * (head.intervals + tail.intervals),
        });
    }
    let achieved = (head.abs_error + tail.abs_error) / total;
    if achieved > SPECIAL_FN_REL_TOL {
        return Err(Error::Convergence {
            what: "tricomi_u",
            estimate: (total.ln() + shift - a * z.ln() - ln_gamma(a)).exp(),
            delta: achieved,
            nodes: 21 * (head.intervals + tail.intervals),
        });
    }
    Ok(total.ln() + shift - a * z.ln() - ln_gamma(a))
}

/// Tricomi's confluent hypergeometric function U(a; b; z).
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    tricomi_u_ln(a, b, z).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn power_identity() {
        assert!(rel(tricomi_u(2.0, 3.0, 3.0).unwrap(), 1.0 / 9.0) < 1e-14);
    }

    #[test]
    fn large_argument_leading_term() {
        let (a, z) = (1.5, 1e6);
        let v = tricomi_u(a, -2.0, z).unwrap() * z.powf(a);
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            tricomi_u(0.0, 1.0, 1.0),
            Err(Error::Domain { field: "a", .. })
        ));
        assert!(matches!(
            tricomi_u(1.0, 1.0, 0.0),
            Err(Error::Domain { field: "z", .. })
        ));
        assert!(tricomi_u(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn positive_on_grid() {
        for a in [0.5, 1.0, 2.0, 5.0] {
            for b in [-6.0, -1.5, 0.0, 2.0, 7.0] {
                for z in [0.01, 1.0, 100.0] {
                    let u = tricomi_u(a, b, z).unwrap();
                    assert!(u > 0.0 && u.is_finite(), "U({a},{b},{z}) = {u}");
                }
            }
        }
    }
}
