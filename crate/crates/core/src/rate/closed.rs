//! Closed form for integer mu and m with m >= mu.
//!
//! Expanding (1 + rho s/(A L))^(L(m-mu)) binomially leaves integrals of the form
//! int_0^inf e^-s s^(a-1) (1 + c s)^(-nu) ds = Gamma(a) c^(-a) U(a, a - nu + 1, 1/c),
//! so with c = rho/(A B L) and nu = L m
//!
//! ```text
//! E = sum_j C(L(m-mu), j) B^j (A B L / rho)^A (A)_j U(A + j, A + j - L m + 1, A B L / rho)
//! ```
//!
//! Every term is positive and is summed in the log domain.

use super::{rate_from_ln_expectation, Method, RateResult};
use crate::channel::{ChannelParams, SystemParams};
use crate::error::{Error, Result};
use crate::numerics::{ln_binom, log_sum_exp, pochhammer_log, tricomi_u_ln};

/// Whether mu and m are positive integers with m >= mu.
pub fn closed_form_supported(ch: &ChannelParams) -> bool {
    let (mu, m) = (ch.mu(), ch.m());
    mu.fract() == 0.0 && m.fract() == 0.0 && mu >= 1.0 && m >= mu
}

pub fn rate_closed_integer(ch: &ChannelParams, sys: &SystemParams) -> Result<RateResult> {
    if !closed_form_supported(ch) {
        return Err(Error::Unsupported {
            method: "closed form",
            reason: format!(
                "needs integer mu, m with m >= mu (got mu = {}, m = {}); use the quadrature evaluator",
                ch.mu(),
                ch.m()
            ),
        });
    }
    if sys.rho() == 0.0 {
        return Ok(RateResult::new(0.0, Method::ClosedInteger).with("terms", 0.0));
    }

    let coeffs = ch.coefficients();
    let antennas = sys.antennas() as f64;
    let a_exp = sys.a_exp();
    let z = coeffs.cal_a * coeffs.cal_b * antennas / sys.rho();
    let shadow_order = antennas * ch.m();
    let terms = (antennas * (ch.m() - ch.mu())) as u64;

    let ln_z = z.ln();
    let ln_b = coeffs.cal_b.ln();
    let ln_terms = (0..=terms)
        .map(|j| {
            let a = a_exp + j as f64;
            Ok(ln_binom(terms, j)?
                + j as f64 * ln_b
                + a_exp * ln_z
                + pochhammer_log(a_exp, j)?
                + tricomi_u_ln(a, a - shadow_order + 1.0, z)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let ln_expectation = log_sum_exp(ln_terms);

    Ok(RateResult::new(
        rate_from_ln_expectation(ln_expectation, a_exp),
        Method::ClosedInteger,
    )
    .with("terms", (terms + 1) as f64))
}
