use super::{rate_from_ln_expectation, Method, RateResult};
use crate::channel::{ChannelParams, SystemParams};
use crate::error::{Error, Result};
use crate::numerics::ln_gamma;

/// High-SNR asymptote
/// R ~ -(1/A) log2( Gamma(A - L mu)/Gamma(A) (A L / rho)^(L mu) B^(L m) ).
///
/// Only defined for A > L mu: otherwise the leading rho^(-L mu) term of the
/// expectation does not exist (Gamma(A - L mu) sits at a pole or the
/// integral diverges at the origin).
pub fn rate_asymptotic(ch: &ChannelParams, sys: &SystemParams) -> Result<RateResult> {
    let a_exp = sys.a_exp();
    let antennas = sys.antennas() as f64;
    let diversity = antennas * ch.mu();
    if a_exp <= diversity {
        return Err(Error::Validity {
            method: "high-SNR asymptote",
            reason: format!("requires A > L*mu (A = {a_exp}, L*mu = {diversity})"),
        });
    }
    if sys.rho() <= 0.0 {
        return Err(Error::Validity {
            method: "high-SNR asymptote",
            reason: "requires rho > 0".to_owned(),
        });
    }
    let coeffs = ch.coefficients();
    let ln_expectation = ln_gamma(a_exp - diversity) - ln_gamma(a_exp)
        + diversity * (coeffs.cal_a * antennas / sys.rho()).ln()
        + antennas * ch.m() * coeffs.cal_b.ln();
    Ok(RateResult::new(
        rate_from_ln_expectation(ln_expectation, a_exp),
        Method::Asymptotic,
    ))
}
