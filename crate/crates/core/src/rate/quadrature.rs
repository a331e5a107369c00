//! MGF-based quadrature of E[(1+X)^(-A)] = (1/Gamma(A)) int_0^inf s^(A-1) e^(-s) M_X(s) ds.
//!
//! Two rules are available. The generalized Gauss-Laguerre rule with
//! alpha = A - 1 absorbs the weight exactly and converges fast while M_X is
//! smooth on the unit scale. At high SNR, M_X(s) drops on a scale of
//! L/(rho A B) near the origin; Gauss-Laguerre then converges only
//! algebraically. The trapezoid rule in u = ln s sees that drop as a smooth
//! step of fixed width and converges geometrically in the step size, so it is
//! the fallback in [`QuadratureScheme::Auto`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{rate_from_ln_expectation, Method, RateResult};
use crate::channel::{ChannelParams, SystemParams};
use crate::error::{Error, Result};
use crate::numerics::{
    gauss_laguerre, ln_gamma, QuadratureRule, QUADRATURE_INITIAL_NODES, QUADRATURE_MAX_NODES,
    QUADRATURE_REL_TOL,
};

/// Initial step of the log-variable trapezoid rule.
const TRAPEZOID_INITIAL_STEP: f64 = 0.5;
/// Node cap of the log-variable trapezoid rule (per level).
const TRAPEZOID_MAX_NODES: usize = 1 << 20;
/// Terms below exp(-40) of the running sum are dropped.
const TRAPEZOID_CUTOFF: f64 = 40.0;
/// Absolute floor on the convergence test of ln E, for rates near zero.
const LN_EXPECTATION_ABS_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Gauss-Laguerre first, log-variable trapezoid if the node cap is hit.
    Auto,
    GaussLaguerre,
    LogTrapezoid,
}

impl QuadratureScheme {
    fn code(self) -> f64 {
        match self {
            QuadratureScheme::Auto => -1.0,
            QuadratureScheme::GaussLaguerre => 0.0,
            QuadratureScheme::LogTrapezoid => 1.0,
        }
    }
}

/// Node-count policy for the quadrature evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    /// First Gauss-Laguerre node count; doubled until converged.
    pub initial_nodes: usize,
    /// Gauss-Laguerre node cap.
    pub max_nodes: usize,
    /// Relative change of ln E between successive refinements that counts as converged.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: QuadratureScheme::Auto,
            initial_nodes: QUADRATURE_INITIAL_NODES,
            max_nodes: QUADRATURE_MAX_NODES,
            rel_tol: QUADRATURE_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    /// ln E[(1+X)^(-A)]
    pub ln_expectation: f64,
    /// Scheme that produced the value (never `Auto`).
    pub scheme: QuadratureScheme,
    /// Nodes used by the final refinement.
    pub nodes: usize,
    /// Gauss-Laguerre node count or trapezoid step of the final refinement.
    pub resolution: f64,
    /// |change of ln E| in the final refinement.
    pub delta: f64,
}

fn cached_rule(alpha: f64, n: usize) -> Result<Arc<QuadratureRule>> {
    type RuleCache = Mutex<HashMap<(u64, usize), Arc<QuadratureRule>>>;
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (alpha.to_bits(), n);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_laguerre(alpha, n)?);
    cache
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// ln E with an `n`-point Gauss-Laguerre rule at alpha = A - 1.
pub fn gauss_laguerre_ln_expectation<F>(ln_mgf: F, a_exp: f64, n: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let rule = cached_rule(a_exp - 1.0, n)?;
    Ok(rule.ln_integrate(ln_mgf) - ln_gamma(a_exp))
}

/// ln E with the trapezoid rule of step `h` in u = ln s on the nodes u = k h.
///
/// Returns the value and the number of nodes used. The range grows outward
/// from the peak of A u - e^u until the remaining terms are provably below
/// exp(-40) of the sum; `ln_mgf` must be non-positive and non-increasing,
/// which holds for the MGF of any non-negative variable.
pub fn log_trapezoid_ln_expectation<F>(ln_mgf: F, a_exp: f64, h: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> f64,
{
    let ln_term = |k: i64| {
        let u = k as f64 * h;
        let s = u.exp();
        a_exp * u - s + ln_mgf(s)
    };
    let peak = (a_exp.ln() / h).round() as i64;
    let mut terms = vec![ln_term(peak)];
    let mut running_max = terms[0];
    let mut running_sum = 1.0_f64;
    let mut push = |t: f64, terms: &mut Vec<f64>| {
        terms.push(t);
        if t > running_max {
            running_sum = running_sum * (running_max - t).exp() + 1.0;
            running_max = t;
        } else {
            running_sum += (t - running_max).exp();
        }
        running_max + running_sum.ln()
    };
    let mut lse;

    // Upward: once e^u > A + 1 every factor of the integrand decreases.
    let mut k = peak + 1;
    loop {
        let t = ln_term(k);
        lse = push(t, &mut terms);
        if ((k as f64 * h).exp() > a_exp + 1.0 && t < lse - TRAPEZOID_CUTOFF)
            || t == f64::NEG_INFINITY
        {
            break;
        }
        if terms.len() > TRAPEZOID_MAX_NODES {
            return Err(trapezoid_overflow(lse, terms.len()));
        }
        k += 1;
    }

    // Downward: the integrand is below e^(A u), whose geometric tail is summable.
    let tail_factor = -(-(-(a_exp * h)).exp_m1()).ln();
    let mut k = peak - 1;
    loop {
        let t = ln_term(k);
        lse = push(t, &mut terms);
        if a_exp * (k as f64 - 1.0) * h + tail_factor < lse - TRAPEZOID_CUTOFF {
            break;
        }
        if terms.len() > TRAPEZOID_MAX_NODES {
            return Err(trapezoid_overflow(lse, terms.len()));
        }
        k -= 1;
    }

    let lse = crate::numerics::log_sum_exp(terms.iter().copied());
    Ok((lse + h.ln() - ln_gamma(a_exp), terms.len()))
}

fn trapezoid_overflow(estimate: f64, nodes: usize) -> Error {
    Error::Convergence {
        what: "log-variable trapezoid range",
        estimate,
        delta: f64::NAN,
        nodes,
    }
}

fn converged(prev: f64, cur: f64, rel_tol: f64) -> bool {
    (cur - prev).abs() <= rel_tol * cur.abs() + LN_EXPECTATION_ABS_FLOOR
}

fn run_gauss_laguerre<F>(ln_mgf: &F, a_exp: f64, spec: &QuadratureSpec) -> Result<QuadratureOutcome>
where
    F: Fn(f64) -> f64,
{
    let mut n = spec.initial_nodes.max(1);
    let mut prev = gauss_laguerre_ln_expectation(ln_mgf, a_exp, n)?;
    let mut delta = f64::INFINITY;
    while 2 * n <= spec.max_nodes {
        n *= 2;
        let cur = gauss_laguerre_ln_expectation(ln_mgf, a_exp, n)?;
        delta = (cur - prev).abs();
        if converged(prev, cur, spec.rel_tol) {
            return Ok(QuadratureOutcome {
                ln_expectation: cur,
                scheme: QuadratureScheme::GaussLaguerre,
                nodes: n,
                resolution: n as f64,
                delta,
            });
        }
        prev = cur;
    }
    Err(Error::Convergence {
        what: "Gauss-Laguerre rate quadrature",
        estimate: prev,
        delta,
        nodes: n,
    })
}

fn run_log_trapezoid<F>(ln_mgf: &F, a_exp: f64, spec: &QuadratureSpec) -> Result<QuadratureOutcome>
where
    F: Fn(f64) -> f64,
{
    let mut h = TRAPEZOID_INITIAL_STEP;
    let (mut prev, _) = log_trapezoid_ln_expectation(ln_mgf, a_exp, h)?;
    loop {
        h *= 0.5;
        let (cur, nodes) = log_trapezoid_ln_expectation(ln_mgf, a_exp, h)?;
        let delta = (cur - prev).abs();
        if converged(prev, cur, spec.rel_tol) {
            return Ok(QuadratureOutcome {
                ln_expectation: cur,
                scheme: QuadratureScheme::LogTrapezoid,
                nodes,
                resolution: h,
                delta,
            });
        }
        if nodes > TRAPEZOID_MAX_NODES / 2 {
            return Err(Error::Convergence {
                what: "log-variable trapezoid rate quadrature",
                estimate: cur,
                delta,
                nodes,
            });
        }
        prev = cur;
    }
}

/// ln E[(1+X)^(-A)] for a non-negative X given the log of its MGF.
pub fn ln_expectation_from_mgf<F>(
    ln_mgf: F,
    a_exp: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome>
where
    F: Fn(f64) -> f64,
{
    if !(a_exp > 0.0 && a_exp.is_finite()) {
        return Err(Error::domain("a_exp", a_exp, "must be finite and > 0"));
    }
    match spec.scheme {
        QuadratureScheme::GaussLaguerre => run_gauss_laguerre(&ln_mgf, a_exp, spec),
        QuadratureScheme::LogTrapezoid => run_log_trapezoid(&ln_mgf, a_exp, spec),
        QuadratureScheme::Auto => match run_gauss_laguerre(&ln_mgf, a_exp, spec) {
            Err(Error::Convergence { .. }) => run_log_trapezoid(&ln_mgf, a_exp, spec),
            other => other,
        },
    }
}

/// Effective rate by quadrature of the MGF integral. Valid for all real mu, m > 0.
pub fn rate_quadrature(
    ch: &ChannelParams,
    sys: &SystemParams,
    spec: &QuadratureSpec,
) -> Result<RateResult> {
    if sys.rho() == 0.0 {
        return Ok(RateResult::new(0.0, Method::Quadrature).with("nodes", 0.0));
    }
    let antennas = sys.antennas();
    let scale = sys.rho() / antennas as f64;
    let out = ln_expectation_from_mgf(|s| ch.ln_mgf(antennas, scale * s), sys.a_exp(), spec)?;
    Ok(RateResult::new(
        rate_from_ln_expectation(out.ln_expectation, sys.a_exp()),
        Method::Quadrature,
    )
    .with("nodes", out.nodes as f64)
    .with("delta", out.delta)
    .with("scheme", out.scheme.code())
    .with("resolution", out.resolution))
}
