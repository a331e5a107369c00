use super::{closed_form_supported, rate_asymptotic, rate_closed_integer, rate_quadrature};
use super::{Method, QuadratureSpec, RateResult};
use crate::channel::{ChannelParams, SystemParams};
use crate::error::Result;
use crate::monte_carlo::{rate_monte_carlo, McSpec};

/// Which evaluator [`rate_dispatch`] should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    /// Closed form when mu, m are integers with m >= mu, quadrature otherwise.
    Auto,
    Only(Method),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    pub quadrature: QuadratureSpec,
    pub mc: McSpec,
}

/// Monte Carlo estimate wrapped as a [`RateResult`]; diagnostics carry
/// `stderr`, `trials`, `seed` and `mean_expectation`.
pub fn rate_monte_carlo_result(
    ch: &ChannelParams,
    sys: &SystemParams,
    mc: &McSpec,
) -> Result<RateResult> {
    let est = rate_monte_carlo(ch, sys, mc)?;
    Ok(RateResult::new(est.rate, Method::MonteCarlo)
        .with("stderr", est.stderr_rate)
        .with("trials", est.n_effective as f64)
        .with("seed", mc.seed() as f64)
        .with("mean_expectation", est.mean_expectation))
}

pub fn rate_dispatch(
    ch: &ChannelParams,
    sys: &SystemParams,
    choice: MethodChoice,
    opts: &EvalOptions,
) -> Result<RateResult> {
    let method = match choice {
        MethodChoice::Auto if closed_form_supported(ch) => Method::ClosedInteger,
        MethodChoice::Auto => Method::Quadrature,
        MethodChoice::Only(m) => m,
    };
    match method {
        Method::Quadrature => rate_quadrature(ch, sys, &opts.quadrature),
        Method::ClosedInteger => rate_closed_integer(ch, sys),
        Method::Asymptotic => rate_asymptotic(ch, sys),
        Method::MonteCarlo => rate_monte_carlo_result(ch, sys, &opts.mc),
    }
}

/// Outcome of running every evaluator on one parameter set.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub results: Vec<(Method, Result<RateResult>)>,
    /// Largest pairwise relative difference between the exact methods
    /// (quadrature, closed form); `None` with fewer than two of them.
    pub max_rel_discrepancy: Option<f64>,
    /// Largest |mc - exact| / stderr over the exact methods; `None` without both.
    pub max_mc_sigma: Option<f64>,
}

impl Comparison {
    pub fn get(&self, method: Method) -> Option<&RateResult> {
        self.results
            .iter()
            .find(|(m, _)| *m == method)
            .and_then(|(_, r)| r.as_ref().ok())
    }

    /// Successful results that can validate each other (everything but the asymptote).
    pub fn validating(&self) -> impl Iterator<Item = &RateResult> {
        self.results
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok())
            .filter(|r| r.method != Method::Asymptotic)
    }
}

/// Runs quadrature, closed form, asymptote and (optionally) Monte Carlo.
///
/// Individual failures are kept in [`Comparison::results`]; the call only
/// fails when no method succeeds, returning the first error.
pub fn compare_methods(
    ch: &ChannelParams,
    sys: &SystemParams,
    opts: &EvalOptions,
    include_mc: bool,
) -> Result<Comparison> {
    let mut methods = vec![
        Method::Quadrature,
        Method::ClosedInteger,
        Method::Asymptotic,
    ];
    if include_mc {
        methods.push(Method::MonteCarlo);
    }
    let results: Vec<(Method, Result<RateResult>)> = methods
        .into_iter()
        .map(|m| (m, rate_dispatch(ch, sys, MethodChoice::Only(m), opts)))
        .collect();

    if results.iter().all(|(_, r)| r.is_err()) {
        let (_, first) = results.into_iter().next().expect("at least one method");
        return Err(first.unwrap_err());
    }

    let exact: Vec<f64> = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok())
        .filter(|r| r.method.is_exact())
        .map(|r| r.rate)
        .collect();
    let mut max_rel_discrepancy = None;
    for (i, &a) in exact.iter().enumerate() {
        for &b in &exact[i + 1..] {
            let scale = a.abs().max(b.abs());
            let d = if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            };
            max_rel_discrepancy = Some(max_rel_discrepancy.map_or(d, |m: f64| m.max(d)));
        }
    }

    let mc = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok())
        .find(|r| r.method == Method::MonteCarlo);
    let max_mc_sigma = mc.and_then(|mc| {
        let stderr = mc.diagnostic("stderr").unwrap_or(0.0);
        exact
            .iter()
            .map(|&x| {
                let gap = (mc.rate - x).abs();
                if gap == 0.0 {
                    0.0
                } else {
                    gap / stderr
                }
            })
            .reduce(f64::max)
    });

    Ok(Comparison {
        results,
        max_rel_discrepancy,
        max_mc_sigma,
    })
}
