//! Effective throughput R = -(1/A) log2 E[(1 + rho gamma_tot / L)^(-A)].
//!
//! Three analytic evaluators (MGF quadrature, integer-parameter closed form,
//! high-SNR asymptote) plus the Monte Carlo estimate, and a dispatcher that
//! picks one or cross-checks all of them.

mod asymptotic;
mod closed;
mod dispatch;
mod quadrature;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use asymptotic::rate_asymptotic;
pub use closed::{closed_form_supported, rate_closed_integer};
pub use dispatch::{
    compare_methods, rate_dispatch, rate_monte_carlo_result, Comparison, EvalOptions, MethodChoice,
};
pub use quadrature::{
    gauss_laguerre_ln_expectation, ln_expectation_from_mgf, log_trapezoid_ln_expectation,
    rate_quadrature, QuadratureOutcome, QuadratureScheme, QuadratureSpec,
};

/// Evaluation route that produced a [`RateResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Quadrature,
    ClosedInteger,
    Asymptotic,
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Quadrature,
        Method::ClosedInteger,
        Method::Asymptotic,
        Method::MonteCarlo,
    ];

    /// Short tag used on the command line and in CSV output.
    pub fn tag(self) -> &'static str {
        match self {
            Method::Quadrature => "quad",
            Method::ClosedInteger => "closed",
            Method::Asymptotic => "asym",
            Method::MonteCarlo => "mc",
        }
    }

    /// Exact methods agree to numerical tolerance; the asymptote does not.
    pub fn is_exact(self) -> bool {
        matches!(self, Method::Quadrature | Method::ClosedInteger)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected quad, closed, asym or mc)"))
    }
}

/// A computed effective throughput in bits/s/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    pub rate: f64,
    pub method: Method,
    /// Free-form numeric diagnostics, e.g. `nodes`, `delta`, `stderr`, `trials`.
    pub diagnostics: BTreeMap<String, f64>,
}

impl RateResult {
    pub(crate) fn new(rate: f64, method: Method) -> Self {
        RateResult {
            rate,
            method,
            diagnostics: BTreeMap::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }

    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }
}

/// -(1/A) log2 of an expectation given by its natural log.
pub(crate) fn rate_from_ln_expectation(ln_expectation: f64, a_exp: f64) -> f64 {
    let rate = -ln_expectation / (a_exp * std::f64::consts::LN_2);
    // Avoid reporting -0.
    rate + 0.0
}
