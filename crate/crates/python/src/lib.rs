//! Python bindings for `effcap-core`.

use std::collections::BTreeMap;

use effcap_core::channel;
use effcap_core::error::Error;
use effcap_core::monte_carlo::{self, McSpec};
use effcap_core::numerics;
use effcap_core::rate::{self, EvalOptions, Method, MethodChoice, QuadratureSpec};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(
    effcap,
    EffcapError,
    PyException,
    "Base class for effcap errors."
);
create_exception!(
    effcap,
    DomainError,
    EffcapError,
    "A parameter is outside its domain."
);
create_exception!(
    effcap,
    UnsupportedError,
    EffcapError,
    "The method does not support these parameters."
);
create_exception!(
    effcap,
    ValidityError,
    EffcapError,
    "The method is not valid for these parameters."
);
create_exception!(
    effcap,
    ConvergenceError,
    EffcapError,
    "A numerical procedure did not converge."
);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Domain { .. } => DomainError::new_err(msg),
        Error::Unsupported { .. } => UnsupportedError::new_err(msg),
        Error::Validity { .. } => ValidityError::new_err(msg),
        Error::Convergence { .. } => ConvergenceError::new_err(msg),
    }
}

/// One antenna's kappa-mu shadowed fading; `gamma_bar` is linear.
#[pyclass(frozen, from_py_object, module = "effcap", name = "ChannelParams")]
#[derive(Clone, Copy)]
struct PyChannel(channel::ChannelParams);

#[pymethods]
impl PyChannel {
    #[new]
    fn new(kappa: f64, mu: f64, m: f64, gamma_bar: f64) -> PyResult<Self> {
        channel::ChannelParams::new(kappa, mu, m, gamma_bar)
            .map(PyChannel)
            .map_err(py_err)
    }

    /// Channel with the mean SNR given in dB.
    #[staticmethod]
    fn from_db(kappa: f64, mu: f64, m: f64, gamma_bar_db: f64) -> PyResult<Self> {
        channel::make_channel(kappa, mu, m, gamma_bar_db)
            .map(PyChannel)
            .map_err(py_err)
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa()
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu()
    }

    #[getter]
    fn m(&self) -> f64 {
        self.0.m()
    }

    #[getter]
    fn gamma_bar(&self) -> f64 {
        self.0.gamma_bar()
    }

    #[getter]
    fn gamma_bar_db(&self) -> f64 {
        self.0.gamma_bar_db()
    }

    /// (calA, calB) of the MGF.
    fn coefficients(&self) -> (f64, f64) {
        channel::derived_coeffs(&self.0)
    }

    #[pyo3(signature = (s, antennas = 1))]
    fn mgf(&self, s: f64, antennas: u32) -> PyResult<f64> {
        channel::mgf(&self.0, antennas, s).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ChannelParams(kappa={}, mu={}, m={}, gamma_bar={})",
            self.0.kappa(),
            self.0.mu(),
            self.0.m(),
            self.0.gamma_bar()
        )
    }
}

/// Antenna count, transmit SNR (linear) and delay exponent product A.
#[pyclass(frozen, from_py_object, module = "effcap", name = "SystemParams")]
#[derive(Clone, Copy)]
struct PySystem(channel::SystemParams);

#[pymethods]
impl PySystem {
    #[new]
    fn new(antennas: u32, rho: f64, a_exp: f64) -> PyResult<Self> {
        channel::SystemParams::new(antennas, rho, a_exp)
            .map(PySystem)
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_db(antennas: u32, rho_db: f64, a_exp: f64) -> PyResult<Self> {
        channel::SystemParams::from_db(antennas, rho_db, a_exp)
            .map(PySystem)
            .map_err(py_err)
    }

    #[getter]
    fn antennas(&self) -> u32 {
        self.0.antennas()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.0.rho()
    }

    #[getter]
    fn rho_db(&self) -> f64 {
        self.0.rho_db()
    }

    #[getter]
    fn a_exp(&self) -> f64 {
        self.0.a_exp()
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemParams(antennas={}, rho={}, a_exp={})",
            self.0.antennas(),
            self.0.rho(),
            self.0.a_exp()
        )
    }
}

#[pyclass(frozen, module = "effcap", name = "RateResult")]
struct PyRateResult {
    #[pyo3(get)]
    rate: f64,
    #[pyo3(get)]
    method: &'static str,
    #[pyo3(get)]
    diagnostics: BTreeMap<String, f64>,
}

#[pymethods]
impl PyRateResult {
    fn __repr__(&self) -> String {
        format!("RateResult(rate={}, method='{}')", self.rate, self.method)
    }
}

impl From<rate::RateResult> for PyRateResult {
    fn from(r: rate::RateResult) -> Self {
        PyRateResult {
            rate: r.rate,
            method: r.method.tag(),
            diagnostics: r.diagnostics,
        }
    }
}

#[pyclass(frozen, module = "effcap", name = "McRate")]
struct PyMcRate {
    #[pyo3(get)]
    rate: f64,
    #[pyo3(get)]
    stderr_rate: f64,
    #[pyo3(get)]
    mean_expectation: f64,
    #[pyo3(get)]
    n_effective: u64,
}

#[pymethods]
impl PyMcRate {
    fn __repr__(&self) -> String {
        format!(
            "McRate(rate={}, stderr_rate={})",
            self.rate, self.stderr_rate
        )
    }
}

fn parse_method(method: &str) -> PyResult<MethodChoice> {
    if method == "auto" {
        return Ok(MethodChoice::Auto);
    }
    method
        .parse::<Method>()
        .map(MethodChoice::Only)
        .map_err(pyo3::exceptions::PyValueError::new_err)
}

fn mc_spec(trials: u64, seed: u64) -> PyResult<McSpec> {
    McSpec::with_trials(trials, seed).map_err(py_err)
}

#[pyfunction]
fn rate_quadrature(py: Python<'_>, ch: PyChannel, sys: PySystem) -> PyResult<PyRateResult> {
    py.detach(|| rate::rate_quadrature(&ch.0, &sys.0, &QuadratureSpec::default()))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn rate_closed_integer(py: Python<'_>, ch: PyChannel, sys: PySystem) -> PyResult<PyRateResult> {
    py.detach(|| rate::rate_closed_integer(&ch.0, &sys.0))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn rate_asymptotic(ch: PyChannel, sys: PySystem) -> PyResult<PyRateResult> {
    rate::rate_asymptotic(&ch.0, &sys.0)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (ch, sys, trials = monte_carlo::DEFAULT_TRIALS, seed = monte_carlo::DEFAULT_SEED))]
fn rate_monte_carlo(
    py: Python<'_>,
    ch: PyChannel,
    sys: PySystem,
    trials: u64,
    seed: u64,
) -> PyResult<PyMcRate> {
    let spec = mc_spec(trials, seed)?;
    let est = py
        .detach(|| monte_carlo::rate_monte_carlo(&ch.0, &sys.0, &spec))
        .map_err(py_err)?;
    Ok(PyMcRate {
        rate: est.rate,
        stderr_rate: est.stderr_rate,
        mean_expectation: est.mean_expectation,
        n_effective: est.n_effective,
    })
}

/// Evaluate with `method` in {"auto", "quad", "closed", "asym", "mc"}.
#[pyfunction]
#[pyo3(signature = (ch, sys, method = "auto", trials = monte_carlo::DEFAULT_TRIALS, seed = monte_carlo::DEFAULT_SEED))]
fn rate_dispatch(
    py: Python<'_>,
    ch: PyChannel,
    sys: PySystem,
    method: &str,
    trials: u64,
    seed: u64,
) -> PyResult<PyRateResult> {
    let choice = parse_method(method)?;
    let opts = EvalOptions {
        mc: mc_spec(trials, seed)?,
        ..Default::default()
    };
    py.detach(|| rate::rate_dispatch(&ch.0, &sys.0, choice, &opts))
        .map(Into::into)
        .map_err(py_err)
}

/// Runs every method. Returns (results, errors, max_rel_discrepancy, max_mc_sigma)
/// where `results` and `errors` are dicts keyed by method tag.
#[pyfunction]
#[pyo3(signature = (ch, sys, include_mc = true, trials = monte_carlo::DEFAULT_TRIALS, seed = monte_carlo::DEFAULT_SEED))]
#[allow(clippy::type_complexity)]
fn compare_methods(
    py: Python<'_>,
    ch: PyChannel,
    sys: PySystem,
    include_mc: bool,
    trials: u64,
    seed: u64,
) -> PyResult<(
    BTreeMap<&'static str, PyRateResult>,
    BTreeMap<&'static str, String>,
    Option<f64>,
    Option<f64>,
)> {
    let opts = EvalOptions {
        mc: mc_spec(trials, seed)?,
        ..Default::default()
    };
    let cmp = py
        .detach(|| rate::compare_methods(&ch.0, &sys.0, &opts, include_mc))
        .map_err(py_err)?;
    let mut ok = BTreeMap::new();
    let mut failed = BTreeMap::new();
    for (method, result) in cmp.results {
        match result {
            Ok(r) => {
                ok.insert(method.tag(), r.into());
            }
            Err(e) => {
                failed.insert(method.tag(), e.to_string());
            }
        }
    }
    Ok((ok, failed, cmp.max_rel_discrepancy, cmp.max_mc_sigma))
}

#[pyfunction]
fn delay_exponent_product(theta: f64, block_t: f64, bandwidth: f64) -> PyResult<f64> {
    channel::delay_exponent_product(theta, block_t, bandwidth).map_err(py_err)
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    numerics::log_gamma(x).map_err(py_err)
}

#[pyfunction]
fn pochhammer_log(a: f64, j: u64) -> PyResult<f64> {
    numerics::pochhammer_log(a, j).map_err(py_err)
}

#[pyfunction]
fn binom(n: u64, j: u64) -> PyResult<f64> {
    numerics::binom(n, j).map_err(py_err)
}

#[pyfunction]
fn tricomi_u(a: f64, b: f64, z: f64) -> PyResult<f64> {
    numerics::tricomi_u(a, b, z).map_err(py_err)
}

/// Nodes and weights of the n-point rule for the weight s^alpha e^-s.
#[pyfunction]
fn gauss_laguerre(alpha: f64, n: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = numerics::gauss_laguerre(alpha, n).map_err(py_err)?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

#[pymodule]
fn effcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("EffcapError", py.get_type::<EffcapError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("UnsupportedError", py.get_type::<UnsupportedError>())?;
    m.add("ValidityError", py.get_type::<ValidityError>())?;
    m.add("ConvergenceError", py.get_type::<ConvergenceError>())?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyRateResult>()?;
    m.add_class::<PyMcRate>()?;
    m.add_function(wrap_pyfunction!(rate_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(rate_closed_integer, m)?)?;
    m.add_function(wrap_pyfunction!(rate_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(rate_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(rate_dispatch, m)?)?;
    m.add_function(wrap_pyfunction!(compare_methods, m)?)?;
    m.add_function(wrap_pyfunction!(delay_exponent_product, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(pochhammer_log, m)?)?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    m.add_function(wrap_pyfunction!(tricomi_u, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_laguerre, m)?)?;
    Ok(())
}
