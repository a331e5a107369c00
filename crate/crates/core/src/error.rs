use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the quantity being computed.
    #[error("invalid {field} = {value}: {reason}")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The method is not defined for these parameters (e.g. non-integer mu for the closed form).
    #[error("unsupported parameters for {method}: {reason}")]
    Unsupported {
        method: &'static str,
        reason: String,
    },

    /// A formula is outside its region of validity (e.g. the high-SNR asymptote with A <= L*mu).
    #[error("{method} is not valid here: {reason}")]
    Validity {
        method: &'static str,
        reason: String,
    },

    /// An iterative or adaptive scheme stopped before reaching its tolerance.
    #[error("{what} did not converge after {nodes} nodes (best estimate {estimate}, achieved delta {delta:e})")]
    Convergence {
        what: &'static str,
        estimate: f64,
        delta: f64,
        nodes: usize,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            field,
            value,
            reason,
        }
    }
}
