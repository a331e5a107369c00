//! Effective throughput of multiple-input single-output links over
//! independent, identically distributed kappa-mu shadowed fading channels.
//!
//! The rate `R = -(1/A) log2 E[(1 + rho gamma_tot / L)^(-A)]` is computed by
//! four routes that check one another:
//!
//! * [`rate::rate_quadrature`]: quadrature of the MGF integral, any real mu, m;
//! * [`rate::rate_closed_integer`]: binomial sum of Tricomi U terms for integer mu <= m;
//! * [`rate::rate_asymptotic`]: the high-SNR limit, for A > L mu;
//! * [`monte_carlo::rate_monte_carlo`]: direct simulation, integer mu.
//!
//! ```
//! use effcap_core::channel::{make_channel, SystemParams};
//! use effcap_core::rate::{rate_closed_integer, rate_quadrature, QuadratureSpec};
//!
//! let ch = make_channel(3.0, 1.0, 2.0, -5.0).unwrap();
//! let sys = SystemParams::from_db(2, 15.0, 2.0).unwrap();
//! let quad = rate_quadrature(&ch, &sys, &QuadratureSpec::default()).unwrap();
//! let closed = rate_closed_integer(&ch, &sys).unwrap();
//! assert!((quad.rate - closed.rate).abs() < 1e-8 * closed.rate);
//! ```

pub mod channel;
pub mod cli;
pub mod error;
pub mod monte_carlo;
pub mod numerics;
pub mod rate;

pub use channel::{ChannelParams, SystemParams};
pub use error::{Error, Result};
pub use monte_carlo::{McRate, McSpec};
pub use rate::{Method, QuadratureSpec, RateResult};
