//! Monte Carlo estimation of the effective rate from simulated kappa-mu
//! shadowed SNR variates.
//!
//! Trials are split into fixed-size batches. Batch `i` draws from a ChaCha8
//! stream keyed by `(seed, i)` and the per-batch moments are merged in batch
//! order, so results do not depend on how many threads run the batches.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::channel::{ChannelParams, SystemParams};
use crate::error::{Error, Result};

pub const MIN_TRIALS: u64 = 1_000;
pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_BATCH_SIZE: u64 = 1 << 14;

/// Largest shape parameter m for which the shadowing power is drawn as a
/// scaled chi-square sum (2m must also be an integer).
const CHI_SQUARE_MAX_DOF: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    trials: u64,
    seed: u64,
    batch_size: u64,
}

impl McSpec {
    pub fn new(trials: u64, seed: u64, batch_size: u64) -> Result<Self> {
        if trials < MIN_TRIALS {
            return Err(Error::domain(
                "trials",
                trials as f64,
                "Monte Carlo needs at least 1000 trials",
            ));
        }
        if batch_size == 0 {
            return Err(Error::domain("batch_size", 0.0, "must be >= 1"));
        }
        Ok(McSpec {
            trials,
            seed,
            batch_size,
        })
    }

    pub fn with_trials(trials: u64, seed: u64) -> Result<Self> {
        Self::new(trials, seed, DEFAULT_BATCH_SIZE)
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batch_size(&self) -> u64 {
        self.batch_size
    }

    fn batches(&self) -> u64 {
        self.trials.div_ceil(self.batch_size)
    }

    fn batch_len(&self, index: u64) -> u64 {
        let start = index * self.batch_size;
        self.batch_size.min(self.trials - start)
    }
}

impl Default for McSpec {
    fn default() -> Self {
        McSpec {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }
}

/// Result of a Monte Carlo rate estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRate {
    /// -(1/A) log2 of the sample mean, bits/s/Hz
    pub rate: f64,
    /// delta-method standard error of `rate`
    pub stderr_rate: f64,
    /// sample mean of (1 + rho gamma_tot / L)^(-A)
    pub mean_expectation: f64,
    pub n_effective: u64,
}

/// Mean, standard error of the mean and count of a scalar statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McMean {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

#[derive(Debug, Clone, Copy)]
enum Shadowing {
    /// (1/(2m)) * sum of 2m squared standard normals
    ChiSquare {
        dof: u32,
    },
    Gamma(Gamma<f64>),
}

/// Draws per-antenna SNR variates for one channel.
///
/// The shadowing power xi^2 ~ Gamma(m, 1/m) scales the line-of-sight amplitude;
/// `mu` clusters contribute (X_i + xi p_i)^2 + (Y_i + xi q_i)^2 with
/// X_i, Y_i ~ N(0, 1/2). All line-of-sight power kappa*mu sits in the first
/// in-phase component, which leaves the distribution unchanged.
#[derive(Debug, Clone, Copy)]
pub struct SnrSampler {
    clusters: u32,
    los_amplitude: f64,
    scale: f64,
    shadowing: Shadowing,
}

impl SnrSampler {
    pub fn new(ch: &ChannelParams) -> Result<Self> {
        let mu = ch.mu();
        if mu.fract() != 0.0 || mu > u32::MAX as f64 {
            return Err(Error::Unsupported {
                method: "monte carlo",
                reason: format!(
                    "mu = {mu} is not an integer; use the quadrature evaluator instead"
                ),
            });
        }
        let m = ch.m();
        let two_m = 2.0 * m;
        let shadowing = if two_m.fract() == 0.0 && m <= CHI_SQUARE_MAX_DOF {
            Shadowing::ChiSquare { dof: two_m as u32 }
        } else {
            Shadowing::Gamma(Gamma::new(m, 1.0 / m).map_err(|_| {
                Error::domain("m", m, "invalid Gamma shape for the shadowing power")
            })?)
        };
        Ok(SnrSampler {
            clusters: mu as u32,
            los_amplitude: (ch.kappa() * mu).sqrt(),
            scale: ch.gamma_bar() / (mu * (1.0 + ch.kappa())),
            shadowing,
        })
    }

    /// Unit-mean shadowing power xi^2.
    pub fn sample_shadowing<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.shadowing {
            Shadowing::ChiSquare { dof } => {
                let sum: f64 = (0..dof)
                    .map(|_| {
                        let z: f64 = rng.sample(StandardNormal);
                        z * z
                    })
                    .sum();
                sum / dof as f64
            }
            Shadowing::Gamma(g) => g.sample(rng),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let xi = self.sample_shadowing(rng).sqrt();
        let mut w = 0.0;
        for i in 0..self.clusters {
            let x: f64 = rng.sample::<f64, _>(StandardNormal) * FRAC_1_SQRT_2;
            let y: f64 = rng.sample::<f64, _>(StandardNormal) * FRAC_1_SQRT_2;
            let x = if i == 0 {
                x + xi * self.los_amplitude
            } else {
                x
            };
            w += x * x + y * y;
        }
        self.scale * w
    }
}

/// One kappa-mu shadowed SNR draw (linear scale). Requires integer mu.
pub fn sample_snr<R: Rng + ?Sized>(ch: &ChannelParams, rng: &mut R) -> Result<f64> {
    Ok(SnrSampler::new(ch)?.sample(rng))
}

/// RNG for batch `index` of a run seeded with `seed`.
pub fn batch_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Runs `trial` once per Monte Carlo trial and returns the mean of its output.
///
/// Runs on the current rayon pool; the result is bit-identical for any pool size.
pub fn run_trials<F>(spec: &McSpec, trial: F) -> McMean
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let per_batch: Vec<Moments> = (0..spec.batches())
        .into_par_iter()
        .map(|index| {
            let mut rng = batch_rng(spec.seed, index);
            let mut acc = Moments::default();
            for _ in 0..spec.batch_len(index) {
                acc.push(trial(&mut rng));
            }
            acc
        })
        .collect();
    let total = per_batch
        .into_iter()
        .fold(Moments::default(), Moments::merge);
    McMean {
        mean: total.mean,
        stderr: total.stderr(),
        n: total.n,
    }
}

/// Empirical MGF E[exp(-s gamma_tot)] over `antennas` i.i.d. branches.
pub fn empirical_mgf(ch: &ChannelParams, antennas: u32, s: f64, spec: &McSpec) -> Result<McMean> {
    let sampler = SnrSampler::new(ch)?;
    Ok(run_trials(spec, |rng| {
        let total: f64 = (0..antennas).map(|_| sampler.sample(rng)).sum();
        (-s * total).exp()
    }))
}

/// Monte Carlo estimate of -(1/A) log2 E[(1 + rho gamma_tot / L)^(-A)].
pub fn rate_monte_carlo(ch: &ChannelParams, sys: &SystemParams, spec: &McSpec) -> Result<McRate> {
    let sampler = SnrSampler::new(ch)?;
    if sys.rho() == 0.0 {
        return Ok(McRate {
            rate: 0.0,
            stderr_rate: 0.0,
            mean_expectation: 1.0,
            n_effective: spec.trials(),
        });
    }
    let antennas = sys.antennas();
    let per_antenna = sys.rho() / antennas as f64;
    let a_exp = sys.a_exp();
    let est = run_trials(spec, |rng| {
        let total: f64 = (0..antennas).map(|_| sampler.sample(rng)).sum();
        (-a_exp * (per_antenna * total).ln_1p()).exp()
    });
    let rate = -est.mean.ln() / (a_exp * LN_2);
    Ok(McRate {
        rate,
        stderr_rate: est.stderr / est.mean / (a_exp * LN_2),
        mean_expectation: est.mean,
        n_effective: est.n,
    })
}
