use crate::error::{Error, Result};

/// Below this argument the Stirling series is reached by upward recurrence.
const STIRLING_CUTOFF: f64 = 15.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..7.
const STIRLING_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

fn stirling(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let series = STIRLING_COEFFS
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c);
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series / x
}

/// ln Gamma(x) without argument checks; `x` must be positive and finite.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 20.0 {
        // (x-1)! exactly; 19! still fits the f64 mantissa after one rounding.
        return (1..x as u64).map(|k| k as f64).product::<f64>().ln();
    }
    if x >= STIRLING_CUTOFF {
        return stirling(x);
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_CUTOFF {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

/// Natural logarithm of the Gamma function for `x > 0`.
///
/// Stirling's series for `x >= 15`, upward recurrence below. Relative error is
/// around 1e-15 away from the zeros of ln Gamma at 1 and 2, where the error is
/// absolute instead.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("x", x, "log_gamma needs a finite x > 0"));
    }
    Ok(ln_gamma(x))
}

/// ln of the rising factorial (a)_j = Gamma(a + j) / Gamma(a).
pub fn pochhammer_log(a: f64, j: u64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "pochhammer_log needs a finite a > 0"));
    }
    if j == 0 {
        return Ok(0.0);
    }
    Ok(ln_gamma(a + j as f64) - ln_gamma(a))
}

/// Largest `n` for which [`binom`] is computed in exact integer arithmetic.
const EXACT_BINOM_MAX_N: u64 = 60;

/// Binomial coefficient C(n, j) as a float.
///
/// Exact integer arithmetic for `n <= 60` (rounded once to `f64`), log-Gamma beyond.
pub fn binom(n: u64, j: u64) -> Result<f64> {
    if j > n {
        return Err(Error::domain(
            "j",
            j as f64,
            "binomial index must lie in [0, n]",
        ));
    }
    if n <= EXACT_BINOM_MAX_N {
        let k = j.min(n - j);
        let mut acc: u128 = 1;
        for i in 1..=k as u128 {
            acc = acc * (n as u128 - k as u128 + i) / i;
        }
        return Ok(acc as f64);
    }
    Ok(ln_binom(n, j)?.exp())
}

/// ln C(n, j).
pub fn ln_binom(n: u64, j: u64) -> Result<f64> {
    if j > n {
        return Err(Error::domain(
            "j",
            j as f64,
            "binomial index must lie in [0, n]",
        ));
    }
    if j == 0 || j == n {
        return Ok(0.0);
    }
    if n <= EXACT_BINOM_MAX_N {
        return Ok(binom(n, j)?.ln());
    }
    let (n, j) = (n as f64, j as f64);
    Ok(ln_gamma(n + 1.0) - ln_gamma(j + 1.0) - ln_gamma(n - j + 1.0))
}

/// ln(sum(exp(x_i))) with max shifting. Returns `-inf` for an empty input.
pub fn log_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}
