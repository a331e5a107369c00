//! Generalized Gauss-Laguerre rules for the weight s^alpha e^(-s) on (0, inf).
//!
//! Nodes are the eigenvalues of the Jacobi matrix of the Laguerre recurrence
//! (implicit QL, eigenvalues only), polished by Newton steps on the orthonormal
//! recurrence. Weights come from the Christoffel function
//! w_i = 1 / sum_k p_k(x_i)^2, accumulated with running rescaling so that
//! rules with thousands of nodes keep their (tiny) tail weights in log form.

use super::gamma::{ln_gamma, log_sum_exp};
use crate::error::{Error, Result};

const QL_MAX_ITER: usize = 60;
const NEWTON_STEPS: usize = 4;
const RESCALE_ABOVE: f64 = 1e150;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ln_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Nodes in strictly increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights in linear scale; entries of large rules may underflow to zero.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn ln_weights(&self) -> &[f64] {
        &self.ln_weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Approximates int_0^inf s^alpha e^-s f(s) ds.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// ln of int_0^inf s^alpha e^-s exp(ln_f(s)) ds for a positive integrand given by its log.
    pub fn ln_integrate<F: FnMut(f64) -> f64>(&self, mut ln_f: F) -> f64 {
        log_sum_exp(
            self.nodes
                .iter()
                .zip(&self.ln_weights)
                .map(|(&x, &lw)| lw + ln_f(x)),
        )
    }
}

fn diagonal(alpha: f64, k: usize) -> f64 {
    2.0 * k as f64 + alpha + 1.0
}

fn off_diagonal(alpha: f64, k: usize) -> f64 {
    let k = k as f64;
    (k * (k + alpha)).sqrt()
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.
/// `d` holds the diagonal and is overwritten with the eigenvalues; `e[i]` couples rows i and i+1.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::Convergence {
                    what: "tridiagonal QL",
                    estimate: d[l],
                    delta: e[l].abs(),
                    nodes: n,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Runs the orthonormal recurrence at `x`.
///
/// Returns (p_n, p_n', ln sum_{k<n} p_k^2); p_n and p_n' share an unknown
/// common scale, so only their ratio is meaningful.
fn recurrence(alpha: f64, n: usize, x: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0;
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    // p_0^2 = 1 / Gamma(alpha + 1)
    let mut ln_scale = -0.5 * ln_gamma(alpha + 1.0);
    let mut sum_sq = 0.0;
    for k in 0..n {
        sum_sq += p * p;
        let a_k = diagonal(alpha, k);
        let b_k = off_diagonal(alpha, k);
        let b_next = off_diagonal(alpha, k + 1);
        let p_next = ((x - a_k) * p - b_k * p_prev) / b_next;
        let dp_next = (p + (x - a_k) * dp - b_k * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        let big = p.abs().max(dp.abs()).max(p_prev.abs());
        if big > RESCALE_ABOVE {
            let f = 1.0 / big;
            p *= f;
            p_prev *= f;
            dp *= f;
            dp_prev *= f;
            sum_sq *= f * f;
            ln_scale -= f.ln();
        }
    }
    (p, dp, sum_sq.ln() + 2.0 * ln_scale)
}

/// n-point generalized Gauss-Laguerre rule for the weight s^alpha e^(-s).
pub fn gauss_laguerre(alpha: f64, n: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::domain(
            "alpha",
            alpha,
            "Gauss-Laguerre weight needs alpha > -1",
        ));
    }
    if n == 0 {
        return Err(Error::domain(
            "n",
            0.0,
            "a quadrature rule needs at least one node",
        ));
    }

    let mut nodes: Vec<f64> = (0..n).map(|k| diagonal(alpha, k)).collect();
    let mut off: Vec<f64> = (0..n).map(|k| off_diagonal(alpha, k + 1)).collect();
    tridiagonal_eigenvalues(&mut nodes, &mut off)?;
    nodes.sort_by(f64::total_cmp);

    for i in 0..n {
        let lo = if i == 0 { 0.0 } else { nodes[i - 1] };
        let hi = if i + 1 == n {
            f64::INFINITY
        } else {
            nodes[i + 1]
        };
        let mut x = nodes[i];
        for _ in 0..NEWTON_STEPS {
            let (p, dp, _) = recurrence(alpha, n, x);
            if dp == 0.0 || !dp.is_finite() {
                break;
            }
            let next = x - p / dp;
            // Never let a polishing step wander to a neighbouring root.
            if !(next > 0.5 * (lo + x) && next < 0.5 * (x + hi)) {
                break;
            }
            let done = (next - x).abs() <= 4.0 * f64::EPSILON * x;
            x = next;
            if done {
                break;
            }
        }
        nodes[i] = x;
    }

    let ln_weights: Vec<f64> = nodes.iter().map(|&x| -recurrence(alpha, n, x).2).collect();

    let increasing = nodes.windows(2).all(|w| w[0] < w[1]);
    if !(nodes[0] > 0.0 && increasing && ln_weights.iter().all(|w| w.is_finite())) {
        return Err(Error::Convergence {
            what: "Gauss-Laguerre rule",
            estimate: nodes[0],
            delta: f64::NAN,
            nodes: n,
        });
    }

    let weights = ln_weights.iter().map(|w| w.exp()).collect();
    Ok(QuadratureRule {
        alpha,
        nodes,
        weights,
        ln_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rules() {
        let r = gauss_laguerre(0.0, 1).unwrap();
        assert!((r.nodes()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
        for alpha in [-0.5, 0.7, 3.0] {
            let r = gauss_laguerre(alpha, 1).unwrap();
            assert!((r.nodes()[0] - (alpha + 1.0)).abs() < 1e-14);
            let g = ln_gamma(alpha + 1.0).exp();
            assert!(((r.weights()[0] - g) / g).abs() < 1e-13);
        }
    }

    #[test]
    fn two_point_rule_matches_closed_form() {
        // alpha = 0, n = 2: nodes 2 -+ sqrt(2), weights (2 +- sqrt(2)) / 4
        let r = gauss_laguerre(0.0, 2).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nodes()[0] - (2.0 - s2)).abs() < 1e-14);
        assert!((r.nodes()[1] - (2.0 + s2)).abs() < 1e-14);
        assert!((r.weights()[0] - (2.0 + s2) / 4.0).abs() < 1e-14);
        assert!((r.weights()[1] - (2.0 - s2) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_laguerre(-1.0, 4).is_err());
        assert!(gauss_laguerre(0.0, 0).is_err());
    }

    #[test]
    fn large_rules_keep_log_weights() {
        let r = gauss_laguerre(1.0, 1024).unwrap();
        assert_eq!(r.len(), 1024);
        assert!(r.ln_weights().iter().all(|w| w.is_finite()));
        let ln_total = r.ln_integrate(|_| 0.0);
        assert!(ln_total.abs() < 1e-11, "{ln_total}");
    }
}
