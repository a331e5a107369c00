use effcap_core::numerics::{
    gauss_laguerre, integrate_adaptive, log_gamma, pochhammer_log, tricomi_u, tricomi_u_ln,
};
use proptest::prelude::*;

fn gamma(x: f64) -> f64 {
    log_gamma(x).unwrap().exp()
}

#[test]
fn log_gamma_examples() {
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert!((log_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
    assert!((log_gamma(10.0).unwrap() - 362_880f64.ln()).abs() < 1e-13);
    assert!(log_gamma(0.0).is_err());
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer_log(3.3, 0).unwrap(), 0.0);
    assert!((pochhammer_log(1.0, 6).unwrap() - 720f64.ln()).abs() < 1e-13);
    assert!((pochhammer_log(2.5, 3).unwrap() - (2.5f64 * 3.5 * 4.5).ln()).abs() < 1e-13);
}

#[test]
fn rule_invariants() {
    for alpha in [0.0, 0.5, 1.0, 2.3] {
        for n in [8, 32, 128] {
            let rule = gauss_laguerre(alpha, n).unwrap();
            assert_eq!(rule.len(), n);
            assert!(rule.nodes()[0] > 0.0);
            assert!(rule.nodes().windows(2).all(|w| w[1] > w[0]));
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights().iter().sum();
            let want = gamma(alpha + 1.0);
            assert!((total - want).abs() < 1e-10 * want, "alpha={alpha} n={n}");
        }
    }
}

#[test]
fn rule_moments() {
    let rule = gauss_laguerre(1.5, 32).unwrap();
    for k in 0..=5 {
        let got = rule.integrate(|s| s.powi(k));
        let want = gamma(2.5 + k as f64);
        assert!((got - want).abs() < 1e-12 * want, "k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rule_exact_to_degree_2n_minus_1(
        alpha in -0.9f64..3.0,
        n in 1usize..=10,
        seed in proptest::collection::vec(0.0f64..1.0, 20),
    ) {
        // Positive coefficients keep the check free of cancellation.
        let coeffs = &seed[..2 * n];
        let rule = gauss_laguerre(alpha, n).unwrap();
        let got = rule.integrate(|s| coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c));
        let want: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * gamma(alpha + 1.0 + k as f64))
            .sum();
        prop_assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
    }
}

#[test]
fn tricomi_examples() {
    assert!((tricomi_u(2.0, 3.0, 3.0).unwrap() - 1.0 / 9.0).abs() < 1e-12);
    let z = 1e6;
    let lead = tricomi_u(1.5, -2.0, z).unwrap() * z.powf(1.5);
    assert!((lead - 1.0).abs() < 1e-3);
    assert!(tricomi_u(0.0, 1.0, 1.0).is_err());
    assert!(tricomi_u(1.0, 1.0, 0.0).is_err());
}

#[test]
fn tricomi_one_one_one() {
    // U(1, 1, 1) = e E1(1) with E1(1) = -gamma_E - sum_k (-1)^k / (k k!).
    let euler = 0.577_215_664_901_532_9;
    let mut series = 0.0;
    let mut fact = 1.0;
    for k in 1..40 {
        fact *= k as f64;
        series += (-1f64).powi(k) / (k as f64 * fact);
    }
    let want = std::f64::consts::E * (-euler - series);
    assert!((want - 0.596_347).abs() < 1e-6);
    let got = tricomi_u(1.0, 1.0, 1.0).unwrap();
    assert!((got - want).abs() < 1e-10 * want, "{got} vs {want}");

    // The same integral by plain adaptive quadrature.
    let direct =
        integrate_adaptive(|t: f64| (-t).exp() / (1.0 + t), 0.0, 60.0, 1e-12, 0.0, 4000).unwrap();
    assert!((got - direct.value).abs() < 1e-10 * got);
}

const A_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const B_GRID: [f64; 5] = [-6.0, -1.5, 0.0, 2.0, 7.0];
const Z_GRID: [f64; 3] = [0.01, 1.0, 100.0];

#[test]
fn tricomi_positive() {
    for a in A_GRID {
        for b in B_GRID {
            for z in Z_GRID {
                let u = tricomi_u(a, b, z).unwrap();
                assert!(u > 0.0 && u.is_finite(), "U({a},{b},{z}) = {u}");
            }
        }
    }
}

#[test]
fn tricomi_kummer_transformation() {
    for a in A_GRID {
        for b in B_GRID {
            let a2 = a - b + 1.0;
            if a2 <= 0.0 {
                continue;
            }
            for z in Z_GRID {
                let lhs = tricomi_u_ln(a, b, z).unwrap();
                let rhs = (1.0 - b) * z.ln() + tricomi_u_ln(a2, 2.0 - b, z).unwrap();
                assert!((lhs - rhs).exp_m1().abs() < 1e-8, "a={a} b={b} z={z}");
            }
        }
    }
}
