use effcap_core::channel::{make_channel, ChannelParams, SystemParams};
use effcap_core::error::Error;
use effcap_core::numerics::{
    gauss_laguerre, ln_binom, log_sum_exp, pochhammer_log, tricomi_u_ln, QUADRATURE_MAX_NODES,
};
use effcap_core::rate::{
    compare_methods, gauss_laguerre_ln_expectation, ln_expectation_from_mgf,
    log_trapezoid_ln_expectation, rate_asymptotic, rate_closed_integer, rate_dispatch,
    rate_quadrature, EvalOptions, Method, MethodChoice, QuadratureScheme, QuadratureSpec,
};
use std::f64::consts::LN_2;

fn quad(ch: &ChannelParams, sys: &SystemParams) -> f64 {
    rate_quadrature(ch, sys, &QuadratureSpec::default())
        .unwrap()
        .rate
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// The published variant of the closed form: prefactor (L/rho)^A (B^A/A)^j
/// and second Tricomi argument A + j - L m.
fn printed_closed_form(ch: &ChannelParams, sys: &SystemParams) -> f64 {
    let c = ch.coefficients();
    let l = sys.antennas() as f64;
    let a_exp = sys.a_exp();
    let z = c.cal_a * c.cal_b * l / sys.rho();
    let terms = (l * (ch.m() - ch.mu())) as u64;
    let ln_e = log_sum_exp((0..=terms).map(|j| {
        let a = a_exp + j as f64;
        ln_binom(terms, j).unwrap()
            + a_exp * (l / sys.rho()).ln()
            + j as f64 * (a_exp * c.cal_b.ln() - c.cal_a.ln())
            + pochhammer_log(a_exp, j).unwrap()
            + tricomi_u_ln(a, a - l * ch.m(), z).unwrap()
    }));
    -ln_e / (a_exp * LN_2)
}

#[test]
fn closed_form_argument_resolution() {
    // (kappa, mu, m, gamma_bar_db, A, L, rho_db) and a 40-digit quadrature reference.
    let cases = [
        ((3.0, 1.0, 2.0, -5.0, 2.0, 2, 15.0), 2.687_254_230_472_946),
        ((0.0, 1.0, 1.0, 0.0, 2.0, 1, 10.0), 1.823_249_600_058_842_3),
    ];
    for ((kappa, mu, m, gb, a, l, rho_db), reference) in cases {
        let ch = make_channel(kappa, mu, m, gb).unwrap();
        let sys = SystemParams::from_db(l, rho_db, a).unwrap();
        let closed = rate_closed_integer(&ch, &sys).unwrap().rate;
        let q = quad(&ch, &sys);
        assert!(rel(closed, reference) < 1e-10, "{closed} vs {reference}");
        assert!(rel(q, reference) < 1e-10, "{q} vs {reference}");
        assert!(rel(closed, q) < 1e-8);

        let printed = printed_closed_form(&ch, &sys);
        assert!(
            rel(printed, q) > 0.1,
            "printed form unexpectedly agrees: {printed} vs {q}"
        );
    }
}

#[test]
fn closed_form_single_term_when_m_equals_mu() {
    for (mu, l, a, rho_db) in [(1.0, 2, 2.0, 15.0), (2.0, 3, 0.5, 4.0), (3.0, 1, 5.0, 30.0)] {
        let ch = make_channel(1.5, mu, mu, -2.0).unwrap();
        let sys = SystemParams::from_db(l, rho_db, a).unwrap();
        let c = ch.coefficients();
        let z = c.cal_a * c.cal_b * l as f64 / sys.rho();
        let ln_e = a * z.ln() + tricomi_u_ln(a, a - l as f64 * mu + 1.0, z).unwrap();
        let want = -ln_e / (a * LN_2);
        let got = rate_closed_integer(&ch, &sys).unwrap();
        assert_eq!(got.diagnostic("terms"), Some(1.0));
        assert!(rel(got.rate, want) < 1e-14);
        assert!(rel(got.rate, quad(&ch, &sys)) < 1e-8);
    }
}

#[test]
fn closed_form_rejects_unsupported_parameters() {
    let sys = SystemParams::from_db(2, 10.0, 2.0).unwrap();
    for (mu, m) in [(1.5, 2.0), (1.0, 2.5), (2.0, 1.0)] {
        let ch = make_channel(1.0, mu, m, 0.0).unwrap();
        assert!(matches!(
            rate_closed_integer(&ch, &sys),
            Err(Error::Unsupported { .. })
        ));
    }
}

#[test]
fn zero_rho_gives_zero_rate() {
    let ch = make_channel(3.0, 1.3, 0.8, -5.0).unwrap();
    let sys = SystemParams::new(2, 0.0, 2.0).unwrap();
    assert_eq!(quad(&ch, &sys), 0.0);
    let ch = make_channel(3.0, 1.0, 2.0, -5.0).unwrap();
    assert_eq!(rate_closed_integer(&ch, &sys).unwrap().rate, 0.0);
}

#[test]
fn quadrature_matches_simulation_reference() {
    // 10^7-trial Monte Carlo estimate (seed 7) at kappa = 3, mu = m = 1, gamma_bar = -5 dB, A = 2, L = 2, 15 dB.
    let (mc, stderr) = (2.490_352_093_252_935_3, 4.557_994_909_837_537e-4);
    let ch = make_channel(3.0, 1.0, 1.0, -5.0).unwrap();
    let sys = SystemParams::from_db(2, 15.0, 2.0).unwrap();
    let q = quad(&ch, &sys);
    assert!((q - mc).abs() < 3.0 * stderr, "{q} vs {mc} +- {stderr}");
    assert!(rel(q, 2.490_125_081_070_232_7) < 1e-10);
}

#[test]
fn quadrature_rate_increases_with_rho() {
    let ch = make_channel(3.0, 1.0, 1.0, -5.0).unwrap();
    let r10 = quad(&ch, &SystemParams::from_db(2, 10.0, 2.0).unwrap());
    let r20 = quad(&ch, &SystemParams::from_db(2, 20.0, 2.0).unwrap());
    assert!(r20 > r10);
}

#[test]
fn quadrature_handles_non_integer_parameters() {
    // 40-digit quadrature references.
    let cases = [
        ((2.0, 1.5, 0.75, -5.0, 1.7, 3, 20.0), 4.394_607_307_240_108),
        ((0.4, 0.6, 2.2, 3.0, 0.3, 1, 35.0), 10.270_265_814_692_042),
    ];
    for ((kappa, mu, m, gb, a, l, rho_db), reference) in cases {
        let ch = make_channel(kappa, mu, m, gb).unwrap();
        let got = quad(&ch, &SystemParams::from_db(l, rho_db, a).unwrap());
        assert!(rel(got, reference) < 1e-10, "{got} vs {reference}");
    }
}

#[test]
fn quadrature_self_consistency() {
    for (kappa, mu, m, l, a, rho_db) in [
        (3.0, 1.0, 1.0, 2, 2.0, 15.0),
        (0.0, 0.5, 4.0, 1, 0.5, 30.0),
        (10.0, 2.0, 3.0, 4, 5.0, 0.0),
        (3.0, 1.0, 2.0, 2, 0.5, 40.0),
    ] {
        let ch = make_channel(kappa, mu, m, -5.0).unwrap();
        let sys = SystemParams::from_db(l, rho_db, a).unwrap();
        let res = rate_quadrature(&ch, &sys, &QuadratureSpec::default()).unwrap();
        let scale = sys.rho() / l as f64;
        let ln_mgf = |s: f64| ch.ln_mgf(l, scale * s);
        let resolution = res.diagnostic("resolution").unwrap();
        let refined = if res.diagnostic("scheme") == Some(0.0) {
            gauss_laguerre_ln_expectation(ln_mgf, a, 2 * resolution as usize).unwrap()
        } else {
            log_trapezoid_ln_expectation(ln_mgf, a, resolution / 2.0)
                .unwrap()
                .0
        };
        let refined_rate = -refined / (a * LN_2);
        assert!(
            rel(refined_rate, res.rate) < 1e-9,
            "{refined_rate} vs {}",
            res.rate
        );
    }
}

#[test]
fn schemes_agree_where_both_converge() {
    let ch = make_channel(1.0, 2.0, 3.0, 0.0).unwrap();
    let sys = SystemParams::from_db(2, 5.0, 2.0).unwrap();
    let gl = QuadratureSpec {
        scheme: QuadratureScheme::GaussLaguerre,
        ..QuadratureSpec::default()
    };
    let trap = QuadratureSpec {
        scheme: QuadratureScheme::LogTrapezoid,
        ..QuadratureSpec::default()
    };
    let a = rate_quadrature(&ch, &sys, &gl).unwrap().rate;
    let b = rate_quadrature(&ch, &sys, &trap).unwrap().rate;
    assert!(rel(a, b) < 1e-10);
}

#[test]
fn gauss_laguerre_alone_reports_its_cap() {
    // At high SNR and small A the integrand has a slowly decaying s^(A - 1 - L mu) tail.
    let ch = make_channel(3.0, 1.0, 1.0, -5.0).unwrap();
    let sys = SystemParams::from_db(2, 40.0, 0.5).unwrap();
    let gl = QuadratureSpec {
        scheme: QuadratureScheme::GaussLaguerre,
        ..QuadratureSpec::default()
    };
    match rate_quadrature(&ch, &sys, &gl) {
        Err(Error::Convergence {
            nodes,
            estimate,
            delta,
            ..
        }) => {
            assert_eq!(nodes, QUADRATURE_MAX_NODES);
            assert!(estimate.is_finite() && delta > 0.0);
        }
        other => panic!("expected convergence error, got {other:?}"),
    }
    let auto = rate_quadrature(&ch, &sys, &QuadratureSpec::default()).unwrap();
    assert_eq!(auto.diagnostic("scheme"), Some(1.0));
    assert!(rel(auto.rate, rate_closed_integer(&ch, &sys).unwrap().rate) < 1e-8);
}

#[test]
fn kappa_zero_reduces_to_nakagami() {
    for mu in [0.5, 1.0, 2.5] {
        let ch = make_channel(0.0, mu, 3.0, -5.0).unwrap();
        for (l, a, rho_db) in [(1, 0.5, 0.0), (2, 2.0, 15.0), (4, 5.0, 30.0)] {
            let sys = SystemParams::from_db(l, rho_db, a).unwrap();
            let scale = sys.rho() / l as f64 * ch.gamma_bar() / mu;
            let nak = ln_expectation_from_mgf(
                |s: f64| -mu * l as f64 * (scale * s).ln_1p(),
                a,
                &QuadratureSpec::default(),
            )
            .unwrap();
            let want = -nak.ln_expectation / (a * LN_2);
            assert!(rel(quad(&ch, &sys), want) < 1e-10);
        }
    }
    // Rayleigh, A = 1, unit SNR: E[1/(1+X)] = e E1(1).
    let ch = make_channel(0.0, 1.0, 1.0, 0.0).unwrap();
    let sys = SystemParams::from_db(1, 0.0, 1.0).unwrap();
    assert!(rel(quad(&ch, &sys), 0.745_775_173_729_268) < 1e-12);
}

#[test]
fn rate_nonincreasing_in_a() {
    for (mu, m) in [(1.0, 1.0), (1.0, 3.0), (2.0, 2.0), (0.7, 1.3)] {
        let ch = make_channel(1.0, mu, m, -5.0).unwrap();
        for rho_db in [0.0, 15.0, 30.0] {
            let rates: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
                .into_iter()
                .map(|a| quad(&ch, &SystemParams::from_db(2, rho_db, a).unwrap()))
                .collect();
            assert!(rates.windows(2).all(|w| w[1] <= w[0]), "{rates:?}");
        }
    }
}

#[test]
fn asymptote_reference_value() {
    // 40-digit evaluation of the asymptotic formula.
    let ch = make_channel(3.0, 0.5, 1.0, -5.0).unwrap();
    let sys = SystemParams::from_db(2, 30.0, 2.0).unwrap();
    let v = rate_asymptotic(&ch, &sys).unwrap().rate;
    assert!(rel(v, 4.474_338_213_496_565) < 1e-13, "{v}");
}

#[test]
fn asymptote_slope_and_validity() {
    let ch = make_channel(3.0, 0.5, 1.0, -5.0).unwrap();
    let r = |rho_db: f64| {
        rate_asymptotic(&ch, &SystemParams::from_db(2, rho_db, 2.0).unwrap())
            .unwrap()
            .rate
    };
    let want = 2.0 * 2.0 * 0.5 / 2.0 * 10f64.log2();
    assert!((r(35.0) - r(15.0) - want).abs() < 1e-12);

    let ch = make_channel(3.0, 1.0, 1.0, -5.0).unwrap();
    for a in [2.0, 1.0] {
        let sys = SystemParams::from_db(2, 20.0, a).unwrap();
        assert!(matches!(
            rate_asymptotic(&ch, &sys),
            Err(Error::Validity { .. })
        ));
    }
    assert!(rate_asymptotic(&ch, &SystemParams::new(1, 0.0, 2.0).unwrap()).is_err());
}

#[test]
fn asymptote_approaches_exact_rate() {
    let ch = make_channel(1.0, 1.0, 2.0, 0.0).unwrap();
    let gap = |rho_db: f64| {
        let sys = SystemParams::from_db(2, rho_db, 5.0).unwrap();
        (quad(&ch, &sys) - rate_asymptotic(&ch, &sys).unwrap().rate).abs()
    };
    let g = [gap(20.0), gap(30.0), gap(40.0)];
    assert!(g[0] > g[1] && g[1] > g[2] && g[2] < 0.01, "{g:?}");
}

#[test]
fn dispatch_auto() {
    let opts = EvalOptions::default();
    let sys = SystemParams::from_db(2, 15.0, 2.0).unwrap();
    let ch = make_channel(3.0, 1.5, 1.0, -5.0).unwrap();
    assert_eq!(
        rate_dispatch(&ch, &sys, MethodChoice::Auto, &opts)
            .unwrap()
            .method,
        Method::Quadrature
    );
    let ch = make_channel(3.0, 1.0, 2.0, -5.0).unwrap();
    assert_eq!(
        rate_dispatch(&ch, &sys, MethodChoice::Auto, &opts)
            .unwrap()
            .method,
        Method::ClosedInteger
    );
    let asym = rate_dispatch(&ch, &sys, MethodChoice::Only(Method::Asymptotic), &opts);
    assert!(matches!(asym, Err(Error::Validity { .. })));
}

#[test]
fn compare_integer_case() {
    let ch = make_channel(3.0, 1.0, 2.0, -5.0).unwrap();
    let sys = SystemParams::from_db(2, 15.0, 2.0).unwrap();
    let cmp = compare_methods(&ch, &sys, &EvalOptions::default(), false).unwrap();
    assert!(cmp.max_rel_discrepancy.unwrap() < 1e-8);
    assert!(cmp.get(Method::Asymptotic).is_none());
    assert!(cmp.max_mc_sigma.is_none());
    assert_eq!(cmp.validating().count(), 2);
}

#[test]
fn compare_survives_partial_failure() {
    let ch = make_channel(3.0, 1.5, 0.5, -5.0).unwrap();
    let sys = SystemParams::from_db(2, 15.0, 2.0).unwrap();
    let cmp = compare_methods(&ch, &sys, &EvalOptions::default(), true).unwrap();
    assert!(cmp.get(Method::Quadrature).is_some());
    assert!(cmp.get(Method::ClosedInteger).is_none());
    assert!(cmp.get(Method::MonteCarlo).is_none());
    assert!(cmp.max_rel_discrepancy.is_none());
}

#[test]
fn rule_cache_is_consistent_with_fresh_rules() {
    let rule = gauss_laguerre(1.0, 64).unwrap();
    // Weight s^(A-1) e^-s with A = 2, and Gamma(2) = 1.
    let fresh = rule.ln_integrate(|s: f64| -(0.3 * s).ln_1p());
    let via_rate = gauss_laguerre_ln_expectation(|s: f64| -(0.3 * s).ln_1p(), 2.0, 64).unwrap();
    assert!((fresh - via_rate).abs() < 1e-14);
}
