//! Evaluators against frozen extended-precision reference values.

use std::collections::HashMap;
use std::sync::OnceLock;

use conical::besseljy::bessel_j0y0_j1y1;
use conical::conical_p::{negative_order_factor, p_ode_march, p_series};
use conical::conical_r::{r01_kummer, r01_series, r_large_x, raise_order};
use conical::gammakit::{digamma_half, gamma_ratio_polar, log_abs_gamma_sq, pochhammer_inverse_seq};
use conical::{conicp, conicpr, conicr, NumericConfig};

fn table() -> &'static HashMap<String, f64> {
    static T: OnceLock<HashMap<String, f64>> = OnceLock::new();
    T.get_or_init(|| {
        let text = include_str!("data/derived.txt");
        text.lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .map(|l| {
                let (k, v) = l.split_once(' ').expect("key value");
                (k.to_string(), v.trim().parse().expect("number"))
            })
            .collect()
    })
}

fn r(key: &str) -> f64 {
    *table().get(key).unwrap_or_else(|| panic!("missing {key}"))
}

fn assert_rel(got: f64, key: &str, tol: f64) {
    let want = r(key);
    let err = ((got - want) / want).abs();
    assert!(err <= tol, "{key}: got {got:e}, want {want:e}, rel err {err:e}");
}

fn cfg() -> NumericConfig {
    NumericConfig::default()
}

#[test]
fn digamma_large_tau() {
    let d = digamma_half(50.0);
    assert_rel(d.re, "digamma_half.tau50.re", 1e-14);
    assert_rel(d.im, "digamma_half.tau50.im", 1e-14);
}

#[test]
fn log_gamma_negative_shift() {
    let got = log_abs_gamma_sq(-3, 7.0);
    assert!((got - r("log_abs_gamma_sq.m-3.tau7")).abs() <= 1e-13);
}

#[test]
fn gamma_ratio_modulus_and_phase() {
    for tau in [10, 5] {
        let g = gamma_ratio_polar(1, tau as f64);
        assert_rel(g.h, &format!("gamma_ratio_polar.mu1.tau{tau}.modulus"), 1e-13);
        let rho = r(&format!("gamma_ratio_polar.mu1.tau{tau}.phase"));
        assert!((g.rho - rho).abs() <= 1e-13, "tau {tau}: {} vs {rho}", g.rho);
    }
}

#[test]
fn pochhammer_third_term() {
    let s = pochhammer_inverse_seq(5.0, 3).unwrap();
    let scale = 2f64.powi(-s.exp[3] as i32);
    let re = s.u[3] / s.w[3] * scale;
    let im = s.v[3] / s.w[3] * scale;
    let (wr, wi) = (r("pochhammer_inverse.tau5.k3.re"), r("pochhammer_inverse.tau5.k3.im"));
    let err = ((re - wr).hypot(im - wi)) / wr.hypot(wi);
    assert!(err <= 1e-14, "{err:e}");
}

#[test]
fn r_series_near_one() {
    for (x, tau) in [(1.01, 1.0), (1.5, 0.5), (1.5, 1.0)] {
        let v = r01_series(x, tau, &cfg()).unwrap();
        assert_rel(v.r0, &format!("r01.x{x}.tau{tau}.r0"), 1e-13);
        assert_rel(v.r1, &format!("r01.x{x}.tau{tau}.r1"), 1e-13);
    }
}

#[test]
fn r_kummer_large_tau() {
    let v = r01_kummer(1.02, 50.0, 1, &cfg()).unwrap();
    assert_rel(v, "r01.x1.02.tau50.r1", 1e-12);
    let v0 = r01_kummer(1.02, 50.0, 0, &cfg()).unwrap();
    assert_rel(v0, "r01.x1.02.tau50.r0", 1e-12);
}

#[test]
fn r_climb_to_order_ten() {
    let s = r01_series(2.0, 3.0, &cfg()).unwrap();
    let v = raise_order(s.r0, s.r1, 1, 10, 2.0, 3.0, &cfg()).unwrap();
    assert_eq!(v.len(), 10);
    assert_rel(v[9], "r_orders.x2.tau3.m10.r10", 1e-12);
}

#[test]
fn r_large_x_expansion() {
    assert_rel(r_large_x(10.0, 20.0, 1, &cfg()).unwrap(), "r.x10.tau20.r1", 5e-12);
    assert_rel(r_large_x(10.0, 20.0, 0, &cfg()).unwrap(), "r.x10.tau20.r0", 5e-12);
}

#[test]
fn conicr_values() {
    assert_rel(conicr(1.5, 0, 1.0).value, "r.x1.5.m0.tau1.value", 1e-12);
    assert_rel(conicr(50.0, 40, 80.0).value, "r.x50.m40.tau80.value", 5e-12);
    assert_rel(conicr(50.0, 10, 80.0).value, "r.x50.m10.tau80.value", 5e-12);
}

#[test]
fn p_series_interval() {
    let (v, est) = p_series(0.5, 3, 4.0, &cfg()).unwrap();
    assert_rel(v, "p.x0.5.m3.tau4.value", 1e-13);
    assert!(est < 1e-13);
}

#[test]
fn negative_order_flip() {
    let f = negative_order_factor(2, 10.0).to_f64().unwrap();
    assert_rel(f, "negative_order_factor.m2.tau10", 1e-13);
}

#[test]
fn p_march_and_conicp() {
    let (v, d) = p_ode_march(10.0, 0, 30.0, &cfg()).unwrap();
    assert_rel(v, "p.x10.m0.tau30.value", 5e-12);
    assert_rel(d, "p.x10.m0.tau30.deriv", 5e-12);
    assert_rel(conicp(30.0, 5, 60.0).value, "p.x30.m5.tau60.value", 5e-12);
}

#[test]
fn conicpr_quadruple() {
    let q = conicpr(2.0, 1, 5.0);
    assert_eq!(q.status.code(), 0);
    assert_rel(q.pm, "conicpr.x2.m1.tau5.pm", 5e-12);
    assert_rel(q.pmd, "conicpr.x2.m1.tau5.pmd", 5e-12);
    assert_rel(q.rm, "conicpr.x2.m1.tau5.rm", 5e-12);
    assert_rel(q.rmd, "conicpr.x2.m1.tau5.rmd", 5e-12);
}

#[test]
fn abel_constant_is_the_order_product() {
    // (1 - x^2) W{P, R} = prod_{j<2} ((j+1/2)^2 + 100)
    let p = 100.25 * 102.25;
    assert_rel(p, "march_abel.x1.3.x12.m2.tau10.w_start", 1e-15);
    assert_rel(p, "march_abel.x1.3.x12.m2.tau10.w_end", 1e-15);
}

#[test]
fn bessel_against_reference() {
    let j0 = bessel_j0y0_j1y1(1.0).unwrap().j0;
    assert!((j0 - 0.7651976865579666).abs() <= 1e-15);
    for key in table()
        .keys()
        .filter(|k| k.starts_with("bessel.") && k.ends_with(".j0"))
    {
        let stem = key.trim_end_matches(".j0");
        let z: f64 = stem.trim_start_matches("bessel.z").parse().unwrap();
        let b = bessel_j0y0_j1y1(z).unwrap();
        for (name, got, mate) in [
            ("j0", b.j0, "y0"),
            ("y0", b.y0, "j0"),
            ("j1", b.j1, "y1"),
            ("y1", b.y1, "j1"),
        ] {
            let want = r(&format!("{stem}.{name}"));
            let modulus = want.hypot(r(&format!("{stem}.{mate}")));
            let err = (got - want).abs() / modulus;
            assert!(err <= 5e-14, "z {z} {name}: {err:e}");
        }
    }
}
