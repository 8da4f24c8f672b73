//! Computed values substituted into the differential equation, with the second
//! derivative taken by central differences of the computed first derivative.

use proptest::prelude::*;

use conical::conical_p::conicp_pair;
use conical::{conicpr, NumericConfig};

const TOL: f64 = 1e-6;

fn step(x: f64, m: u32, tau: f64) -> f64 {
    let q = ((1.0 - x) * (1.0 + x)).abs();
    let k = ((tau * tau + 0.25) * q + (m * m) as f64).sqrt() / q;
    (1e-4 * x.abs().max(0.1))
        .min(1e-3 / k)
        .min((x - 1.0).abs() / 10.0)
        .min((x + 1.0).abs() / 10.0)
}

/// Relative residual from value, derivative, and derivatives at x -+ h.
fn residual(x: f64, m: u32, tau: f64, h: f64, (f, df): (f64, f64), df_lo: f64, df_hi: f64) -> f64 {
    let q = (1.0 - x) * (1.0 + x);
    // half the spacing of the representable abscissae x -+ h
    let h = 0.5 * ((x + h) - (x - h));
    let d2 = (df_hi - df_lo) / (2.0 * h);
    let terms = [q * d2, -2.0 * x * df, -(tau * tau + 0.25 + (m * m) as f64 / q) * f];
    let scale = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn p_and_r_satisfy_the_equation(x in 1.001f64..100.0, m in 0u32..=100, tau in 0.0f64..100.0) {
        let h = step(x, m, tau);
        let c = conicpr(x, m as i32, tau);
        let lo = conicpr(x - h, m as i32, tau);
        let hi = conicpr(x + h, m as i32, tau);
        prop_assume!(c.status.is_ok() && lo.status.is_ok() && hi.status.is_ok());
        let ep = residual(x, m, tau, h, (c.pm, c.pmd), lo.pmd, hi.pmd);
        let er = residual(x, m, tau, h, (c.rm, c.rmd), lo.rmd, hi.rmd);
        prop_assert!(ep <= TOL, "P residual {ep:e}");
        prop_assert!(er <= TOL, "R residual {er:e}");
    }

    #[test]
    fn p_on_the_interval(x in -0.9f64..0.999, m in 0u32..=40, tau in 0.0f64..100.0) {
        let cfg = NumericConfig::default();
        let h = step(x, m, tau);
        let eval = |x: f64| conicp_pair(x, m, tau, &cfg).ok().and_then(|v| Some((v.pm.to_f64()?, v.pmd.to_f64()?)));
        let (c, lo, hi) = (eval(x), eval(x - h), eval(x + h));
        prop_assume!(c.is_some() && lo.is_some() && hi.is_some());
        let (c, (_, dlo), (_, dhi)) = (c.unwrap(), lo.unwrap(), hi.unwrap());
        let e = residual(x, m, tau, h, c, dlo, dhi);
        prop_assert!(e <= TOL, "residual {e:e}");
    }
}
