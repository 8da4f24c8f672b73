//! Identities used to check computed values: the Wronskian of (P, R), the
//! m-recurrence written in two forms, and the near-one cross product.

use std::f64::consts::{LN_2, PI};

use crate::conical_p::{conicpr_scaled, p_series_scaled, ScaledQuad};
use crate::conical_r::{r01_series, sqrt_x2m1};
use crate::scaled::Scaled;
use crate::{NumericConfig, Region, Result};

/// ln cosh(pi tau) without overflow.
pub fn ln_cosh_pi(tau: f64) -> f64 {
    let t = PI * tau.abs();
    t + (-2.0 * t).exp().ln_1p() - LN_2
}

/// ln sinh(pi tau) for tau > 0 without overflow.
pub fn ln_sinh_pi(tau: f64) -> f64 {
    let t = PI * tau;
    t + (-(-2.0 * t).exp()).ln_1p() - LN_2
}

/// ln(e^{-pi tau} + sinh(pi tau)), the bracket of the Wronskian, by a
/// log-sum of its two terms.
///
/// Analytically e^{-pi tau} + sinh(pi tau) = cosh(pi tau); evaluating the sum
/// term by term lets the identity be checked against [`ln_cosh_pi`].
pub fn ln_wronskian_bracket(tau: f64) -> f64 {
    if tau == 0.0 {
        return 0.0;
    }
    let a = -PI * tau;
    let b = ln_sinh_pi(tau);
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// prod_{j<m} ((j+1/2)^2 + tau^2) = pi / (|Gamma(1/2-m+i tau)|^2 cosh(pi tau)).
pub fn wronskian_product(m: u32, tau: f64) -> Scaled {
    let t2 = tau * tau;
    let mut p = Scaled::ONE;
    for j in 0..m {
        let a = j as f64 + 0.5;
        p = p.mul_f64(a * a + t2);
    }
    p
}

/// Relative deviation of P R' - P' R from its closed form.
pub fn wronskian_error(q: &ScaledQuad, x: f64, m: u32, tau: f64) -> f64 {
    let w = (q.pm * q.rmd).sub(q.pmd * q.rm);
    let one_minus_x2 = -(x - 1.0) * (x + 1.0);
    let expect = wronskian_product(m, tau).mul_f64(1.0 / one_minus_x2);
    (w.ratio(expect) - 1.0).abs()
}

/// Evaluates the quadruple and its Wronskian error.
pub fn wronskian_error_at(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<(f64, Region)> {
    let q = conicpr_scaled(x, m, tau, cfg)?;
    Ok((wronskian_error(&q, x, m, tau), q.r_region))
}

/// Deviations of the two forms of the m-recurrence from one, given
/// F^{m-1}, F^m, F^{m+1}.
pub fn recurrence_errors(prev: Scaled, curr: Scaled, next: Scaled, x: f64, m: u32, tau: f64) -> (f64, f64) {
    let q = 2.0 * m as f64 * x / sqrt_x2m1(x);
    let a = m as f64 - 0.5;
    let b = a * a + tau * tau;
    let lhs1 = curr.mul_f64(q).sub(prev.mul_f64(b));
    let e1 = (lhs1.ratio(next) - 1.0).abs();
    let lhs2 = next.add(prev.mul_f64(b));
    let e2 = (lhs2.ratio(curr.mul_f64(q)) - 1.0).abs();
    (nan_to_inf(e1), nan_to_inf(e2))
}

fn nan_to_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Deviation of (P^0 R^1 - P^1 R^0) sqrt(x^2 - 1) from one, with every value
/// taken from the near-one series.
pub fn near_one_error(x: f64, tau: f64, cfg: &NumericConfig) -> Result<f64> {
    let r = r01_series(x, tau, cfg)?;
    let p0 = p_series_scaled(x, 0, tau, cfg)?.pm;
    let p1 = p_series_scaled(x, 1, tau, cfg)?.pm;
    let v = p0.mul_f64(r.r1).sub(p1.mul_f64(r.r0)).mul_f64(sqrt_x2m1(x));
    Ok(nan_to_inf((v.to_f64_lossy() - 1.0).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_is_cosh() {
        for i in 0..=400 {
            let tau = i as f64 * 0.5;
            let a = ln_wronskian_bracket(tau);
            let b = ln_cosh_pi(tau);
            assert!((a - b).abs() <= 2.0 * f64::EPSILON * b.abs().max(1.0), "{tau}");
        }
    }

    #[test]
    fn product_matches_log_gamma() {
        for (m, tau) in [(0u32, 3.0), (4, 0.0), (9, 25.0)] {
            let ln = PI.ln() - crate::gammakit::log_abs_gamma_sq(-(m as i64), tau) - ln_cosh_pi(tau);
            assert!((wronskian_product(m, tau).ln_abs() - ln).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_errors_vanish_on_exact_data() {
        let (x, m, tau) = (1.7, 3u32, 2.0);
        let prev = Scaled::from(0.4);
        let curr = Scaled::from(-1.3);
        let q = 2.0 * m as f64 * x / sqrt_x2m1(x);
        let next = curr.mul_f64(q).sub(prev.mul_f64(6.25 + 4.0));
        let (e1, e2) = recurrence_errors(prev, curr, next, x, m, tau);
        assert!(e1 < 1e-15 && e2 < 1e-15);
    }
}
