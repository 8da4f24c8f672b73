//! Extended-precision digamma, log-gamma and related kernels.

use std::cell::RefCell;

use crate::bigreal::{precision_digits, BigComplex, BigReal};

/// Shift threshold for the asymptotic series at the current precision.
fn shift_threshold() -> f64 {
    40f64.max(0.6 * precision_digits() as f64)
}

thread_local! {
    static TANGENT: RefCell<Vec<BigReal>> = const { RefCell::new(Vec::new()) };
}

/// Tangent numbers T_1..T_n held exactly at high precision.
fn tangent_number(n: usize) -> BigReal {
    TANGENT.with(|t| {
        let mut t = t.borrow_mut();
        if t.len() <= n {
            // exact integer arithmetic; T_n has fewer than 4 n log10(n) digits
            let count = n.max(64);
            let digits = (4.0 * count as f64 * (count as f64).log10()) as u32 + 20;
            let vals = crate::bigreal::with_digits(digits, || {
                let mut v: Vec<BigReal> = vec![BigReal::zero(); count + 1];
                v[1] = BigReal::one();
                for k in 2..=count {
                    v[k] = &v[k - 1] * (k as f64 - 1.0);
                }
                for k in 2..=count {
                    for j in k..=count {
                        v[j] = &v[j - 1] * ((j - k) as f64) + &v[j] * ((j - k + 2) as f64);
                    }
                }
                v
            });
            *t = vals;
        }
        t[n].clone()
    })
}

/// B_{2n} at working precision.
pub fn bernoulli_even(n: usize) -> BigReal {
    if n == 0 {
        return BigReal::one();
    }
    let t = tangent_number(n);
    let four_n = BigReal::from_i64(4).powi(n as u32);
    let v = t * (2 * n) as f64 / (&four_n * (&four_n - 1.0));
    if n % 2 == 1 {
        v
    } else {
        -v
    }
}

fn asymptotic_terms_needed(a_abs: f64) -> usize {
    // B_{2n}/(2n a^{2n}) ~ 2 (2n)!/(2 pi a)^{2n}; stop at 10^-(digits+5)
    let target = -((precision_digits() + 5) as f64) * std::f64::consts::LN_10;
    let mut log_term = 0.0;
    let two_pi_a = 2.0 * std::f64::consts::PI * a_abs;
    for n in 1..400 {
        let k = 2 * n;
        log_term += ((k - 1) as f64).ln() + (k as f64).ln() - 2.0 * two_pi_a.ln();
        if log_term < target {
            return n;
        }
    }
    400
}

/// psi(1/2 + i tau).
pub fn digamma_half(tau: &BigReal) -> BigComplex {
    let mut a = BigComplex::new(BigReal::ratio(1, 2), tau.clone());
    let mut shift = BigComplex::real(BigReal::zero());
    let thr = shift_threshold();
    let one = BigReal::one();
    while a.abs().to_f64() < thr {
        shift = &shift + &a.inv();
        a = a.add_real(&one);
    }
    let inv = a.inv();
    let inv2 = &inv * &inv;
    let mut s = &a.ln() - &inv.scale(&BigReal::ratio(1, 2));
    let mut p = inv2.clone();
    let terms = asymptotic_terms_needed(a.abs().to_f64());
    for n in 1..=terms {
        let c = bernoulli_even(n) / (2 * n) as f64;
        s = &s - &p.scale(&c);
        p = &p * &inv2;
    }
    &s - &shift
}

/// ln Gamma(z) for Re z > 0 with a continuous imaginary part.
pub fn ln_gamma(z: &BigComplex) -> BigComplex {
    let mut a = z.clone();
    let mut shift = BigComplex::real(BigReal::zero());
    let thr = shift_threshold();
    let one = BigReal::one();
    while a.abs().to_f64() < thr {
        shift = &shift + &a.ln();
        a = a.add_real(&one);
    }
    let inv = a.inv();
    let inv2 = &inv * &inv;
    let half = BigReal::ratio(1, 2);
    let ln_a = a.ln();
    let mut s = &(&a.add_real(&-&half) * &ln_a) - &a;
    s = s.add_real(&((BigReal::pi() * 2.0).ln() * &half));
    let mut p = inv.clone();
    let terms = asymptotic_terms_needed(a.abs().to_f64());
    for n in 1..=terms {
        let c = bernoulli_even(n) / ((2 * n) * (2 * n - 1)) as f64;
        s = &s + &p.scale(&c);
        p = &p * &inv2;
    }
    &s - &shift
}

/// ln |Gamma(m + 1/2 + i tau)|^2 through the complex log-gamma.
pub fn log_abs_gamma_sq(m: i64, tau: &BigReal) -> BigReal {
    let half = BigReal::ratio(1, 2);
    if m >= 0 {
        let z = BigComplex::new(&half + &BigReal::from_i64(m), tau.clone());
        ln_gamma(&z).re * 2.0
    } else {
        // shift down from 1/2 + i tau
        let mut v = ln_gamma(&BigComplex::new(half.clone(), tau.clone())).re * 2.0;
        let t2 = tau.sqr();
        for j in m..0 {
            let a = BigReal::from_i64(j) + &half;
            v -= (a.sqr() + &t2).ln();
        }
        v
    }
}

/// Modulus and phase (reduced to (-pi, pi]) of Gamma(1/2 + mu + i tau) / Gamma(1 + i tau).
pub fn gamma_ratio_polar(mu: u32, tau: &BigReal) -> (BigReal, BigReal) {
    let half = BigReal::ratio(1, 2);
    let a = ln_gamma(&BigComplex::new(&half + &BigReal::from_i64(mu as i64), tau.clone()));
    let b = ln_gamma(&BigComplex::new(BigReal::one(), tau.clone()));
    let d = &a - &b;
    let two_pi = BigReal::pi() * 2.0;
    let turns = (&d.im / &two_pi).to_f64().round();
    let mut rho = &d.im - &(&two_pi * turns);
    if rho > BigReal::pi() {
        rho -= &two_pi;
    } else if rho <= -BigReal::pi() {
        rho += &two_pi;
    }
    (d.re.exp(), rho)
}

/// 1 / (1 + i tau)_k by direct complex products.
pub fn pochhammer_inverse(tau: &BigReal, k: u32) -> BigComplex {
    let mut p = BigComplex::real(BigReal::one());
    for j in 1..=k {
        p = &p * &BigComplex::new(BigReal::from_i64(j as i64), tau.clone());
    }
    p.inv()
}
