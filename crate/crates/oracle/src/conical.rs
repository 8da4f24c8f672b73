//! Reference values of P and R by series near x = 1, Taylor marching of the
//! differential equation, and the order recurrence.

use std::fmt;

use crate::bigreal::{precision_digits, with_digits, BigReal};
use crate::gamma::digamma_half;

/// Precondition failures of the oracle routines.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// The working precision does not cover the cancellation of the series.
    InsufficientGuardDigits { have: u32, need: u32 },
    /// Argument outside the supported window.
    Domain(&'static str),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InsufficientGuardDigits { have, need } => {
                write!(f, "precision {have} digits below required {need}")
            }
            Self::Domain(s) => write!(f, "argument out of domain: {s}"),
        }
    }
}

impl std::error::Error for OracleError {}

pub type OracleResult<T> = Result<T, OracleError>;

/// Which solution a march carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    P,
    R,
}

/// Value and x-derivative.
#[derive(Debug, Clone)]
pub struct ValueDeriv {
    pub value: BigReal,
    pub deriv: BigReal,
}

/// Reference quadruple at one point.
#[derive(Debug, Clone)]
pub struct Quadruple {
    pub pm: BigReal,
    pub pmd: BigReal,
    pub rm: BigReal,
    pub rmd: BigReal,
}

fn tol() -> BigReal {
    BigReal::from_i64(10).powi(precision_digits() + 8).recip()
}

/// Digits required by the near-one R series at `(x, tau)`.
pub fn r01_required_digits(x: f64, tau: f64) -> u32 {
    40 + (2.0 * tau * ((x - 1.0) / 2.0).sqrt() / std::f64::consts::LN_10).ceil() as u32
}

/// R^0 and R^1 with derivatives by the near-one log series.
pub fn oracle_r01(x: &BigReal, tau: &BigReal) -> OracleResult<(ValueDeriv, ValueDeriv)> {
    let (xf, tf) = (x.to_f64(), tau.to_f64());
    if !(xf > 1.0 && xf < 3.0) {
        return Err(OracleError::Domain("near-one R series needs 1 < x < 3"));
    }
    let need = r01_required_digits(xf, tf);
    let have = precision_digits();
    if have < need {
        return Err(OracleError::InsufficientGuardDigits { have, need });
    }
    let one = BigReal::one();
    let z = (&one - x) * 0.5;
    let w = ((x - &one) / (x + &one)).sqrt();
    let s2 = x.sqr() - &one;
    let s = s2.sqrt();
    let psi = digamma_half(tau).re;
    let base = -(BigReal::euler_gamma() + &psi + w.ln());
    let t2 = tau.sqr();
    let half = BigReal::ratio(1, 2);
    let eps = tol();
    // c_k = (1/2 - i tau)_k (1/2 + i tau)_k z^k / k!^2
    let mut c = BigReal::one();
    let mut harmonic = BigReal::zero();
    let mut r0 = BigReal::zero();
    let mut sum_c = BigReal::zero();
    let mut sum_kcl = BigReal::zero();
    // derivative sums: d/dz of c_k = k c_k / z, and d(ln w)/dx = 1/(x^2-1)
    let mut k = 0u64;
    let mut small = 0;
    loop {
        let kf = k as f64;
        let l = &harmonic + &base;
        let term0 = &c * &l;
        r0 += &term0;
        sum_c += &c;
        sum_kcl += &term0 * kf;
        if term0.abs() < &eps * &r0.abs().max(BigReal::one()) && c.abs() < eps {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        let a = BigReal::from_f64(kf) + &half;
        c = &c * (a.sqr() + &t2) * &z / ((kf + 1.0) * (kf + 1.0));
        harmonic += BigReal::from_f64(kf + 1.0).recip();
        k += 1;
        if k > 200_000 {
            return Err(OracleError::Domain("series did not converge"));
        }
    }
    // R^1 = sqrt(x^2-1)/(2z) * sum c_k ((w^2-1)/2 + k L_k)
    let w2m1 = w.sqr() - &one;
    let r1 = &s / (&z * 2.0) * (&w2m1 * &half * &sum_c + &sum_kcl);
    // dR^0/dx = -R^1/sqrt(x^2-1)
    let r0d = -(&r1 / &s);
    // dR^1/dx = -R^2/sqrt(x^2-1) + x R^1/(x^2-1), R^2 from the recurrence
    let r2 = x * 2.0 / &s * &r1 - (BigReal::ratio(1, 4) + &t2) * &r0;
    let r1d = -(&r2 / &s) + x * &r1 / &s2;
    Ok((
        ValueDeriv { value: r0, deriv: r0d },
        ValueDeriv { value: r1, deriv: r1d },
    ))
}

/// Digits lost to cancellation by the P series at `x > 1`.
fn p_series_guard(x: f64, tau: f64) -> u32 {
    if x <= 1.0 {
        0
    } else {
        (2.0 * tau * ((x - 1.0) / 2.0).sqrt() / std::f64::consts::LN_10).ceil() as u32
    }
}

/// P^m and its derivative by the hypergeometric series, for x in (-1, 1) or (1, 3).
pub fn oracle_p_series(x: &BigReal, m: u32, tau: &BigReal) -> OracleResult<ValueDeriv> {
    let xf = x.to_f64();
    if !(xf > -1.0 && xf < 3.0) || xf == 1.0 {
        return Err(OracleError::Domain("P series needs x in (-1, 1) or (1, 3)"));
    }
    let guard = p_series_guard(xf, tau.to_f64());
    with_digits(precision_digits() + guard, || {
        let one = BigReal::one();
        let z = (&one - x) * 0.5;
        let t2 = tau.sqr();
        let half = BigReal::ratio(1, 2);
        let eps = tol();
        let mf = m as f64;
        // F(1/2+i tau, 1/2-i tau; 1+m; z) and its z-derivative
        let mut c = BigReal::one();
        let mut f = BigReal::zero();
        let mut k = 0u64;
        let mut small = 0;
        loop {
            let kf = k as f64;
            f += &c;
            let a = BigReal::from_f64(kf) + &half;
            let ratio = (a.sqr() + &t2) / ((kf + 1.0) * (kf + 1.0 + mf));
            // d/dz z^{k+1} coefficient: (k+1) c_{k+1} / z = c_k * ratio
            let next = &c * &ratio * &z;
            if next.abs() < &eps * &f.abs() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            c = next;
            k += 1;
            if k > 2_000_000 {
                return Err(OracleError::Domain("series did not converge"));
            }
        }
        let fd = p_series_derivative(&z, m, tau, &eps);
        // prefactor |(1-x)/(1+x)|^{m/2} / m! * prod_{j<m} ((j+1/2)^2 + tau^2)
        let ratio_abs = ((&one - x) / (&one + x)).abs();
        let mut pref = ratio_abs.sqrt().powi(m);
        for j in 0..m {
            let a = BigReal::from_f64(j as f64) + &half;
            pref = pref * (a.sqr() + &t2) / ((j + 1) as f64);
        }
        let value = &pref * &f;
        let s2 = x.sqr() - &one;
        // d/dx ln|(1-x)/(1+x)|^{m/2} = m/(x^2-1); dz/dx = -1/2
        let deriv = &value * mf / &s2 - &pref * &fd * 0.5;
        Ok(ValueDeriv { value, deriv })
    })
}

/// dF/dz of F(1/2+i tau, 1/2-i tau; 1+m; z).
fn p_series_derivative(z: &BigReal, m: u32, tau: &BigReal, eps: &BigReal) -> BigReal {
    let t2 = tau.sqr();
    let half = BigReal::ratio(1, 2);
    let mf = m as f64;
    // dF/dz = sum_k d_k z^k with d_k = (k+1) c_{k+1}
    //       d_0 = ((1/2)^2+tau^2)/(1+m), d_{k+1} = d_k ((k+3/2)^2+tau^2) z / ((k+1)(k+2+m))
    let mut d = (half.sqr() + &t2) / (1.0 + mf);
    let mut s = BigReal::zero();
    let mut k = 0u64;
    let mut small = 0;
    loop {
        let kf = k as f64;
        s += &d;
        let a = BigReal::from_f64(kf + 1.5);
        let next = &d * (a.sqr() + &t2) * z / ((kf + 1.0) * (kf + 2.0 + mf));
        if next.abs() < eps * &s.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        d = next;
        k += 1;
        if k > 2_000_000 {
            break;
        }
    }
    s
}

/// Taylor-series march of the conical differential equation in x from
/// `(x0, y0, y0')` to `x1`, both on the same side of x = 1.
pub fn oracle_march(x0: &BigReal, y0: &BigReal, dy0: &BigReal, x1: &BigReal, m: u32, tau: &BigReal) -> ValueDeriv {
    let one = BigReal::one();
    let lambda = tau.sqr() + BigReal::ratio(1, 4);
    let m2 = BigReal::from_i64((m as i64) * (m as i64));
    let eps = tol();
    let mut c = x0.clone();
    let mut y = y0.clone();
    let mut dy = dy0.clone();
    let forward = x1 > x0;
    loop {
        let remaining = (x1 - &c).abs();
        if remaining.is_zero() {
            break;
        }
        let cf = c.to_f64();
        let q0f = (cf * cf - 1.0).abs();
        let kx = ((lambda.to_f64() * q0f + (m * m) as f64).sqrt() / q0f).max(1e-300);
        let dist = (cf - 1.0).abs().min((cf + 1.0).abs());
        let hf = (1.0 / kx).min(0.25 * dist);
        let mut h = BigReal::from_f64(hf);
        let last = h >= remaining;
        if last {
            h = remaining.clone();
        }
        if !forward {
            h = -h;
        }
        // polynomial coefficients in s = x - c
        let q0 = &one - c.sqr();
        let q1 = -(&c * 2.0);
        // q2 = -1
        let a = [
            q0.sqr(),
            &q0 * &q1 * 2.0,
            q1.sqr() - &q0 * 2.0,
            -(&q1 * 2.0),
            one.clone(),
        ];
        let b = [
            -(&c * &q0 * 2.0),
            -((&q0 + &c * &q1) * 2.0),
            -((&q1 - &c) * 2.0),
            BigReal::from_i64(2),
        ];
        let cc = [-(&lambda * &q0 + &m2), -(&lambda * &q1), lambda.clone()];
        // scaled: A_j h^j, B_j h^{j+1}, C_j h^{j+2}
        let hp: Vec<BigReal> = (0..=6).map(|k| h.powi(k)).collect();
        let at: Vec<BigReal> = a.iter().enumerate().map(|(j, v)| v * &hp[j]).collect();
        let bt: Vec<BigReal> = b.iter().enumerate().map(|(j, v)| v * &hp[j + 1]).collect();
        let ct: Vec<BigReal> = cc.iter().enumerate().map(|(j, v)| v * &hp[j + 2]).collect();
        let mut coef: Vec<BigReal> = vec![y.clone(), &dy * &h];
        let mut sum = &coef[0] + &coef[1];
        let mut dsum = coef[1].clone();
        let mut small = 0;
        let mut n = 0usize;
        let scale = y.abs().max((&dy * &h).abs());
        loop {
            // solve for b_{n+2}
            let mut acc = BigReal::zero();
            for (j, aj) in at.iter().enumerate().skip(1) {
                if n + 2 >= j {
                    let k = n + 2 - j;
                    if k >= 2 {
                        acc += aj * &coef[k] * ((k * (k - 1)) as f64);
                    }
                }
            }
            for (j, bj) in bt.iter().enumerate() {
                if n + 1 >= j {
                    let k = n + 1 - j;
                    acc += bj * &coef[k] * (k as f64);
                }
            }
            for (j, cj) in ct.iter().enumerate() {
                if n >= j {
                    acc += cj * &coef[n - j];
                }
            }
            let next = -(acc / (&at[0] * (((n + 2) * (n + 1)) as f64)));
            sum += &next;
            dsum += &next * ((n + 2) as f64);
            let tiny = next.abs() < &eps * &scale;
            coef.push(next);
            n += 1;
            if tiny {
                small += 1;
                if small >= 4 {
                    break;
                }
            } else {
                small = 0;
            }
            assert!(n < 5000, "Taylor series did not converge");
        }
        y = sum;
        dy = dsum / &h;
        if last {
            break;
        }
        c = &c + &h;
    }
    ValueDeriv { value: y, deriv: dy }
}

/// Anchor of the oracle march for degree parameter `tau`.
pub fn march_anchor(tau: f64) -> f64 {
    1.0 + (2.0 * (2.0 / tau.max(1e-3)).powi(2)).min(0.5)
}

/// R^0 and R^1 with derivatives at any x > 1.
pub fn oracle_r01_any(x: f64, tau: f64) -> OracleResult<(ValueDeriv, ValueDeriv)> {
    if x <= 1.0 {
        return Err(OracleError::Domain("R needs x > 1"));
    }
    let xa = march_anchor(tau).min(x);
    let digits = precision_digits().max(r01_required_digits(xa, tau));
    with_digits(digits, || {
        let xb = BigReal::from_f64(x);
        let xab = BigReal::from_f64(xa);
        let t = BigReal::from_f64(tau);
        let (r0, r1) = oracle_r01(&xab, &t)?;
        if xa == x {
            return Ok((r0, r1));
        }
        let a = oracle_march(&xab, &r0.value, &r0.deriv, &xb, 0, &t);
        let b = oracle_march(&xab, &r1.value, &r1.deriv, &xb, 1, &t);
        Ok((a, b))
    })
}

/// R^m, R^{m+1} at x > 1 by upward recurrence from R^0, R^1.
pub fn oracle_r_orders(x: f64, m: u32, tau: f64) -> OracleResult<(BigReal, BigReal)> {
    let (r0, r1) = oracle_r01_any(x, tau)?;
    let xb = BigReal::from_f64(x);
    let t2 = BigReal::from_f64(tau).sqr();
    let s = (xb.sqr() - 1.0).sqrt();
    let mut prev = r0.value;
    let mut cur = r1.value;
    for k in 1..=m {
        let kf = k as f64;
        let next = &xb * (2.0 * kf) / &s * &cur - ((BigReal::from_f64(kf - 0.5)).sqr() + &t2) * &prev;
        prev = cur;
        cur = next;
    }
    Ok((prev, cur))
}

/// R^m and its derivative at x > 1.
pub fn oracle_r(x: f64, m: u32, tau: f64) -> OracleResult<ValueDeriv> {
    let (rm, rm1) = oracle_r_orders(x, m, tau)?;
    let xb = BigReal::from_f64(x);
    let s2 = xb.sqr() - 1.0;
    let deriv = -(&rm1 / s2.sqrt()) + &xb * (m as f64) / &s2 * &rm;
    Ok(ValueDeriv { value: rm, deriv })
}

/// P^m and its derivative at x > -1, x != 1.
pub fn oracle_p(x: f64, m: u32, tau: f64) -> OracleResult<ValueDeriv> {
    if x <= -1.0 {
        return Err(OracleError::Domain("P needs x > -1"));
    }
    let xb = BigReal::from_f64(x);
    let t = BigReal::from_f64(tau);
    if x < 1.0 {
        return oracle_p_series(&xb, m, &t);
    }
    if x == 1.0 {
        return Err(OracleError::Domain("P oracle excludes x = 1"));
    }
    let xa = march_anchor(tau);
    if x <= xa {
        return oracle_p_series(&xb, m, &t);
    }
    let xab = BigReal::from_f64(xa);
    let seed = oracle_p_series(&xab, m, &t)?;
    Ok(oracle_march(&xab, &seed.value, &seed.deriv, &xb, m, &t))
}

/// Full reference quadruple at x > 1.
pub fn oracle_conical(x: f64, m: u32, tau: f64) -> OracleResult<Quadruple> {
    let p = oracle_p(x, m, tau)?;
    let r = oracle_r(x, m, tau)?;
    Ok(Quadruple {
        pm: p.value,
        pmd: p.deriv,
        rm: r.value,
        rmd: r.deriv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r01_leading_behaviour() {
        with_digits(50, || {
            let x = BigReal::parse("1.000000000001");
            let (_, r1) = oracle_r01(&x, &BigReal::one()).unwrap();
            let s = (x.sqr() - 1.0).sqrt();
            let lead = &r1.value * &s;
            assert!((lead - 1.0).abs().to_f64() < 1e-10);
        });
    }

    #[test]
    fn r01_refuses_without_guard_digits() {
        with_digits(40, || {
            let x = BigReal::from_f64(2.0);
            let err = oracle_r01(&x, &BigReal::from_f64(50.0)).unwrap_err();
            assert!(matches!(err, OracleError::InsufficientGuardDigits { .. }));
        });
    }

    #[test]
    fn r01_precision_doubling() {
        let a = with_digits(60, || {
            let (r0, _) = oracle_r01(&BigReal::from_f64(1.5), &BigReal::one()).unwrap();
            r0.value.to_sci(70)
        });
        let b = with_digits(120, || {
            let (r0, _) = oracle_r01(&BigReal::from_f64(1.5), &BigReal::one()).unwrap();
            r0.value
        });
        let a = with_digits(120, || BigReal::parse(&a));
        assert!(a.agreeing_digits(&b) >= 55.0);
    }

    #[test]
    fn zero_length_march_returns_seed() {
        with_digits(40, || {
            let x = BigReal::from_f64(1.3);
            let y = BigReal::from_f64(0.7);
            let dy = BigReal::from_f64(-2.0);
            let out = oracle_march(&x, &y, &dy, &x, 3, &BigReal::from_f64(4.0));
            assert!(out.value == y && out.deriv == dy);
        });
    }

    #[test]
    fn march_conserves_wronskian() {
        with_digits(40, || {
            let tau = BigReal::from_f64(3.0);
            let x0 = BigReal::from_f64(1.2);
            let x1 = BigReal::from_f64(4.0);
            let p = oracle_p_series(&x0, 2, &tau).unwrap();
            let a = oracle_march(&x0, &p.value, &p.deriv, &x1, 2, &tau);
            let q = (BigReal::one(), BigReal::from_f64(0.5));
            let b = oracle_march(&x0, &q.0, &q.1, &x1, 2, &tau);
            let w0 = (&p.value * &q.1 - &p.deriv * &q.0) * (BigReal::one() - x0.sqr());
            let w1 = (&a.value * &b.deriv - &a.deriv * &b.value) * (BigReal::one() - x1.sqr());
            assert!(w0.agreeing_digits(&w1) > 32.0);
        });
    }

    #[test]
    fn p_at_small_m_matches_march_from_series() {
        with_digits(40, || {
            let tau = BigReal::from_f64(2.0);
            let x0 = BigReal::from_f64(1.1);
            let x1 = BigReal::from_f64(1.9);
            let s0 = oracle_p_series(&x0, 1, &tau).unwrap();
            let s1 = oracle_p_series(&x1, 1, &tau).unwrap();
            let marched = oracle_march(&x0, &s0.value, &s0.deriv, &x1, 1, &tau);
            assert!(marched.value.agreeing_digits(&s1.value) > 32.0);
            assert!(marched.deriv.agreeing_digits(&s1.deriv) > 32.0);
        });
    }
}
