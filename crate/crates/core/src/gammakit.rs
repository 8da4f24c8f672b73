//! Digamma and gamma kernels on the line Re = 1/2, the gamma ratio
//! G(mu, tau) = Gamma(1/2 + mu + i tau) / Gamma(1 + i tau) in polar form, and
//! the Pochhammer sequence 1/(1 + i tau)_k carried as real triples.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::dd::Dd;
use crate::scaled::frexp;
use crate::{Error, Result};

/// Shift threshold for the asymptotic expansions.
const ASYMPTOTIC_MIN: f64 = 12.0;
const DIGAMMA_TERMS: usize = 8;
const LNGAMMA_TERMS: usize = 10;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// psi(1/2 + i tau) split into components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigammaValue {
    pub re: f64,
    pub im: f64,
}

/// Polar form of G(mu, tau).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatioPolar {
    /// Modulus H.
    pub h: f64,
    /// ln H, kept separately for large mu.
    pub log_h: f64,
    /// Phase rho in (-pi, pi].
    pub rho: f64,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy)]
struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    fn new(num: i128, den: i128) -> Self {
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Self {
            num: s * num / g,
            den: s * den / g,
        }
    }

    fn add(self, o: Self) -> Self {
        let g = gcd(self.den, o.den);
        let l = self.den / g * o.den;
        Self::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }

    fn scale(self, k: i128) -> Self {
        let g = gcd(k, self.den).max(1);
        Self::new(self.num * (k / g), self.den / g)
    }
}

/// Largest index served by [`bernoulli`].
pub const BERNOULLI_MAX: usize = 30;

fn bernoulli_table() -> &'static [f64; BERNOULLI_MAX + 1] {
    static TABLE: OnceLock<[f64; BERNOULLI_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0, exact in rationals
        let mut b = vec![Ratio::new(1, 1)];
        let mut binom = vec![1i128, 1];
        for n in 1..=BERNOULLI_MAX {
            // binom holds C(n, .) on entry; build C(n+1, .)
            let mut next = vec![1i128; n + 2];
            for k in 1..=n {
                next[k] = binom[k - 1] + binom[k];
            }
            binom = next;
            let mut acc = Ratio::new(0, 1);
            for (k, bk) in b.iter().enumerate() {
                acc = acc.add(bk.scale(binom[k]));
            }
            b.push(Ratio::new(-acc.num, acc.den * (n as i128 + 1)));
        }
        let mut out = [0.0; BERNOULLI_MAX + 1];
        for (o, r) in out.iter_mut().zip(&b) {
            *o = r.num as f64 / r.den as f64;
        }
        out
    })
}

/// Bernoulli number B_n (B_1 = -1/2) for `n <= BERNOULLI_MAX`.
pub fn bernoulli(n: usize) -> f64 {
    bernoulli_table()[n]
}

/// Bernoulli polynomial B_n(1/2 + j) for integer `j >= 0`.
pub(crate) fn bernoulli_poly_half(n: usize, j: u32) -> f64 {
    let mut v = (2f64.powi(1 - n as i32) - 1.0) * bernoulli(n);
    for i in 0..j {
        let x = 0.5 + i as f64;
        if n >= 1 {
            v += n as f64 * x.powi(n as i32 - 1);
        }
    }
    v
}

/// Bernoulli polynomial B_n(1).
pub(crate) fn bernoulli_poly_one(n: usize) -> f64 {
    if n == 1 {
        0.5
    } else {
        bernoulli(n)
    }
}

/// psi(1/2 + i tau).
pub fn digamma_half(tau: f64) -> DigammaValue {
    let v = digamma(Complex64::new(0.5, tau));
    DigammaValue { re: v.re, im: v.im }
}

/// psi(z) for Re z > 0 by upward shift and the asymptotic series.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut a = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while a.norm() < ASYMPTOTIC_MIN {
        shift += a.inv();
        a += 1.0;
    }
    let inv = a.inv();
    let inv2 = inv * inv;
    let mut s = a.ln() - 0.5 * inv;
    let mut p = inv2;
    for n in 1..=DIGAMMA_TERMS {
        s -= p * (bernoulli(2 * n) / (2 * n) as f64);
        p *= inv2;
    }
    s - shift
}

/// ln Gamma(z) for Re z > 0, principal branch with a continuous imaginary part.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut a = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while a.norm() < ASYMPTOTIC_MIN {
        shift += a.ln();
        a += 1.0;
    }
    let inv = a.inv();
    let inv2 = inv * inv;
    let mut s = (a - 0.5) * a.ln() - a + 0.5 * (2.0 * PI).ln();
    let mut p = inv;
    for n in 1..=LNGAMMA_TERMS {
        s += p * (bernoulli(2 * n) / ((2 * n) * (2 * n - 1)) as f64);
        p *= inv2;
    }
    s - shift
}

/// ln |Gamma(1/2 + i tau)|^2 = ln pi - ln cosh(pi tau), overflow-free.
fn log_abs_gamma_half_sq(tau: f64) -> f64 {
    let t = PI * tau;
    PI.ln() - (t + (-2.0 * t).exp().ln_1p() - LN_2)
}

/// ln |Gamma(m + 1/2 + i tau)|^2 for any integer `m`.
pub fn log_abs_gamma_sq(m: i64, tau: f64) -> f64 {
    let t2 = tau * tau;
    let mut v = log_abs_gamma_half_sq(tau);
    if m >= 0 {
        for j in 0..m {
            let a = j as f64 + 0.5;
            v += (a * a + t2).ln();
        }
    } else {
        for j in m..0 {
            let a = j as f64 + 0.5;
            v -= (a * a + t2).ln();
        }
    }
    v
}

/// ln Gamma(w + a) - ln Gamma(w + b) for |w| large.
fn ln_gamma_diff_asymptotic(w: Complex64, a: f64, b: f64) -> Complex64 {
    const TERMS: usize = 20;
    let inv = w.inv();
    let mut s = (a - b) * w.ln();
    let mut p = inv;
    let mut prev = f64::INFINITY;
    for n in 1..=TERMS {
        let c = bern_poly_real(n + 1, a) - bern_poly_real(n + 1, b);
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = p * (sign * c / (n * (n + 1)) as f64);
        p *= inv;
        if c == 0.0 {
            continue;
        }
        let size = term.norm();
        if size > prev {
            break;
        }
        s += term;
        prev = size;
        if size < 1e-18 * s.norm() {
            break;
        }
    }
    s
}

/// B_n(a) for a in {1/2, 1}.
fn bern_poly_real(n: usize, a: f64) -> f64 {
    if a == 1.0 {
        bernoulli_poly_one(n)
    } else {
        debug_assert_eq!(a, 0.5);
        bernoulli_poly_half(n, 0)
    }
}

/// Reduces an angle into (-pi, pi].
pub(crate) fn reduce_angle(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = a - two_pi * (a / two_pi).round();
    if r <= -PI {
        r += two_pi;
    } else if r > PI {
        r -= two_pi;
    }
    r
}

/// Unreduced phase of G(mu, tau); large multiples of 2 pi are harmless to callers
/// that only take cosines, but the public entry point reduces it.
pub(crate) fn gamma_ratio_phase(mu: u32, tau: f64) -> f64 {
    if tau == 0.0 {
        return 0.0;
    }
    // arg Gamma(1/2 + i tau) - arg Gamma(1 + i tau) via a common shift
    const SHIFT: u32 = 12;
    let mut phase = 0.0;
    for j in 0..SHIFT {
        phase -= tau.atan2(j as f64 + 0.5) - tau.atan2(j as f64 + 1.0);
    }
    let w = Complex64::new(SHIFT as f64, tau);
    phase += ln_gamma_diff_asymptotic(w, 0.5, 1.0).im;
    for j in 0..mu {
        phase += tau.atan2(j as f64 + 0.5);
    }
    phase
}

/// Modulus and phase of G(mu, tau) = Gamma(1/2 + mu + i tau) / Gamma(1 + i tau).
pub fn gamma_ratio_polar(mu: u32, tau: f64) -> GammaRatioPolar {
    // |G(0, tau)|^2 = tanh(pi tau) / tau
    let h0_sq = if tau == 0.0 { PI } else { (PI * tau).tanh() / tau };
    let mut h = h0_sq.sqrt();
    let mut log_h = 0.5 * h0_sq.ln();
    let t2 = tau * tau;
    for j in 0..mu {
        let a = j as f64 + 0.5;
        let f = (a * a + t2).sqrt();
        h *= f;
        log_h += f.ln();
    }
    GammaRatioPolar {
        h,
        log_h,
        rho: reduce_angle(gamma_ratio_phase(mu, tau)),
    }
}

/// u_k, v_k, w_k with 1/(1 + i tau)_k = (u_k + i v_k) / w_k, plus the polar
/// pieces r_k and sigma_k.
///
/// Values are stored as mantissas against a per-index exponent `e_k`:
/// `u_k = u[k] 2^e_k`, `v_k = v[k] 2^e_k`, `r_k = r[k] 2^e_k` and
/// `w_k = w[k] 2^(2 e_k)`, so the norm identity holds on the stored values.
#[derive(Debug, Clone, PartialEq)]
pub struct PochhammerPolarSeq {
    pub tau: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub r: Vec<f64>,
    /// Unwrapped arguments of u_k + i v_k.
    pub sigma: Vec<f64>,
    pub exp: Vec<i64>,
}

impl PochhammerPolarSeq {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// r_k / w_k = 1 / sqrt(w_k) as an unscaled value (may underflow to zero).
    pub fn r_over_w(&self, k: usize) -> f64 {
        crate::scaled::ldexp(self.r[k] / self.w[k], -self.exp[k])
    }

    /// ln w_k.
    pub fn ln_w(&self, k: usize) -> f64 {
        self.w[k].ln() + 2.0 * self.exp[k] as f64 * LN_2
    }
}

/// Runs the u/v/w recurrences up to index `k_max` inclusive.
pub fn pochhammer_inverse_seq(tau: f64, k_max: usize) -> Result<PochhammerPolarSeq> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::OutOfRange);
    }
    let n = k_max + 1;
    let mut seq = PochhammerPolarSeq {
        tau,
        u: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        w: Vec::with_capacity(n),
        r: Vec::with_capacity(n),
        sigma: Vec::with_capacity(n),
        exp: Vec::with_capacity(n),
    };
    let t2 = Dd::from(tau).mul(Dd::from(tau));
    let (mut u, mut v, mut w) = (Dd::from(1.0), Dd::from(0.0), Dd::from(1.0));
    let mut e: i64 = 0;
    let mut sigma = 0.0;
    for k in 0..n {
        if k > 0 {
            let kf = k as f64;
            let un = u.mul_f64(kf).add(v.mul_f64(tau));
            let vn = v.mul_f64(kf).add(u.mul_f64(-tau));
            u = un;
            v = vn;
            w = w.mul(Dd::from(kf * kf).add(t2));
            sigma -= tau.atan2(kf);
            let (_, be) = frexp(u.0.abs().max(v.0.abs()));
            if be.abs() > 64 {
                u = u.scale2(-be as i32);
                v = v.scale2(-be as i32);
                w = w.scale2(-2 * be as i32);
                e += be;
            }
        }
        if !w.0.is_finite() || e > (i64::MAX >> 2) {
            return Err(Error::OverUnderflow);
        }
        let wf = w.0 + w.1;
        seq.u.push(u.0 + u.1);
        seq.v.push(v.0 + v.1);
        seq.w.push(wf);
        seq.r.push(wf.sqrt());
        seq.sigma.push(sigma);
        seq.exp.push(e);
    }
    Ok(seq)
}

/// Euler's constant.
pub(crate) const fn euler_gamma() -> f64 {
    EULER_GAMMA
}
