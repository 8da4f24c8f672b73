//! R^m_{-1/2+i tau}(x) on x > 1: the log-series near x = 1, the Kummer/Hankel
//! expansion for large tau, the large-x phase expansion and the forward
//! recurrence in m, tied together by [`conicr`].

use std::f64::consts::{FRAC_PI_2, PI};

use crate::besseljy::bessel_jy_orders;
use crate::dd::acosh_dd;
use crate::gammakit::{
    bernoulli_poly_half, bernoulli_poly_one, digamma_half, euler_gamma, gamma_ratio_polar, pochhammer_inverse_seq,
    GammaRatioPolar, PochhammerPolarSeq,
};
use crate::scaled::Scaled;
use crate::{Error, EvalResult, EvalStatus, NumericConfig, Region, Result};

const EPS: f64 = f64::EPSILON;
/// Largest condition number Σ|t_k| / |Σ t_k e^{-i psi_k}| accepted for a direct
/// large-x evaluation at high order.
const LARGEX_DIRECT_COND: f64 = 32.0;

/// x - 1, computed exactly for x in [0.5, 2] and accurately elsewhere.
pub(crate) fn delta(x: f64) -> f64 {
    x - 1.0
}

/// sqrt(x^2 - 1) without cancellation near 1 or overflow for huge x.
pub fn sqrt_x2m1(x: f64) -> f64 {
    let d = delta(x);
    d.sqrt() * (2.0 + d).sqrt()
}

/// arccosh x = ln(x + sqrt(x^2 - 1)).
pub(crate) fn acosh1p(x: f64) -> f64 {
    let d = delta(x);
    (d + sqrt_x2m1(x)).ln_1p()
}

/// z of the Kummer and large-x expansions, 1 / (2 s (x + s)).
pub(crate) fn z_map(x: f64) -> f64 {
    let s = sqrt_x2m1(x);
    0.5 / s / (x + s)
}

/// Variables of the near-one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearOneVars {
    /// (1 - x) / 2, negative for x > 1.
    pub z: f64,
    /// sqrt((x - 1) / (x + 1)).
    pub w: f64,
    /// ln w.
    pub ln_w: f64,
    /// sqrt(x^2 - 1).
    pub s: f64,
}

impl NearOneVars {
    pub fn new(x: f64) -> Self {
        let d = delta(x);
        let q = d / (2.0 + d);
        Self {
            z: -0.5 * d,
            w: q.sqrt(),
            ln_w: 0.5 * q.ln(),
            s: sqrt_x2m1(x),
        }
    }
}

/// R^0 and R^1 from the near-one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R01 {
    pub r0: f64,
    pub r1: f64,
    pub est_err: f64,
}

/// Sums the logarithmic series for R^0 and R^1.
pub fn r01_series(x: f64, tau: f64, cfg: &NumericConfig) -> Result<R01> {
    if !(x > 1.0 && x.is_finite()) || !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::OutOfRange);
    }
    let v = NearOneVars::new(x);
    let base = -euler_gamma() - digamma_half(tau).re - v.ln_w;
    let t2 = tau * tau;
    let (z, s) = (v.z, v.s);

    let mut c = 1.0f64;
    let mut harmonic = 0.0;
    let mut r0 = base;
    let mut abs0 = base.abs();
    let mut s0 = 1.0f64;
    let mut s1 = 0.0f64;
    let mut abs1 = 1.0 / s;
    let mut small = 0;
    let mut converged = false;
    let mut last = (0.0f64, 0.0f64);
    for k in 1..=cfg.series_max_terms {
        let kf = k as f64;
        let a = (kf - 0.5) * (kf - 0.5) + t2;
        let g = c * a / kf;
        harmonic += 1.0 / kf;
        let l = harmonic + base;
        c = g * z / kf;
        let term0 = c * l;
        let term1 = c / s + 0.5 * s * g * l;
        r0 += term0;
        s0 += c;
        s1 += g * l;
        abs0 += term0.abs();
        abs1 += term1.abs();
        last = (term0, term1);
        let r1_now = s0 / s + 0.5 * s * s1;
        if term0.abs() <= 0.25 * EPS * r0.abs() && term1.abs() <= 0.25 * EPS * r1_now.abs() {
            small += 1;
            if small >= 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
    }
    let r1 = s0 / s + 0.5 * s * s1;
    let cancel = EPS * (abs0 / r0.abs()).max(abs1 / r1.abs());
    let trunc = if converged {
        0.0
    } else {
        (last.0 / r0).abs().max((last.1 / r1).abs())
    };
    let est_err = cancel.max(trunc).max(EPS);
    if !(est_err <= 1e-2) {
        return Err(Error::OverUnderflow);
    }
    Ok(R01 { r0, r1, est_err })
}

/// How many Kummer terms to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerTerms {
    /// Exactly k = 0..=N.
    Fixed(usize),
    /// Until the terms stall or start to grow, at most k = 0..=N.
    Adaptive(usize),
}

/// Coefficients f_0..=f_n of the Kummer expansion of order mu at (z, alpha).
///
/// Obtained by matching powers of 1/omega: the expansion of
/// Gamma(1/2 + mu + omega) / Gamma(1 + omega) omega^{1/2 - mu} times the
/// hypergeometric factor, divided through the leading behaviour of U.
pub fn kummer_coefficients(mu: u32, z: f64, alpha: f64, n: usize) -> Vec<f64> {
    let a = mu as f64 + 0.5;
    let b = 1.0 - a;
    // ln of the gamma-ratio factor as a series in 1/omega
    let mut d = vec![0.0; n + 1];
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        *dk = sign * (bernoulli_poly_half(k + 1, mu) - bernoulli_poly_one(k + 1)) / (k * (k + 1)) as f64;
    }
    let mut g = vec![0.0; n + 1];
    g[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += j as f64 * d[j] * g[k - j];
        }
        g[k] = acc / k as f64;
    }
    // hypergeometric factor, each term times prod_i (1 + i/omega)^{-1}
    let mut f_hyp = vec![0.0; n + 1];
    let mut amp = 1.0;
    let mut shift = vec![0.0; n + 1];
    shift[0] = 1.0;
    for j in 0..=n {
        if j > 0 {
            let jf = j as f64;
            amp *= (a + jf - 1.0) * (b + jf - 1.0) * (-z) / jf;
            for l in 1..=n - j {
                shift[l] -= jf * shift[l - 1];
            }
        }
        for l in 0..=n - j {
            f_hyp[j + l] += amp * shift[l];
        }
    }
    let mut f = Vec::with_capacity(n + 1);
    let inv_alpha = -1.0 / alpha;
    let mut b_rise = 1.0;
    for k in 0..=n {
        if k > 0 {
            b_rise *= b + (k - 1) as f64;
        }
        let mut t = 0.0;
        for j in 0..=k {
            t += g[j] * f_hyp[k - j];
        }
        let mut v = t / b_rise;
        // (a)_{k-j} (-1/alpha)^{k-j} / (k-j)!
        let mut c = 1.0;
        for i in 1..=k {
            let j = k - i;
            c *= (a + (i - 1) as f64) * inv_alpha / i as f64;
            v -= f[j] * c;
        }
        f.push(v);
    }
    f
}

/// Precomputed pieces of the Kummer expansion at one (x, tau, mu).
#[derive(Debug, Clone, PartialEq)]
pub struct KummerState {
    pub z: f64,
    pub alpha: f64,
    pub phi: f64,
    /// tau; omega = i tau.
    pub omega: f64,
    pub mu: u32,
    /// -mu - 1/2.
    pub b: f64,
    /// z alpha.
    pub d: f64,
    /// Phi_k with the phase e^{i phi} removed and the factor (tau/alpha)^mu left out.
    pub phi_re: Vec<f64>,
    pub phi_im: Vec<f64>,
    pub f: Vec<f64>,
    pub n: usize,
    /// sqrt(pi/2) tau^mu sqrt(alpha) (x^2 - 1)^{-1/4}.
    prefactor: f64,
}

impl KummerState {
    pub fn new(x: f64, tau: f64, mu: u32, n: usize) -> Result<Self> {
        if !(x > 1.0 && x.is_finite()) || !(tau > 0.0 && tau.is_finite()) || n < 1 {
            return Err(Error::OutOfRange);
        }
        let s = sqrt_x2m1(x);
        let xi = acosh1p(x);
        let alpha = 2.0 * xi;
        let phi = tau * xi;
        let z = z_map(x);
        let order = mu.max(1) as usize;
        let (j, y) = bessel_jy_orders(phi, order)?;
        let mu_i = mu as usize;
        let (jm, ym) = (j[mu_i], y[mu_i]);
        let (jm1, ym1) = if mu == 0 {
            (-j[1], -y[1])
        } else {
            (j[mu_i - 1], y[mu_i - 1])
        };
        let k = PI.sqrt();
        let mut phi_re = Vec::with_capacity(n + 1);
        let mut phi_im = Vec::with_capacity(n + 1);
        phi_re.push(-0.5 * k * ym);
        phi_im.push(-0.5 * k * jm);
        phi_re.push(0.25 * alpha * k * (ym + jm1));
        phi_im.push(0.25 * alpha * k * (jm - ym1));
        let muf = mu as f64;
        for i in 1..n {
            let nf = i as f64;
            let c1 = (nf - 2.0 * muf) / tau;
            let c2 = alpha / tau * (nf - 0.5 - muf);
            let re = c1 * phi_im[i] - alpha * phi_re[i] + c2 * phi_im[i - 1];
            let im = -c1 * phi_re[i] - alpha * phi_im[i] - c2 * phi_re[i - 1];
            phi_re.push(re);
            phi_im.push(im);
        }
        let f = kummer_coefficients(mu, z, alpha, n);
        let prefactor = (0.5 * PI).sqrt() * tau.powi(mu as i32) * alpha.sqrt() / s.sqrt();
        Ok(Self {
            z,
            alpha,
            phi,
            omega: tau,
            mu,
            b: -muf - 0.5,
            d: z * alpha,
            phi_re,
            phi_im,
            f,
            n,
            prefactor,
        })
    }

    /// Sums the expansion; returns the value and an estimate of the truncation error.
    pub fn sum(&self, terms: KummerTerms) -> (f64, f64) {
        let (n_max, adaptive) = match terms {
            KummerTerms::Fixed(n) => (n.min(self.n), false),
            KummerTerms::Adaptive(n) => (n.min(self.n), true),
        };
        let (mut re, mut im) = (0.0f64, 0.0f64);
        let mut last = f64::INFINITY;
        let mut err = 0.0;
        for k in 0..=n_max {
            let tr = self.f[k] * self.phi_re[k];
            let ti = self.f[k] * self.phi_im[k];
            let mag = tr.hypot(ti);
            if adaptive && k >= 2 && mag > last {
                err = last;
                break;
            }
            re += tr;
            im += ti;
            err = mag;
            last = mag;
            if adaptive && k >= 2 && mag <= 0.25 * EPS * re.hypot(im) {
                break;
            }
        }
        let modulus = re.hypot(im);
        (self.prefactor * re, (err / modulus).max(EPS))
    }
}

/// Kummer expansion of R^mu for any order that keeps the prefactor finite.
pub fn kummer_expansion(x: f64, tau: f64, mu: u32, terms: KummerTerms) -> Result<(f64, f64)> {
    let n = match terms {
        KummerTerms::Fixed(n) | KummerTerms::Adaptive(n) => n.max(1),
    };
    let st = KummerState::new(x, tau, mu, n)?;
    let (v, e) = st.sum(terms);
    if !v.is_finite() {
        return Err(Error::OverUnderflow);
    }
    Ok((v, e))
}

/// R^0 or R^1 from the Kummer expansion, truncated adaptively.
pub fn r01_kummer(x: f64, tau: f64, mu: u32, cfg: &NumericConfig) -> Result<f64> {
    if mu > 1 {
        return Err(Error::OutOfRange);
    }
    kummer_expansion(x, tau, mu, KummerTerms::Adaptive(cfg.kummer_max_terms)).map(|(v, _)| v)
}

/// Coefficient of R^{m-1} in the m-recurrence.
fn rec_b(m: u32, tau: f64) -> f64 {
    let a = m as f64 - 0.5;
    a * a + tau * tau
}

/// Forward recurrence in m on scaled values; returns (F^{m_to}, F^{m_to + 1})
/// from (F^{m_from - 1}, F^{m_from}).
pub(crate) fn raise_order_scaled(
    prev: Scaled,
    curr: Scaled,
    m_from: u32,
    m_to: u32,
    x: f64,
    tau: f64,
) -> (Scaled, Scaled) {
    let s = sqrt_x2m1(x);
    let q = 2.0 * x / s;
    let mut e = prev.exponent().max(curr.exponent());
    let mut a = crate::scaled::ldexp(prev.mantissa(), prev.exponent() - e);
    let mut b = crate::scaled::ldexp(curr.mantissa(), curr.exponent() - e);
    for m in m_from..=m_to {
        let next = q * m as f64 * b - rec_b(m, tau) * a;
        a = b;
        b = next;
        let (_, be) = crate::scaled::frexp(a.abs().max(b.abs()));
        if be.abs() > 512 {
            a = crate::scaled::ldexp(a, -be);
            b = crate::scaled::ldexp(b, -be);
            e += be;
        }
    }
    (Scaled::new(a, e), Scaled::new(b, e))
}

/// Forward recurrence from `(R_{m_from-1}, R_{m_from})` up to `R_{m_to}`.
///
/// Returns `R_{m_from} ..= R_{m_to}`.
pub fn raise_order(
    r_prev: f64,
    r_curr: f64,
    m_from: u32,
    m_to: u32,
    x: f64,
    tau: f64,
    cfg: &NumericConfig,
) -> Result<Vec<f64>> {
    if m_from < 1 || m_to < m_from || !(x > 1.0) {
        return Err(Error::OutOfRange);
    }
    let mut out = vec![r_curr];
    let (mut a, mut b) = (Scaled::from(r_prev), Scaled::from(r_curr));
    for m in m_from..m_to {
        (a, b) = raise_order_scaled(a, b, m, m, x, tau);
        out.push(to_f64_checked(b, cfg)?);
    }
    Ok(out)
}

/// Converts a scaled result, enforcing the overflow limit.
pub(crate) fn to_f64_checked(v: Scaled, cfg: &NumericConfig) -> Result<f64> {
    if v.is_zero() {
        return Ok(0.0);
    }
    if !v.is_finite() || v.ln_abs().abs() > cfg.overflow_log_limit {
        return Err(Error::OverUnderflow);
    }
    v.to_f64().ok_or(Error::OverUnderflow)
}

/// Modulus of Gamma(1/2 + mu + i tau) / Gamma(1 + i tau) as a scaled product.
fn gamma_ratio_modulus(mu: u32, tau: f64) -> Scaled {
    let h0_sq = if tau == 0.0 { PI } else { (PI * tau).tanh() / tau };
    let mut h = Scaled::from(h0_sq.sqrt());
    let t2 = tau * tau;
    for j in 0..mu {
        let a = j as f64 + 0.5;
        h = h.mul_f64((a * a + t2).sqrt());
    }
    h
}

/// Precomputed large-x expansion at one (x, tau, mu).
#[derive(Debug, Clone, PartialEq)]
pub struct LargeXState {
    pub z: f64,
    /// tau acosh x reduced to [-pi, pi].
    pub phi: f64,
    pub gamma_polar: GammaRatioPolar,
    pub poch: PochhammerPolarSeq,
    /// psi_k = phi - rho - sigma_k for the summed terms.
    pub psi: Vec<f64>,
    /// (1/2+mu)_k (1/2-mu)_k (r_k/w_k) (-z)^k / k!.
    pub t: Vec<f64>,
    /// sqrt(pi/2) H (x^2 - 1)^{-1/4}.
    pub prefactor: Scaled,
    /// Σ t_k cos psi_k, Σ t_k sin psi_k and Σ |t_k|.
    pub sum_cos: f64,
    pub sum_sin: f64,
    pub sum_abs: f64,
}

impl LargeXState {
    pub fn new(x: f64, tau: f64, mu: u32, cfg: &NumericConfig) -> Result<Self> {
        if !(x > 1.0 && x.is_finite()) || !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::OutOfRange);
        }
        let s = sqrt_x2m1(x);
        let z = z_map(x);
        if !(z < 1.0) {
            return Err(Error::OutOfRange);
        }
        let phi = acosh_dd(x).mul_f64(tau).reduce_2pi();
        let gamma_polar = gamma_ratio_polar(mu, tau);
        let poch = pochhammer_inverse_seq(tau, cfg.series_max_terms)?;
        let muf = mu as f64;
        let mut t = Vec::new();
        let mut psi = Vec::new();
        let (mut sc, mut ss, mut sa) = (0.0f64, 0.0f64, 0.0f64);
        let mut tk = 1.0f64;
        let mut small = 0;
        let mut converged = false;
        for k in 0..poch.len() {
            if k > 0 {
                let kf = k as f64;
                let a = (kf - 0.5) * (kf - 0.5) - muf * muf;
                tk *= a * (-z) / (kf * (kf * kf + tau * tau).sqrt());
            }
            let p = phi - gamma_polar.rho - poch.sigma[k];
            sc += tk * p.cos();
            ss += tk * p.sin();
            sa += tk.abs();
            t.push(tk);
            psi.push(p);
            if tk.abs() <= 0.25 * EPS * sc.hypot(ss) {
                small += 1;
                if small >= 3 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
            if !tk.is_finite() {
                break;
            }
        }
        if !converged {
            return Err(Error::OverUnderflow);
        }
        let prefactor = gamma_ratio_modulus(mu, tau).mul_f64((0.5 * PI).sqrt() / s.sqrt());
        Ok(Self {
            z,
            phi,
            gamma_polar,
            poch,
            psi,
            t,
            prefactor,
            sum_cos: sc,
            sum_sin: ss,
            sum_abs: sa,
        })
    }

    /// Σ|t_k| over the modulus of the complex sum.
    pub fn condition(&self) -> f64 {
        self.sum_abs / self.sum_cos.hypot(self.sum_sin)
    }

    /// Absolute phase error scale of the psi_k.
    fn phase_scale(&self) -> f64 {
        let last = self.psi.last().copied().unwrap_or(0.0);
        4.0 + self.phi.abs() + self.gamma_polar.rho.abs() + (self.phi - last).abs()
    }

    /// R^mu and its relative error estimate.
    pub fn r_value(&self) -> (Scaled, f64) {
        let v = self.prefactor.mul_f64(self.sum_cos);
        let err = EPS * self.sum_abs * self.phase_scale() / self.sum_cos.abs();
        (v, err.max(EPS))
    }

    /// P^mu from the same sum, for tau > 0.
    pub fn p_value(&self, tau: f64) -> (Scaled, f64) {
        let coth = 1.0 / (PI * tau).tanh();
        let v = self.prefactor.mul_f64(self.sum_sin * coth / FRAC_PI_2);
        let err = EPS * self.sum_abs * self.phase_scale() / self.sum_sin.abs();
        (v, err.max(EPS))
    }
}

/// R^mu from the large-x expansion.
pub fn r_large_x(x: f64, tau: f64, mu: u32, cfg: &NumericConfig) -> Result<f64> {
    if x < cfg.x_largex_min {
        return Err(Error::OutOfRange);
    }
    let st = LargeXState::new(x, tau, mu, cfg)?;
    to_f64_checked(st.r_value().0, cfg)
}

/// R^m and R^{m+1} in scaled form, with the region used and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RPair {
    pub rm: Scaled,
    pub rm1: Scaled,
    pub region: Region,
    pub est_rel_err: f64,
}

/// Whether the near-one series is used rather than the Kummer expansion.
pub(crate) fn use_near_one_series(x: f64, tau: f64, cfg: &NumericConfig) -> bool {
    tau < cfg.tau_kummer_min || tau * (0.5 * delta(x)).sqrt() <= cfg.series_cancellation_max
}

/// R^m and R^{m+1} in scaled form.
pub fn conicr_pair(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<RPair> {
    if !(x > 1.0 && x.is_finite()) || !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::OutOfRange);
    }
    if x >= cfg.x_largex_min {
        if m as i64 <= cfg.largex_direct_max_order as i64 {
            let a = LargeXState::new(x, tau, m, cfg)?;
            let b = LargeXState::new(x, tau, m + 1, cfg)?;
            if a.condition().max(b.condition()) <= LARGEX_DIRECT_COND {
                let (rm, ea) = a.r_value();
                let (rm1, eb) = b.r_value();
                return Ok(RPair {
                    rm,
                    rm1,
                    region: Region::LargeX,
                    est_rel_err: ea.max(eb),
                });
            }
        }
        let a = LargeXState::new(x, tau, 0, cfg)?;
        let b = LargeXState::new(x, tau, 1, cfg)?;
        let (r0, e0) = a.r_value();
        let (r1, e1) = b.r_value();
        let region = if m == 0 { Region::LargeX } else { Region::Recurrence };
        return Ok(climb(r0, r1, m, x, tau, region, e0.max(e1)));
    }
    let (r0, r1, region, est) = if use_near_one_series(x, tau, cfg) {
        let s = r01_series(x, tau, cfg)?;
        (s.r0, s.r1, Region::SeriesNear1, s.est_err)
    } else {
        let (r0, e0) = kummer_expansion(x, tau, 0, KummerTerms::Adaptive(cfg.kummer_max_terms))?;
        let (r1, e1) = kummer_expansion(x, tau, 1, KummerTerms::Adaptive(cfg.kummer_max_terms))?;
        (r0, r1, Region::KummerLargeTau, e0.max(e1))
    };
    Ok(climb(Scaled::from(r0), Scaled::from(r1), m, x, tau, region, est))
}

fn climb(r0: Scaled, r1: Scaled, m: u32, x: f64, tau: f64, region: Region, est: f64) -> RPair {
    let (rm, rm1) = if m == 0 {
        (r0, r1)
    } else {
        raise_order_scaled(r0, r1, 1, m, x, tau)
    };
    RPair {
        rm,
        rm1,
        region,
        est_rel_err: est * (1.0 + m as f64).sqrt(),
    }
}

/// dF^m/dx from F^m and F^{m+1}.
pub(crate) fn derivative(fm: Scaled, fm1: Scaled, x: f64, m: u32) -> Scaled {
    let s = sqrt_x2m1(x);
    let x2m1 = s * s;
    fm.mul_f64(m as f64 * x / x2m1).sub(fm1.mul_f64(1.0 / s))
}

/// R^m_{-1/2+i tau}(x) with the default configuration.
pub fn conicr(x: f64, m: i32, tau: f64) -> EvalResult {
    conicr_with(x, m, tau, &NumericConfig::default())
}

/// R^m_{-1/2+i tau}(x).
pub fn conicr_with(x: f64, m: i32, tau: f64, cfg: &NumericConfig) -> EvalResult {
    let point = crate::EvalPoint::new(x, m, tau);
    if crate::validate(point, crate::FunctionKind::R) != EvalStatus::Ok {
        return EvalResult::failed(EvalStatus::OutOfRange, Region::SeriesNear1);
    }
    match conicr_pair(x, m as u32, tau, cfg) {
        Ok(p) => match to_f64_checked(p.rm, cfg) {
            Ok(value) => EvalResult {
                value,
                est_rel_err: p.est_rel_err,
                status: EvalStatus::Ok,
                region: p.region,
            },
            Err(_) => EvalResult::failed(EvalStatus::OverUnderflow, p.region),
        },
        Err(Error::OutOfRange) => EvalResult::failed(EvalStatus::OutOfRange, Region::SeriesNear1),
        Err(Error::OverUnderflow) => EvalResult::failed(EvalStatus::OverUnderflow, Region::SeriesNear1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_one_vars_agree() {
        for x in [1.0 + 1e-12, 1.001, 1.3, 2.9] {
            let v = NearOneVars::new(x);
            let w2 = (x - 1.0) / (x + 1.0);
            let alt = -v.z / (1.0 - v.z);
            assert!((v.w * v.w / w2 - 1.0).abs() <= 4.0 * EPS);
            assert!((alt / w2 - 1.0).abs() <= 4.0 * EPS);
        }
    }

    #[test]
    fn series_leading_term_near_one() {
        let cfg = NumericConfig::default();
        for x in [1.0 + 1e-10, 1.0 + 1e-7] {
            let r = r01_series(x, 2.0, &cfg).unwrap();
            assert!((r.r1 * sqrt_x2m1(x) - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn f_coefficients_match_closed_forms() {
        for (mu, z, alpha) in [(0u32, 0.3, 1.2), (1, 2.5, 0.4), (1, 10.0, 0.09)] {
            let f = kummer_coefficients(mu, z, alpha, 4);
            let b = -(mu as f64) - 0.5;
            let d = z * alpha;
            let f1 = b / (2.0 * d) * (2.0 * d * z + d - 2.0 * z);
            let f2 = b / (24.0 * d * d)
                * (12.0 * z * z + 12.0 * b * z * z + d * d
                    - 12.0 * d * d * z
                    - 12.0 * d * d * z * z
                    - 24.0 * b * d * z * z
                    + 12.0 * b * d * d * z
                    + 12.0 * b * d * d * z * z
                    + 3.0 * b * d * d
                    - 12.0 * b * d * z);
            assert_eq!(f[0], 1.0);
            assert!((f[1] - f1).abs() <= 1e-12 * f1.abs().max(1.0), "{mu} {} {f1}", f[1]);
            assert!((f[2] - f2).abs() <= 1e-11 * f2.abs().max(1.0), "{mu} {} {f2}", f[2]);
        }
    }

    #[test]
    fn kummer_rejects_higher_orders() {
        let cfg = NumericConfig::default();
        assert_eq!(r01_kummer(1.02, 50.0, 2, &cfg), Err(Error::OutOfRange));
    }

    #[test]
    fn raise_order_one_step() {
        let cfg = NumericConfig::default();
        let (x, tau, r0, r1) = (1.7, 2.5, 0.3, -1.1);
        let out = raise_order(r0, r1, 1, 2, x, tau, &cfg).unwrap();
        let expect = 2.0 * x / sqrt_x2m1(x) * r1 - (0.25 + tau * tau) * r0;
        assert_eq!(out.len(), 2);
        assert!((out[1] - expect).abs() <= 4.0 * EPS * expect.abs());
        assert_eq!(raise_order(r0, r1, 3, 3, x, tau, &cfg).unwrap(), vec![r1]);
    }

    #[test]
    fn z_map_values() {
        let z = z_map(2f64.sqrt());
        assert!((z - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        let x = 1e6;
        assert!((z_map(x) * 4.0 * x * x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(conicr(0.999, 0, 1.0).status, EvalStatus::OutOfRange);
        assert_eq!(conicr(1.5, -1, 1.0).status, EvalStatus::OutOfRange);
    }
}
