//! P^m_{-1/2+i tau}(x) on x > -1 and the combined evaluation of P, R and
//! their derivatives.

use crate::conical_r::{conicr_pair, delta, derivative, to_f64_checked, LargeXState, RPair};
use crate::ode::march;
use crate::scaled::Scaled;
use crate::{Error, EvalPoint, EvalResult, EvalStatus, FunctionKind, NumericConfig, Region, Result};

const EPS: f64 = f64::EPSILON;
/// Upper end of the series window on x > 1.
pub const X_SERIES_MAX: f64 = 2.5;
/// Largest tau sqrt(|1 - x|/2) for the series on x > 1, where its terms cancel.
const SERIES_TAU_MAX_RIGHT: f64 = 1.5;
/// Same bound on -1 < x < 1, where the terms do not cancel and only cost matters.
const SERIES_TAU_MAX_LEFT: f64 = 20.0;
/// Largest (1 - x)/2 for the series on -1 < x < 1.
const SERIES_Z_MAX_LEFT: f64 = 0.6;
/// Accepted error estimate for a direct series or large-x value of P.
const DIRECT_EST_MAX: f64 = 1e-13;

/// Variables of the hypergeometric representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PSeriesVars {
    /// (1 - x) / 2.
    pub z_arg: f64,
    /// |1 - x| / |1 + x|.
    pub w_pow: f64,
    /// prod_{j<m} ((j+1/2)^2 + tau^2) / m!.
    pub connection_factor: Scaled,
}

impl PSeriesVars {
    pub fn new(x: f64, m: u32, tau: f64) -> Self {
        let d = 1.0 - x;
        let t2 = tau * tau;
        let mut c = Scaled::ONE;
        for j in 0..m {
            let a = j as f64 + 0.5;
            c = c.mul_f64((a * a + t2) / (j as f64 + 1.0));
        }
        Self {
            z_arg: 0.5 * d,
            w_pow: (d / (1.0 + x)).abs(),
            connection_factor: c,
        }
    }
}

/// Value, derivative and error estimate of P^m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValue {
    pub pm: Scaled,
    pub pmd: Scaled,
    pub region: Region,
    pub est_rel_err: f64,
}

/// Hypergeometric series for P^m and its derivative, in scaled form.
pub fn p_series_scaled(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<PValue> {
    if !(x > -1.0 && x < 3.0) || x == 1.0 {
        return Err(Error::OutOfRange);
    }
    let v = PSeriesVars::new(x, m, tau);
    let z = v.z_arg;
    let t2 = tau * tau;
    let mf = m as f64;
    let (mut f, mut df) = (1.0f64, 0.0f64);
    let (mut fa, mut dfa) = (1.0f64, 0.0f64);
    let mut t = 1.0f64;
    let mut small = 0;
    let mut converged = false;
    for k in 0..cfg.series_max_terms {
        let kf = k as f64;
        let r = ((kf + 0.5) * (kf + 0.5) + t2) / ((kf + 1.0) * (kf + 1.0 + mf));
        let dt = t * r * (kf + 1.0);
        t *= r * z;
        f += t;
        df += dt;
        fa += t.abs();
        dfa += dt.abs();
        if t.abs() <= 0.25 * EPS * f.abs() && dt.abs() <= 0.25 * EPS * df.abs() {
            small += 1;
            if small >= 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
    }
    if !converged || !f.is_finite() {
        return Err(Error::OverUnderflow);
    }
    let pref = v.connection_factor * Scaled::from(v.w_pow.sqrt()).powi(m);
    let pm = pref.mul_f64(f);
    let x2m1 = (x - 1.0) * (x + 1.0);
    let pmd = pm.mul_f64(mf / x2m1).sub(pref.mul_f64(0.5 * df));
    let est = EPS * (fa / f.abs()).max(if df == 0.0 { 1.0 } else { dfa / df.abs() });
    Ok(PValue {
        pm,
        pmd,
        region: Region::SeriesNear1,
        est_rel_err: est.max(EPS),
    })
}

/// P^m by the hypergeometric series, with an error estimate.
pub fn p_series(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<(f64, f64)> {
    let v = p_series_scaled(x, m, tau, cfg)?;
    if v.est_rel_err > 1e-2 {
        return Err(Error::OverUnderflow);
    }
    Ok((to_f64_checked(v.pm, cfg)?, v.est_rel_err))
}

/// prod_{j<|m|} ((j+1/2)^2 + tau^2) raised to -sign(m), the factor taking
/// P^m to P^{-m} on (-1, 1).
///
/// Equal to pi / (cosh(pi tau) |Gamma(m+1/2+i tau)|^2): the cosh carried by
/// |Gamma(1/2+i tau)|^2 cancels exactly, so no hyperbolic function is formed.
pub fn negative_order_factor(m: i32, tau: f64) -> Scaled {
    let t2 = tau * tau;
    let mut p = Scaled::ONE;
    for j in 0..m.unsigned_abs() {
        let a = j as f64 + 0.5;
        p = p.mul_f64(a * a + t2);
    }
    if m >= 0 {
        p.recip()
    } else {
        p
    }
}

/// P^{-m} from P^m.
pub fn p_negative_order(pm: f64, m: i32, tau: f64) -> Result<f64> {
    let v = negative_order_factor(m, tau).mul_f64(pm);
    to_f64_checked(v, &NumericConfig::default())
}

/// Anchor of the march on x > 1, inside the well-conditioned series window.
pub(crate) fn right_anchor(tau: f64) -> f64 {
    let q = SERIES_TAU_MAX_RIGHT / tau;
    1.0 + 2.0 * (q * q).min(0.25)
}

/// Anchor of the march on -1 < x < 1.
pub(crate) fn left_anchor(tau: f64) -> f64 {
    let q = SERIES_TAU_MAX_LEFT / tau;
    1.0 - 2.0 * (q * q).min(SERIES_Z_MAX_LEFT)
}

/// P^m and P^m' by marching from a series anchor at fixed order.
pub(crate) fn p_march_scaled(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<PValue> {
    let x0 = if x > 1.0 { right_anchor(tau) } else { left_anchor(tau) };
    let seed = p_series_scaled(x0, m, tau, cfg)?;
    let st = march(x0, seed.pm, seed.pmd, x, m, tau)?;
    Ok(PValue {
        pm: st.value,
        pmd: st.deriv,
        region: Region::OdeMarch,
        est_rel_err: st.est_rel_err + seed.est_rel_err,
    })
}

/// P^m and P^m' on x > 1 by the ODE march.
pub fn p_ode_march(x_target: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<(f64, f64)> {
    if !(x_target > 1.0 && x_target.is_finite()) {
        return Err(Error::OutOfRange);
    }
    let v = p_march_scaled(x_target, m, tau, cfg)?;
    Ok((to_f64_checked(v.pm, cfg)?, to_f64_checked(v.pmd, cfg)?))
}

/// P^m and P^m' from the large-x expansion, if it is well conditioned.
fn p_large_x(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<Option<PValue>> {
    // the expansion carries coth(pi tau) sin(...), finite as tau -> 0
    let tau = tau.max(1e-10);
    let a = LargeXState::new(x, tau, m, cfg)?;
    let (pm, ea) = a.p_value(tau);
    if !(ea <= DIRECT_EST_MAX) {
        return Ok(None);
    }
    let b = LargeXState::new(x, tau, m + 1, cfg)?;
    let (pm1, eb) = b.p_value(tau);
    if !(eb <= DIRECT_EST_MAX) {
        return Ok(None);
    }
    Ok(Some(PValue {
        pm,
        pmd: derivative(pm, pm1, x, m),
        region: Region::LargeX,
        est_rel_err: ea.max(eb),
    }))
}

/// P^m and its derivative in scaled form on x > -1, x != 1.
pub fn conicp_pair(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<PValue> {
    if !(x > -1.0 && x.is_finite()) || !(tau >= 0.0 && tau.is_finite()) || x == 1.0 {
        return Err(Error::OutOfRange);
    }
    let zt = tau * (0.5 * delta(x).abs()).sqrt();
    if x < 1.0 {
        if 0.5 * (1.0 - x) <= SERIES_Z_MAX_LEFT && zt <= SERIES_TAU_MAX_LEFT {
            if let Ok(v) = p_series_scaled(x, m, tau, cfg) {
                return Ok(v);
            }
        }
        return p_march_scaled(x, m, tau, cfg);
    }
    if x <= X_SERIES_MAX && zt <= SERIES_TAU_MAX_RIGHT {
        if let Ok(v) = p_series_scaled(x, m, tau, cfg) {
            if v.est_rel_err <= DIRECT_EST_MAX {
                return Ok(v);
            }
        }
    }
    if x >= cfg.x_largex_min && m as i64 <= cfg.largex_direct_max_order as i64 {
        if let Ok(Some(v)) = p_large_x(x, m, tau, cfg) {
            return Ok(v);
        }
    }
    p_march_scaled(x, m, tau, cfg)
}

/// P^m_{-1/2+i tau}(x) with the default configuration.
pub fn conicp(x: f64, m: i32, tau: f64) -> EvalResult {
    conicp_with(x, m, tau, &NumericConfig::default())
}

/// P^m_{-1/2+i tau}(x).
pub fn conicp_with(x: f64, m: i32, tau: f64, cfg: &NumericConfig) -> EvalResult {
    if crate::validate(EvalPoint::new(x, m, tau), FunctionKind::P) != EvalStatus::Ok {
        return EvalResult::failed(EvalStatus::OutOfRange, Region::SeriesNear1);
    }
    if x == 1.0 {
        return EvalResult {
            value: if m == 0 { 1.0 } else { 0.0 },
            est_rel_err: 0.0,
            status: EvalStatus::Ok,
            region: Region::SeriesNear1,
        };
    }
    match conicp_pair(x, m as u32, tau, cfg) {
        Ok(v) => match to_f64_checked(v.pm, cfg) {
            Ok(value) => EvalResult {
                value,
                est_rel_err: v.est_rel_err,
                status: EvalStatus::Ok,
                region: v.region,
            },
            Err(_) => EvalResult::failed(EvalStatus::OverUnderflow, v.region),
        },
        Err(Error::OutOfRange) => EvalResult::failed(EvalStatus::OutOfRange, Region::SeriesNear1),
        Err(Error::OverUnderflow) => EvalResult::failed(EvalStatus::OverUnderflow, Region::SeriesNear1),
    }
}

/// P^m, P^m', R^m, R^m' in scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledQuad {
    pub pm: Scaled,
    pub pmd: Scaled,
    pub rm: Scaled,
    pub rmd: Scaled,
    /// Region of the P evaluation.
    pub p_region: Region,
    /// Region of the R evaluation.
    pub r_region: Region,
    pub est_rel_err: f64,
}

/// Both functions and both derivatives without range reduction to binary64.
pub fn conicpr_scaled(x: f64, m: u32, tau: f64, cfg: &NumericConfig) -> Result<ScaledQuad> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::OutOfRange);
    }
    let p = conicp_pair(x, m, tau, cfg)?;
    let RPair {
        rm,
        rm1,
        region,
        est_rel_err,
    } = conicr_pair(x, m, tau, cfg)?;
    Ok(ScaledQuad {
        pm: p.pm,
        pmd: p.pmd,
        rm,
        rmd: derivative(rm, rm1, x, m),
        p_region: p.region,
        r_region: region,
        est_rel_err: p.est_rel_err.max(est_rel_err),
    })
}

/// Result of [`conicpr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicPR {
    pub pm: f64,
    pub pmd: f64,
    pub rm: f64,
    pub rmd: f64,
    pub status: EvalStatus,
    pub region: Region,
}

/// P^m, dP^m/dx, R^m, dR^m/dx with the default configuration.
pub fn conicpr(x: f64, m: i32, tau: f64) -> ConicPR {
    conicpr_with(x, m, tau, &NumericConfig::default())
}

/// P^m, dP^m/dx, R^m, dR^m/dx; any failure is reported as status 1.
pub fn conicpr_with(x: f64, m: i32, tau: f64, cfg: &NumericConfig) -> ConicPR {
    let failed = ConicPR {
        pm: f64::NAN,
        pmd: f64::NAN,
        rm: f64::NAN,
        rmd: f64::NAN,
        status: EvalStatus::OverUnderflow,
        region: Region::SeriesNear1,
    };
    if crate::validate(EvalPoint::new(x, m, tau), FunctionKind::PR) != EvalStatus::Ok {
        return failed;
    }
    let Ok(q) = conicpr_scaled(x, m as u32, tau, cfg) else {
        return failed;
    };
    let conv = |v| to_f64_checked(v, cfg);
    match (conv(q.pm), conv(q.pmd), conv(q.rm), conv(q.rmd)) {
        (Ok(pm), Ok(pmd), Ok(rm), Ok(rmd)) => ConicPR {
            pm,
            pmd,
            rm,
            rmd,
            status: EvalStatus::Ok,
            region: q.r_region,
        },
        _ => ConicPR {
            region: q.r_region,
            ..failed
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_one() {
        assert_eq!(conicp(1.0, 0, 7.0).value, 1.0);
        assert_eq!(conicp(1.0, 3, 7.0).value, 0.0);
        assert_eq!(conicp(-2.0, 0, 7.0).status, EvalStatus::OutOfRange);
    }

    #[test]
    fn series_limits_near_one() {
        let cfg = NumericConfig::default();
        let (p0, _) = p_series(1.0 + 1e-12, 0, 3.0, &cfg).unwrap();
        assert!((p0 - 1.0).abs() < 1e-10);
        let (p2, _) = p_series(1.0 + 1e-8, 2, 3.0, &cfg).unwrap();
        assert!(p2.abs() < 1e-6);
    }

    #[test]
    fn negative_order_factor_cases() {
        assert_eq!(negative_order_factor(0, 12.5).to_f64(), Some(1.0));
        assert_eq!(negative_order_factor(1, 0.0).to_f64(), Some(4.0));
        for (m, tau) in [(3, 2.0), (7, 40.0)] {
            let back = negative_order_factor(m, tau) * negative_order_factor(-m, tau);
            assert!((back.to_f64().unwrap() - 1.0).abs() <= 2.0 * EPS);
        }
    }

    #[test]
    fn conicpr_collapses_errors() {
        assert_eq!(conicpr(0.5, 0, 1.0).status, EvalStatus::OverUnderflow);
    }
}
