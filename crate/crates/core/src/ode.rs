//! Taylor-series integration of the conical differential equation
//!
//! (1 - x^2) y'' - 2 x y' - (tau^2 + 1/4 + m^2 / (1 - x^2)) y = 0
//!
//! in the variable x. After multiplying by (1 - x^2) every coefficient is a
//! polynomial in x, so the Taylor coefficients about any regular point follow
//! from a short linear recursion.

use crate::scaled::{frexp, ldexp, Scaled};
use crate::{Error, Result};

/// Step length in units of the local wavelength.
const KAPPA: f64 = 1.5;
/// Step length as a fraction of the distance to the nearest singular point.
const RHO: f64 = 0.3;
const MAX_ORDER: usize = 80;
const MAX_STEPS: usize = 100_000;

/// Value and derivative at the end of a march, sharing one binary exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchState {
    pub value: Scaled,
    pub deriv: Scaled,
    pub steps: usize,
    pub est_rel_err: f64,
}

/// Local wavenumber of the equation at x.
fn wavenumber(x: f64, m: f64, lambda: f64) -> f64 {
    let q = ((1.0 - x) * (1.0 + x)).abs();
    (lambda * q + m * m).sqrt() / q
}

/// One Taylor step of length `h` from `c`; `y` and `dy` are mantissas sharing a scale.
fn step(c: f64, h: f64, y: f64, dy: f64, m2: f64, lambda: f64) -> Result<(f64, f64)> {
    let q0 = (1.0 - c) * (1.0 + c);
    let q1 = -2.0 * c;
    let a = [q0 * q0, 2.0 * q0 * q1, q1 * q1 - 2.0 * q0, -2.0 * q1, 1.0];
    let b = [-2.0 * c * q0, -2.0 * (q0 + c * q1), -2.0 * (q1 - c), 2.0];
    let cc = [-(lambda * q0 + m2), -lambda * q1, lambda];
    let mut hp = [1.0; 7];
    for k in 1..7 {
        hp[k] = hp[k - 1] * h;
    }
    let at: [f64; 5] = std::array::from_fn(|j| a[j] * hp[j]);
    let bt: [f64; 4] = std::array::from_fn(|j| b[j] * hp[j + 1]);
    let ct: [f64; 3] = std::array::from_fn(|j| cc[j] * hp[j + 2]);
    let mut coef = [0.0f64; MAX_ORDER + 3];
    coef[0] = y;
    coef[1] = dy * h;
    let mut sum = coef[0] + coef[1];
    let mut dsum = coef[1];
    let scale = y.abs().max(coef[1].abs());
    let mut small = 0;
    for n in 0..MAX_ORDER {
        let mut acc = 0.0;
        for (j, aj) in at.iter().enumerate().skip(1) {
            if n + 2 >= j {
                let k = n + 2 - j;
                if k >= 2 {
                    acc += aj * coef[k] * (k * (k - 1)) as f64;
                }
            }
        }
        for (j, bj) in bt.iter().enumerate() {
            if n + 1 >= j {
                let k = n + 1 - j;
                acc += bj * coef[k] * k as f64;
            }
        }
        for (j, cj) in ct.iter().enumerate() {
            if n >= j {
                acc += cj * coef[n - j];
            }
        }
        let next = -acc / (at[0] * ((n + 2) * (n + 1)) as f64);
        coef[n + 2] = next;
        sum += next;
        dsum += next * (n + 2) as f64;
        if next.abs() <= 0.25 * f64::EPSILON * scale.max(sum.abs()) {
            small += 1;
            if small >= 3 {
                return Ok((sum, dsum / h));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::OverUnderflow)
}

/// Marches `(y, y')` from `x0` to `x1`; both must lie on the same side of +-1.
pub fn march(x0: f64, y0: Scaled, dy0: Scaled, x1: f64, m: u32, tau: f64) -> Result<MarchState> {
    let side = |x: f64| {
        if x > 1.0 {
            1
        } else if x > -1.0 {
            0
        } else {
            -1
        }
    };
    if side(x0) != side(x1) || x0.abs() == 1.0 || x1.abs() == 1.0 {
        return Err(Error::OutOfRange);
    }
    let m = m as f64;
    let lambda = tau * tau + 0.25;
    let m2 = m * m;
    // shared exponent for (y, y')
    let e0 = y0.exponent().max(dy0.exponent());
    let mut e = e0;
    let mut y = ldexp(y0.mantissa(), y0.exponent() - e);
    let mut dy = ldexp(dy0.mantissa(), dy0.exponent() - e);
    let mut c = x0;
    let mut steps = 0;
    let dir = if x1 > x0 { 1.0 } else { -1.0 };
    while c != x1 {
        let dist = (c - 1.0).abs().min((c + 1.0).abs());
        let mut h = (KAPPA / wavenumber(c, m, lambda)).min(RHO * dist);
        let last = h >= (x1 - c).abs();
        // step to a representable node so the state sits exactly where it is labelled
        let next = if last { x1 } else { c + dir * h };
        h = next - c;
        let (ny, ndy) = step(c, h, y, dy, m2, lambda)?;
        y = ny;
        dy = ndy;
        let (_, be) = frexp(y.abs().max(dy.abs()));
        if be.abs() > 256 {
            y = ldexp(y, -be);
            dy = ldexp(dy, -be);
            e += be;
        }
        if !y.is_finite() || !dy.is_finite() {
            return Err(Error::OverUnderflow);
        }
        c = next;
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::OverUnderflow);
        }
    }
    Ok(MarchState {
        value: Scaled::new(y, e),
        deriv: Scaled::new(dy, e),
        steps,
        est_rel_err: f64::EPSILON * (8.0 + 2.0 * (steps as f64).sqrt()),
    })
}
