//! Binary64 mantissa with a separate power-of-two exponent.
//!
//! Orders near 100 push P and R far outside the binary64 range close to
//! x = 1, so every evaluator carries its values in this form and only the
//! public wrappers convert back to `f64`.

use std::cmp::Ordering;
use std::ops::{Div, Mul, Neg};

/// `mant * 2^exp`, with `0.5 <= |mant| < 1` unless the value is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mant: f64,
    exp: i64,
}

/// Splits a finite nonzero `f64` into `(m, e)` with `0.5 <= |m| < 1`.
pub(crate) fn frexp(v: f64) -> (f64, i64) {
    if v == 0.0 || !v.is_finite() {
        return (v, 0);
    }
    let bits = v.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal
        let (m, e) = frexp(v * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw - 1022;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, e)
}

/// `m * 2^e` for exponents that may leave the normal range of the intermediate.
pub(crate) fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: 0.0, exp: 0 };
    pub const ONE: Scaled = Scaled { mant: 0.5, exp: 1 };

    pub fn new(mant: f64, exp: i64) -> Self {
        let (m, e) = frexp(mant);
        Self { mant: m, exp: exp + e }
    }

    pub fn from_f64(v: f64) -> Self {
        Self::new(v, 0)
    }

    /// `e^ln_mag` without overflow; loses `|ln_mag| * eps` relative accuracy.
    pub fn from_ln(ln_mag: f64) -> Self {
        let k = (ln_mag / std::f64::consts::LN_2).floor();
        let r = ln_mag - k * std::f64::consts::LN_2;
        Self::new(r.exp(), k as i64)
    }

    pub fn mantissa(self) -> f64 {
        self.mant
    }

    pub fn exponent(self) -> i64 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite()
    }

    pub fn abs(self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn signum(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(self) -> f64 {
        self.mant.abs().ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    /// Converts to `f64`; `None` when the value is outside the normal binary64 range.
    pub fn to_f64(self) -> Option<f64> {
        if self.mant == 0.0 {
            return Some(0.0);
        }
        if !self.mant.is_finite() || self.exp > 1024 || self.exp < -1021 {
            return None;
        }
        Some(ldexp(self.mant, self.exp))
    }

    /// Converts to `f64`, saturating to infinity or zero.
    pub fn to_f64_lossy(self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    pub fn mul_f64(self, v: f64) -> Self {
        Self::new(self.mant * v, self.exp)
    }

    pub fn recip(self) -> Self {
        Self::new(1.0 / self.mant, -self.exp)
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Scaled::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Sum of two scaled values.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        if self.mant == 0.0 {
            return other;
        }
        if other.mant == 0.0 {
            return self;
        }
        let e = self.exp.max(other.exp);
        Self::new(ldexp(self.mant, self.exp - e) + ldexp(other.mant, other.exp - e), e)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }

    /// `self / other` as a plain `f64`, for values of comparable size.
    pub fn ratio(self, other: Self) -> f64 {
        ldexp(self.mant / other.mant, self.exp - other.exp)
    }

    pub fn cmp_abs(self, other: Self) -> Ordering {
        match (self.mant == 0.0, other.mant == 0.0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&other.exp).then(
                self.mant
                    .abs()
                    .partial_cmp(&other.mant.abs())
                    .unwrap_or(Ordering::Equal),
            ),
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl From<f64> for Scaled {
    fn from(v: f64) -> Self {
        Scaled::from_f64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frexp_basics() {
        assert_eq!(frexp(1.0), (0.5, 1));
        assert_eq!(frexp(-3.0), (-0.75, 2));
        let (m, e) = frexp(f64::MIN_POSITIVE / 8.0);
        assert_eq!(m, 0.5);
        assert_eq!(e, -1024);
    }

    #[test]
    fn conversion_limits() {
        let big = Scaled::new(0.75, 2000);
        assert_eq!(big.to_f64(), None);
        assert!(big.to_f64_lossy().is_infinite());
        let tiny = Scaled::new(0.75, -2000);
        assert_eq!(tiny.to_f64(), None);
        assert_eq!(Scaled::ZERO.to_f64(), Some(0.0));
        assert_eq!(Scaled::ONE.to_f64(), Some(1.0));
    }

    #[test]
    fn from_ln_matches_exp() {
        for l in [-700.0, -3.5, 0.0, 2.25, 650.0] {
            let v = Scaled::from_ln(l).to_f64().unwrap();
            assert!((v / f64::exp(l) - 1.0).abs() < 1e-13, "{l}");
        }
        assert!((Scaled::from_ln(2000.0).ln_abs() - 2000.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn product_and_sum_agree_with_f64(a in -1e100f64..1e100, b in -1e100f64..1e100) {
            let (sa, sb) = (Scaled::from(a), Scaled::from(b));
            prop_assert_eq!((sa * sb).to_f64().unwrap(), a * b);
            let s = sa.add(sb).to_f64().unwrap();
            prop_assert!((s - (a + b)).abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()));
        }

        #[test]
        fn powi_tracks_ln(base in 1e-3f64..1e3, n in 0u32..400) {
            let p = Scaled::from(base).powi(n);
            let expect = n as f64 * base.ln();
            prop_assert!((p.ln_abs() - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
        }
    }
}
