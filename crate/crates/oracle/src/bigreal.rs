//! Arbitrary-precision real and complex scalars over `astro_float`, with a
//! thread-local working precision.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

thread_local! {
    static PREC: Cell<usize> = Cell::new(bits_for_digits(DEFAULT_DIGITS));
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Binary precision carrying `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

/// Current working precision in bits.
pub fn precision_bits() -> usize {
    PREC.with(|p| p.get())
}

/// Current working precision in decimal digits (guard bits excluded).
pub fn precision_digits() -> u32 {
    ((precision_bits() - 32) as f64 / std::f64::consts::LOG2_10).floor() as u32
}

struct Restore(usize);

impl Drop for Restore {
    fn drop(&mut self) {
        PREC.with(|p| p.set(self.0));
    }
}

/// Runs `f` with the working precision set to `digits` decimal digits.
pub fn with_digits<R>(digits: u32, f: impl FnOnce() -> R) -> R {
    let _restore = Restore(precision_bits());
    PREC.with(|p| p.set(bits_for_digits(digits)));
    f()
}

fn cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision real number.
#[derive(Clone)]
pub struct BigReal(BigFloat);

impl BigReal {
    pub fn from_f64(v: f64) -> Self {
        BigReal(BigFloat::from_f64(v, precision_bits()))
    }

    pub fn from_i64(v: i64) -> Self {
        BigReal(BigFloat::from_i64(v, precision_bits()))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// Exact rational `num / den`, rounded once.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Parses a decimal literal such as `"1.5"` or `"-2.5e-3"` exactly to working precision.
    pub fn parse(s: &str) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| BigFloat::parse(s, Radix::Dec, p, RM, c)))
    }

    pub fn pi() -> Self {
        let p = precision_bits();
        BigReal(cc(|c| c.pi(p, RM)))
    }

    pub fn euler_gamma() -> Self {
        // 120 digits
        Self::parse(
            "0.577215664901532860606512090082402431042159335939923598805767234884867726777664670936947063291746749514631447249807082480960504014486542836224173997644923536253500333742937337737673942",
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.abs())
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.sqrt(precision_bits(), RM))
    }

    pub fn ln(&self) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| self.0.ln(p, RM, c)))
    }

    pub fn exp(&self) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| self.0.exp(p, RM, c)))
    }

    pub fn sin(&self) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| self.0.sin(p, RM, c)))
    }

    pub fn cos(&self) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| self.0.cos(p, RM, c)))
    }

    pub fn atan(&self) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| self.0.atan(p, RM, c)))
    }

    pub fn tanh(&self) -> Self {
        let p = precision_bits();
        BigReal(cc(|c| self.0.tanh(p, RM, c)))
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(&self, x: &BigReal) -> Self {
        let y = self;
        if x.is_zero() {
            let h = Self::pi() * 0.5;
            return if y.is_negative() {
                -h
            } else if y.is_zero() {
                Self::zero()
            } else {
                h
            };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - Self::pi()
        } else {
            base + Self::pi()
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        BigReal(self.0.powi(n as usize, precision_bits(), RM))
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.reciprocal(precision_bits(), RM))
    }

    /// ln(1 + self) for small arguments, without cancellation in the argument.
    pub fn ln_1p(&self) -> Self {
        (Self::one() + self).ln()
    }

    /// Rounds to the nearest binary64 value.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_nan() {
            return f64::NAN;
        }
        // round to one word, then read it back
        let r = BigReal(self.0.clone());
        let mut v = r.0;
        v.set_precision(64, RM).ok();
        match v.as_raw_parts() {
            Some((words, _bits, sign, exp, _)) => {
                let top = *words.last().unwrap_or(&0);
                let m = top as f64 / 2f64.powi(64);
                let e = exp as i64;
                let mag = ldexp(m, e);
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
            None => {
                if self.0.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let s = cc(|c| self.0.format(Radix::Dec, RM, c)).unwrap_or_else(|_| "NaN".into());
        sci_truncate(&s, digits)
    }

    /// Number of agreeing significant decimal digits with `other`.
    pub fn agreeing_digits(&self, other: &BigReal) -> f64 {
        if self.is_zero() && other.is_zero() {
            return f64::INFINITY;
        }
        let d = (self - other).abs();
        if d.is_zero() {
            return f64::INFINITY;
        }
        let rel = &d / &self.abs();
        -log10_big(&rel)
    }

    pub fn cmp_big(&self, other: &BigReal) -> Ordering {
        match self.0.cmp(&other.0) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    pub fn max(self, other: BigReal) -> BigReal {
        if self.cmp_big(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

fn log10_big(v: &BigReal) -> f64 {
    // magnitude estimate robust to exponents outside binary64
    let l = v.ln();
    let f = l.to_f64();
    f / std::f64::consts::LN_10
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// Normalizes astro-float decimal output (`1.2345e+3`-style) to `digits` significant digits.
fn sci_truncate(s: &str, digits: usize) -> String {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let all: String = format!("{int_part}{frac_part}");
    let lead = all.find(|c: char| c != '0').unwrap_or(0);
    let sig: String = all[lead..].chars().take(digits).collect();
    let exp10 = exp + int_part.len() as i64 - 1 - lead as i64;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&sig[..1]);
    if sig.len() > 1 {
        out.push('.');
        out.push_str(&sig[1..]);
    }
    out.push_str(&format!("e{exp10}"));
    out
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(40))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(precision_digits() as usize))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_big(other) == Ordering::Equal
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_big(other))
    }
}

impl From<f64> for BigReal {
    fn from(v: f64) -> Self {
        BigReal::from_f64(v)
    }
}

impl From<i64> for BigReal {
    fn from(v: i64) -> Self {
        BigReal::from_i64(v)
    }
}

macro_rules! bin_op {
    ($tr:ident, $f:ident, $method:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $f(self, rhs: &BigReal) -> BigReal {
                BigReal(self.0.$method(&rhs.0, precision_bits(), RM))
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: BigReal) -> BigReal {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: &BigReal) -> BigReal {
                (&self).$f(rhs)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $f(self, rhs: BigReal) -> BigReal {
                self.$f(&rhs)
            }
        }
        impl $tr<f64> for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: f64) -> BigReal {
                (&self).$f(&BigReal::from_f64(rhs))
            }
        }
        impl $tr<f64> for &BigReal {
            type Output = BigReal;
            fn $f(self, rhs: f64) -> BigReal {
                self.$f(&BigReal::from_f64(rhs))
            }
        }
        impl $tr<BigReal> for f64 {
            type Output = BigReal;
            fn $f(self, rhs: BigReal) -> BigReal {
                (&BigReal::from_f64(self)).$f(&rhs)
            }
        }
        impl $tr<&BigReal> for f64 {
            type Output = BigReal;
            fn $f(self, rhs: &BigReal) -> BigReal {
                (&BigReal::from_f64(self)).$f(rhs)
            }
        }
    };
}

bin_op!(Add, add, add);
bin_op!(Sub, sub, sub);
bin_op!(Mul, mul, mul);
bin_op!(Div, div, div);

impl AddAssign<&BigReal> for BigReal {
    fn add_assign(&mut self, rhs: &BigReal) {
        self.0 = self.0.add(&rhs.0, precision_bits(), RM);
    }
}

impl AddAssign<BigReal> for BigReal {
    fn add_assign(&mut self, rhs: BigReal) {
        *self += &rhs;
    }
}

impl SubAssign<&BigReal> for BigReal {
    fn sub_assign(&mut self, rhs: &BigReal) {
        self.0 = self.0.sub(&rhs.0, precision_bits(), RM);
    }
}

impl SubAssign<BigReal> for BigReal {
    fn sub_assign(&mut self, rhs: BigReal) {
        *self -= &rhs;
    }
}

impl MulAssign<&BigReal> for BigReal {
    fn mul_assign(&mut self, rhs: &BigReal) {
        self.0 = self.0.mul(&rhs.0, precision_bits(), RM);
    }
}

impl MulAssign<BigReal> for BigReal {
    fn mul_assign(&mut self, rhs: BigReal) {
        *self *= &rhs;
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(BigFloat::neg(&self.0))
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(BigFloat::neg(&self.0))
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        Self {
            re,
            im: BigReal::zero(),
        }
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> BigReal {
        self.im.atan2(&self.re)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, -(&self.im / &n))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.norm_sqr().ln() * 0.5, self.arg())
    }

    pub fn scale(&self, k: &BigReal) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn add_real(&self, k: &BigReal) -> Self {
        Self::new(&self.re + k, self.im.clone())
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &BigComplex) -> BigComplex {
        self * &o.inv()
    }
}
