//! Double-double arithmetic for the few places where binary64 rounding of a
//! large phase is visible in the result.

use std::f64::consts::{LN_2, TAU};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi) / 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd(pub f64, pub f64);

const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;
const TWO_PI_HI: f64 = TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

impl Dd {
    pub fn from(v: f64) -> Self {
        Dd(v, 0.0)
    }

    pub fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let e = s.1 + self.1 + o.1;
        let h = s.0 + e;
        Dd(h, e - (h - s.0))
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let p = self.0 * b;
        let e = self.0.mul_add(b, -p) + self.1 * b;
        let h = p + e;
        Dd(h, e - (h - p))
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + (self.0 * o.1 + self.1 * o.0);
        let h = p + e;
        Dd(h, e - (h - p))
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.0 / b;
        let r = self.add(Dd::from(q1).mul_f64(-b));
        let q2 = r.0 / b;
        Dd::two_sum(q1, q2)
    }

    pub fn scale2(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd(self.0 * f, self.1 * f)
    }

    pub fn sqrt(self) -> Dd {
        if self.0 <= 0.0 {
            return Dd::from(0.0);
        }
        let s = self.0.sqrt();
        let r = (-s).mul_add(s, self.0) + self.1;
        Dd::two_sum(s, r / (2.0 * s))
    }

    /// e^a for moderate a.
    pub fn exp(a: f64) -> Dd {
        let k = (a / LN_2).round();
        let r = Dd::from(a).add(Dd(LN_2, LN2_LO).mul_f64(-k));
        let mut term = Dd::from(1.0);
        let mut sum = Dd::from(1.0);
        for n in 1..40 {
            term = term.mul(r).div_f64(n as f64);
            sum = sum.add(term);
            if term.0.abs() <= 1e-36 * sum.0.abs() {
                break;
            }
        }
        sum.scale2(k as i32)
    }

    /// Natural log of a positive value.
    pub fn ln(self) -> Dd {
        let h = self.0.ln();
        let t = self.mul(Dd::exp(-h)).add(Dd::from(-1.0));
        Dd::from(h).add(Dd::from(t.0 - 0.5 * t.0 * t.0))
    }

    /// self reduced to [-pi, pi] as a binary64 value.
    pub fn reduce_2pi(self) -> f64 {
        let n = (self.0 / TWO_PI_HI).round();
        self.add(Dd(TWO_PI_HI, TWO_PI_LO).mul_f64(-n)).0
    }
}

/// acosh x = ln(x + sqrt(d^2 + 2d)), d = x - 1, for x >= 1, in double-double.
pub(crate) fn acosh_dd(x: f64) -> Dd {
    let d = x - 1.0;
    let q = Dd::from(d).mul_f64(d).add(Dd::from(2.0 * d));
    Dd::from(x).add(q.sqrt()).ln()
}
