//! Bessel J0, Y0, J1, Y1 by ascending series with guard digits.

use crate::bigreal::{precision_digits, with_digits, BigReal};

/// `[J0, Y0, J1, Y1]` at `z > 0`.
pub fn bessel_j0y0_j1y1(z: &BigReal) -> [BigReal; 4] {
    let zf = z.to_f64();
    assert!(zf > 0.0, "argument must be positive");
    // terms peak near e^z / (2 pi z); carry that many extra digits
    let guard = (zf / std::f64::consts::LN_10).ceil() as u32 + 10;
    let digits = precision_digits();
    with_digits(digits + guard, || {
        let q = -(z.sqr() * 0.25);
        let half_z = z * 0.5;
        let gamma = BigReal::euler_gamma();
        let ln_half = half_z.ln();
        let eps = BigReal::from_f64(10f64).powi(digits + guard).recip();
        let (mut j0, mut j1) = (BigReal::zero(), BigReal::zero());
        let (mut s0, mut s1) = (BigReal::zero(), BigReal::zero());
        let mut t0 = BigReal::one();
        let mut t1 = BigReal::one();
        let mut h = BigReal::zero();
        let mut psi_sum = BigReal::one() - &gamma * 2.0;
        let mut k = 0u64;
        loop {
            j0 += &t0;
            j1 += &t1;
            s0 += &h * &t0;
            s1 += &psi_sum * &t1;
            if k > 4 && t0.abs() < eps && t1.abs() < eps {
                break;
            }
            let kf = k as f64;
            t0 = &t0 * &q / ((kf + 1.0) * (kf + 1.0));
            t1 = &t1 * &q / ((kf + 1.0) * (kf + 2.0));
            h += BigReal::from_f64(kf + 1.0).recip();
            psi_sum += BigReal::from_f64(kf + 1.0).recip() + BigReal::from_f64(kf + 2.0).recip();
            k += 1;
        }
        let j1 = j1 * &half_z;
        let two_over_pi = BigReal::from_i64(2) / BigReal::pi();
        let y0 = &two_over_pi * ((&ln_half + &gamma) * &j0 - &s0);
        let y1 = -(&two_over_pi / z) + &two_over_pi * &ln_half * &j1 - &half_z / BigReal::pi() * &s1;
        [j0, y0, j1, y1]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wronskian_holds() {
        with_digits(40, || {
            for zf in [0.01, 1.0, 7.5, 30.0] {
                let z = BigReal::from_f64(zf);
                let [j0, y0, j1, y1] = bessel_j0y0_j1y1(&z);
                let w = &j1 * &y0 - &j0 * &y1;
                let expect = BigReal::from_i64(2) / (BigReal::pi() * &z);
                assert!(w.agreeing_digits(&expect) > 38.0, "{zf}");
            }
        });
    }

    #[test]
    fn j0_at_one() {
        with_digits(40, || {
            let [j0, ..] = bessel_j0y0_j1y1(&BigReal::one());
            assert!(j0.to_sci(30).starts_with("7.651976865579665514497"));
        });
    }
}
