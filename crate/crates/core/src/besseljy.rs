//! Bessel functions J and Y of integer order for real positive argument.
//!
//! Three bands: ascending series up to `SERIES_MAX`, Miller backward recurrence
//! with Neumann series for Y up to `HANKEL_MIN`, and the Hankel asymptotic
//! expansion beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::gammakit::euler_gamma;
use crate::{Error, Result};

pub const SERIES_MAX: f64 = 4.0;
pub const HANKEL_MIN: f64 = 25.0;
pub const ARG_MAX: f64 = 1e4;

/// J0, Y0, J1, Y1 at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselQuad {
    pub j0: f64,
    pub y0: f64,
    pub j1: f64,
    pub y1: f64,
}

fn series(z: f64) -> BesselQuad {
    let q = -0.25 * z * z;
    let ln_half = (0.5 * z).ln() + euler_gamma();
    // J0, J1 and the harmonic sums of Y0, Y1
    let (mut j0, mut j1) = (0.0f64, 0.0f64);
    let (mut s0, mut s1) = (0.0, 0.0);
    let mut t0: f64 = 1.0; // q^k / k!^2
    let mut t1: f64 = 1.0; // q^k / (k! (k+1)!)
    let mut h = 0.0; // H_k
    let mut psi_sum = -2.0 * euler_gamma() + 1.0; // psi(k+1) + psi(k+2)
    for k in 0..60 {
        let kf = k as f64;
        j0 += t0;
        j1 += t1;
        s0 += h * t0;
        s1 += psi_sum * t1;
        if t0.abs() < 1e-18 * j0.abs() && t1.abs() < 1e-18 * j1.abs() && k > 2 {
            break;
        }
        t0 *= q / ((kf + 1.0) * (kf + 1.0));
        t1 *= q / ((kf + 1.0) * (kf + 2.0));
        h += 1.0 / (kf + 1.0);
        psi_sum += 1.0 / (kf + 1.0) + 1.0 / (kf + 2.0);
    }
    j1 *= 0.5 * z;
    let y0 = (2.0 / PI) * (ln_half * j0 - s0);
    let y1 = -2.0 / (PI * z) + (2.0 / PI) * (0.5 * z).ln() * j1 - (0.5 * z / PI) * s1;
    BesselQuad { j0, y0, j1, y1 }
}

/// Normalized J_0 .. J_{n_max} by backward recurrence; valid for any z > 0.
fn miller(z: f64, n_max: usize) -> Vec<f64> {
    let start = {
        let base = (z + 30.0 + 10.0 * z.sqrt()).max(n_max as f64 + 30.0) as usize;
        base + base % 2
    };
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / z * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
            norm *= 1e-250;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j[k - 1];
        }
    }
    norm += j[0];
    j.truncate(n_max.max(1) + 2);
    for v in j.iter_mut() {
        *v /= norm;
    }
    j
}

fn neumann(z: f64) -> BesselQuad {
    let full = miller_full(z);
    let j = &full;
    let ln_half = (0.5 * z).ln() + euler_gamma();
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < full.len() {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * full[2 * k] / kf;
        s1 += sign * (full[2 * k - 1] - full[2 * k + 1]) / kf;
        k += 1;
    }
    let y0 = (2.0 / PI) * (ln_half * j[0] + 2.0 * s0);
    let y1 = (2.0 / PI) * (ln_half * j[1] - j[0] / z - s1);
    BesselQuad {
        j0: j[0],
        y0,
        j1: j[1],
        y1,
    }
}

fn miller_full(z: f64) -> Vec<f64> {
    let n = (z + 30.0 + 10.0 * z.sqrt()) as usize;
    miller(z, n)
}

/// Hankel asymptotic P, Q for order `n`.
fn hankel_pq(n: u32, z: f64) -> (f64, f64) {
    let mu = 4.0 * (n * n) as f64;
    let inv8z = 1.0 / (8.0 * z);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) * inv8z / kf;
        let size = term.abs();
        if size > prev || size < 1e-18 {
            break;
        }
        prev = size;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (p, q)
}

fn hankel(z: f64) -> BesselQuad {
    let amp = (2.0 / (PI * z)).sqrt();
    let (s, c) = z.sin_cos();
    // z - pi/4 and z - 3 pi/4
    let (c0, s0) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let (c1, s1) = ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2);
    let (p0, q0) = hankel_pq(0, z);
    let (p1, q1) = hankel_pq(1, z);
    BesselQuad {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

/// J0, Y0, J1, Y1 at `z` in (0, 1e4].
pub fn bessel_j0y0_j1y1(z: f64) -> Result<BesselQuad> {
    if !(z > 0.0 && z <= ARG_MAX) {
        return Err(Error::OutOfRange);
    }
    Ok(if z <= SERIES_MAX {
        series(z)
    } else if z <= HANKEL_MIN {
        neumann(z)
    } else {
        hankel(z)
    })
}

/// J_n(z) and Y_n(z) for `n = 0..=n_max`.
pub fn bessel_jy_orders(z: f64, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let q = bessel_j0y0_j1y1(z)?;
    let mut y = vec![q.y0, q.y1];
    for n in 1..n_max {
        let next = 2.0 * n as f64 / z * y[n] - y[n - 1];
        y.push(next);
    }
    y.truncate(n_max + 1);
    let mut j = if z > HANKEL_MIN && (n_max as f64) < 0.5 * z {
        let mut j = vec![q.j0, q.j1];
        for n in 1..n_max {
            let next = 2.0 * n as f64 / z * j[n] - j[n - 1];
            j.push(next);
        }
        j
    } else {
        let mut j = miller(z, n_max);
        // anchor to the more accurate order-0/1 values
        let f = if q.j0.abs() > q.j1.abs() {
            q.j0 / j[0]
        } else {
            q.j1 / j[1]
        };
        for v in j.iter_mut() {
            *v *= f;
        }
        j
    };
    j.truncate(n_max + 1);
    Ok((j, y))
}
