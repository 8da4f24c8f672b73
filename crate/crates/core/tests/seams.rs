//! Continuity of the computed functions across the region boundaries.
//!
//! A boundary is crossed between `a = xs - d` and `b = xs + d`; the jump is
//! measured against the trapezoid rule built from the derivatives at both ends.

use conical::conical_p::{conicp_pair, conicpr_scaled, p_ode_march, p_series};
use conical::{conicr_with, NumericConfig, Region};

const TOL: f64 = 1e-11;

fn wavenumber(x: f64, m: u32, tau: f64) -> f64 {
    let q = ((x - 1.0) * (x + 1.0)).abs();
    ((tau * tau + 0.25) * q + (m * m) as f64).sqrt() / q
}

struct Sample {
    v: f64,
    d: f64,
    region: Region,
}

fn jump(a: &Sample, b: &Sample, xa: f64, xb: f64, k: f64) -> f64 {
    let scale = b.v.abs().max(b.d.abs() / k);
    (b.v - a.v - 0.5 * (xb - xa) * (a.d + b.d)).abs() / scale
}

fn r_sample(x: f64, m: u32, tau: f64) -> Option<Sample> {
    let q = conicpr_scaled(x, m, tau, &NumericConfig::default()).ok()?;
    Some(Sample {
        v: q.rm.to_f64()?,
        d: q.rmd.to_f64()?,
        region: q.r_region,
    })
}

fn p_sample(x: f64, m: u32, tau: f64) -> Option<Sample> {
    let p = conicp_pair(x, m, tau, &NumericConfig::default()).ok()?;
    Some(Sample {
        v: p.pm.to_f64()?,
        d: p.pmd.to_f64()?,
        region: p.region,
    })
}

fn check_seam(f: fn(f64, u32, f64) -> Option<Sample>, xs: f64, m: u32, tau: f64, rel: f64) -> Option<f64> {
    let d = rel * (xs - 1.0).abs().max(1e-300);
    let (xa, xb) = (xs - d, xs + d);
    let (a, b) = (f(xa, m, tau)?, f(xb, m, tau)?);
    assert_ne!(a.region, b.region, "no region change at x {xs}, m {m}, tau {tau}");
    Some(jump(&a, &b, xa, xb, wavenumber(xs, m, tau)))
}

#[test]
fn r_near_one_to_large_x() {
    let mut worst = 0.0f64;
    for tau in [0.3, 2.0, 5.0, 9.0, 14.0, 25.0, 60.0, 100.0] {
        for m in [0, 1, 3, 10, 40] {
            if let Some(e) = check_seam(r_sample, 1.2, m, tau, 1e-9) {
                assert!(e <= TOL, "tau {tau} m {m}: {e:e}");
                worst = worst.max(e);
            }
        }
    }
    assert!(worst > 0.0);
}

#[test]
fn r_series_to_large_tau_expansion() {
    for tau in [10.0, 15.0, 20.0, 35.0, 60.0, 100.0] {
        let xs = 1.0 + 2.0 * (3.0 / tau) * (3.0 / tau);
        for m in [0, 1, 5] {
            let e = check_seam(r_sample, xs, m, tau, 1e-6).expect("finite values");
            assert!(e <= TOL, "tau {tau} m {m}: {e:e}");
        }
    }
}

#[test]
fn r_direct_orders_against_climb() {
    let direct = NumericConfig::default();
    let climb = NumericConfig {
        largex_direct_max_order: -1,
        ..NumericConfig::default()
    };
    for x in [1.2, 1.7, 4.0, 20.0, 99.0] {
        for tau in [0.5, 5.0, 30.0, 90.0] {
            for m in [2, 10, 25, 40] {
                let a = conicr_with(x, m, tau, &direct);
                let b = conicr_with(x, m, tau, &climb);
                if !(a.status.is_ok() && b.status.is_ok()) {
                    continue;
                }
                let e = ((a.value - b.value) / b.value).abs();
                assert!(e <= TOL, "x {x} tau {tau} m {m}: {e:e}");
            }
        }
    }
}

#[test]
fn p_series_window_edge() {
    for tau in [2.0, 3.0, 8.0, 20.0, 60.0] {
        let xs = 1.0 + 2.0 * (1.5 / tau) * (1.5 / tau);
        for m in [0, 1, 4, 12] {
            if let Some(e) = check_seam(p_sample, xs, m, tau, 1e-6) {
                assert!(e <= TOL, "tau {tau} m {m}: {e:e}");
            }
        }
    }
}

#[test]
fn p_series_against_march() {
    let cfg = NumericConfig::default();
    // points beyond the march anchor, where both methods are in their stable range
    for (x, tau) in [(2.0, 2.0), (1.8, 1.0), (2.0, 0.8), (2.4, 0.3), (1.25, 6.0)] {
        for m in [0, 2, 7] {
            let (s, _) = p_series(x, m, tau, &cfg).unwrap();
            let (v, _) = p_ode_march(x, m, tau, &cfg).unwrap();
            assert!(((s - v) / s).abs() <= TOL, "x {x} tau {tau} m {m}");
        }
    }
}

#[test]
fn p_large_x_against_march() {
    let cfg = NumericConfig::default();
    let mut hits = 0;
    for x in [1.5, 3.0, 10.0, 60.0] {
        for tau in [0.5, 4.0, 25.0, 80.0] {
            for m in [0, 1, 6, 30] {
                let p = conicp_pair(x, m, tau, &cfg).unwrap();
                if p.region != Region::LargeX {
                    continue;
                }
                hits += 1;
                let (v, d) = p_ode_march(x, m, tau, &cfg).unwrap();
                let k = wavenumber(x, m, tau);
                let scale = v.abs().max(d.abs() / k);
                let e = (p.pm.to_f64().unwrap() - v).abs() / scale;
                assert!(e <= TOL, "x {x} tau {tau} m {m}: {e:e}");
            }
        }
    }
    assert!(hits > 10);
}

#[test]
fn p_interval_window_edge() {
    for tau in [1.0f64, 10.0, 40.0, 100.0] {
        let q: f64 = 20.0 / tau;
        let xs = (1.0 - 2.0 * (q * q).min(0.6)).max(-0.2);
        for m in [0, 3, 9] {
            let d = 1e-9;
            let (xa, xb) = (xs - d, xs + d);
            let a = p_sample(xa, m, tau).unwrap();
            let b = p_sample(xb, m, tau).unwrap();
            assert_ne!(a.region, b.region);
            let e = jump(&a, &b, xa, xb, wavenumber(xs, m, tau));
            assert!(e <= TOL, "tau {tau} m {m}: {e:e}");
        }
    }
}
