//! Freezes oracle values into the fixture files shipped with the workspace.
//!
//! ```text
//! conical-freeze point <x> <m> <tau>
//! conical-freeze derived <out>
//! conical-freeze fixture <out>
//! conical-freeze grid <out>
//! conical-freeze bessel <out>
//! ```

use std::fmt::Write as _;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conical_oracle::bessel::bessel_j0y0_j1y1;
use conical_oracle::conical::{
    oracle_conical, oracle_march, oracle_p, oracle_p_series, oracle_r, oracle_r01, oracle_r01_any, oracle_r_orders,
};
use conical_oracle::gamma::{digamma_half, gamma_ratio_polar, log_abs_gamma_sq, pochhammer_inverse};
use conical_oracle::{with_digits, BigReal};

const DIGITS: u32 = 60;
const CHECK_DIGITS: u32 = 120;
const MIN_AGREEMENT: f64 = 50.0;
const GRID_SEED: u64 = 20_120_601;
const MAG_LIMIT: f64 = 1e290;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match (args.first().map(String::as_str), args.len()) {
        (Some("point"), 4) => point(&args[1..]),
        (Some("derived"), 2) => write_out(&args[1], derived()),
        (Some("fixture"), 2) => write_out(&args[1], fixture_file(&fixture_points(), "shipped fixture", true)),
        (Some("grid"), 2) => write_out(&args[1], fixture_file(&grid_points(), "oracle grid", false)),
        (Some("bessel"), 2) => write_out(&args[1], bessel_grid()),
        _ => {
            eprintln!(
                "usage: conical-freeze point <x> <m> <tau> | derived <out> | fixture <out> | grid <out> | bessel <out>"
            );
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write_out(path: &str, body: Result<String, String>) -> Result<(), String> {
    let body = body?;
    std::fs::write(path, body).map_err(|e| format!("{path}: {e}"))
}

fn point(args: &[String]) -> Result<(), String> {
    let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("{s}: {e}"));
    let x = parse(&args[0])?;
    let m: u32 = args[1].parse().map_err(|e| format!("{}: {e}", args[1]))?;
    let tau = parse(&args[2])?;
    let q = with_digits(DIGITS, || oracle_conical(x, m, tau)).map_err(|e| e.to_string())?;
    println!("pm  {}", q.pm.to_sci(30));
    println!("pmd {}", q.pmd.to_sci(30));
    println!("rm  {}", q.rm.to_sci(30));
    println!("rmd {}", q.rmd.to_sci(30));
    Ok(())
}

fn today() -> String {
    std::process::Command::new("date")
        .arg("+%Y-%m-%d")
        .output()
        .ok()
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| "unknown".into())
}

/// Evaluates `f` at the working and the doubled precision and returns the
/// working-precision values with the smallest digit agreement.
fn doubled(f: impl Fn() -> Result<Vec<BigReal>, String>) -> Result<(Vec<BigReal>, f64), String> {
    let lo = with_digits(DIGITS, &f)?;
    let lo_text: Vec<String> = lo.iter().map(|v| v.to_sci(DIGITS as usize + 10)).collect();
    let agree = with_digits(CHECK_DIGITS, || -> Result<f64, String> {
        let hi = f()?;
        Ok(lo_text
            .iter()
            .zip(&hi)
            .map(|(a, b)| {
                if b.is_zero() {
                    f64::INFINITY
                } else {
                    BigReal::parse(a).agreeing_digits(b)
                }
            })
            .fold(f64::INFINITY, f64::min))
    })?;
    if agree < MIN_AGREEMENT {
        return Err(format!("precision doubling agreement only {agree:.1} digits"));
    }
    Ok((lo, agree))
}

fn sci(v: &BigReal) -> String {
    with_digits(DIGITS, || v.to_sci(25))
}

fn derived() -> Result<String, String> {
    let mut out = String::new();
    let mut worst = f64::INFINITY;
    let mut put = |out: &mut String, key: &str, f: &dyn Fn() -> Result<Vec<BigReal>, String>, names: &[&str]| {
        let (vals, agree) = doubled(f)?;
        worst = worst.min(agree);
        for (n, v) in names.iter().zip(&vals) {
            let name = if n.is_empty() {
                key.to_string()
            } else {
                format!("{key}.{n}")
            };
            writeln!(out, "{name} {}", sci(v)).unwrap();
        }
        Ok::<(), String>(())
    };
    let b = BigReal::from_f64;
    let err = |e: conical_oracle::conical::OracleError| e.to_string();

    put(
        &mut out,
        "digamma_half.tau50",
        &|| {
            let d = digamma_half(&b(50.0));
            Ok(vec![d.re, d.im])
        },
        &["re", "im"],
    )?;
    put(
        &mut out,
        "log_abs_gamma_sq.m-3.tau7",
        &|| Ok(vec![log_abs_gamma_sq(-3, &b(7.0))]),
        &[""],
    )?;
    put(
        &mut out,
        "gamma_ratio_polar.mu1.tau10",
        &|| {
            let (h, rho) = gamma_ratio_polar(1, &b(10.0));
            Ok(vec![h, rho])
        },
        &["modulus", "phase"],
    )?;
    put(
        &mut out,
        "gamma_ratio_polar.mu1.tau5",
        &|| {
            let (h, rho) = gamma_ratio_polar(1, &b(5.0));
            Ok(vec![h, rho])
        },
        &["modulus", "phase"],
    )?;
    put(
        &mut out,
        "pochhammer_inverse.tau5.k3",
        &|| {
            let p = pochhammer_inverse(&b(5.0), 3);
            Ok(vec![p.re, p.im])
        },
        &["re", "im"],
    )?;
    for (x, tau) in [(1.01, 1.0), (1.5, 0.5), (1.5, 1.0)] {
        put(
            &mut out,
            &format!("r01.x{x}.tau{tau}"),
            &|| {
                let (r0, r1) = oracle_r01(&b(x), &b(tau)).map_err(err)?;
                Ok(vec![r0.value, r1.value])
            },
            &["r0", "r1"],
        )?;
    }
    put(
        &mut out,
        "r01.x1.02.tau50",
        &|| {
            let (r0, r1) = oracle_r01_any(1.02, 50.0).map_err(err)?;
            Ok(vec![r0.value, r1.value])
        },
        &["r0", "r1"],
    )?;
    put(
        &mut out,
        "r_orders.x2.tau3.m10",
        &|| {
            let (r10, r11) = oracle_r_orders(2.0, 10, 3.0).map_err(err)?;
            Ok(vec![r10, r11])
        },
        &["r10", "r11"],
    )?;
    put(
        &mut out,
        "r.x10.tau20",
        &|| {
            let (r0, r1) = oracle_r01_any(10.0, 20.0).map_err(err)?;
            Ok(vec![r0.value, r1.value])
        },
        &["r0", "r1"],
    )?;
    for (x, m, tau) in [(1.5, 0, 1.0), (50.0, 40, 80.0), (50.0, 10, 80.0)] {
        put(
            &mut out,
            &format!("r.x{x}.m{m}.tau{tau}"),
            &|| {
                let r = oracle_r(x, m, tau).map_err(err)?;
                Ok(vec![r.value, r.deriv])
            },
            &["value", "deriv"],
        )?;
    }
    put(
        &mut out,
        "p.x0.5.m3.tau4",
        &|| {
            let p = oracle_p_series(&b(0.5), 3, &b(4.0)).map_err(err)?;
            Ok(vec![p.value, p.deriv])
        },
        &["value", "deriv"],
    )?;
    put(
        &mut out,
        "negative_order_factor.m2.tau10",
        &|| {
            let tau = b(10.0);
            let pt = BigReal::pi() * &tau;
            let ln_cosh = ((pt.exp() + (-pt).exp()) * 0.5).ln();
            Ok(vec![(BigReal::pi().ln() - ln_cosh - log_abs_gamma_sq(2, &tau)).exp()])
        },
        &[""],
    )?;
    for (x, m, tau) in [(10.0, 0, 30.0), (30.0, 5, 60.0)] {
        put(
            &mut out,
            &format!("p.x{x}.m{m}.tau{tau}"),
            &|| {
                let p = oracle_p(x, m, tau).map_err(err)?;
                Ok(vec![p.value, p.deriv])
            },
            &["value", "deriv"],
        )?;
    }
    put(
        &mut out,
        "conicpr.x2.m1.tau5",
        &|| {
            let q = oracle_conical(2.0, 1, 5.0).map_err(err)?;
            Ok(vec![q.pm, q.pmd, q.rm, q.rmd])
        },
        &["pm", "pmd", "rm", "rmd"],
    )?;
    put(
        &mut out,
        "march_abel.x1.3.x12.m2.tau10",
        &|| {
            // P and R carried by independent marches keep (1 - x^2) W fixed
            let (x0, x1, t) = (b(1.3), b(12.0), b(10.0));
            let p = oracle_p(1.3, 2, 10.0).map_err(err)?;
            let r = oracle_r(1.3, 2, 10.0).map_err(err)?;
            let pa = oracle_march(&x0, &p.value, &p.deriv, &x1, 2, &t);
            let ra = oracle_march(&x0, &r.value, &r.deriv, &x1, 2, &t);
            let w0 = (&p.value * &r.deriv - &p.deriv * &r.value) * (BigReal::one() - x0.sqr());
            let w1 = (&pa.value * &ra.deriv - &pa.deriv * &ra.value) * (BigReal::one() - x1.sqr());
            Ok(vec![w0, w1])
        },
        &["w_start", "w_end"],
    )?;
    for z in [0.05, 0.5, 1.0, 2.5, 4.0, 7.5, 12.0, 20.0, 25.0, 40.0, 65.0] {
        put(
            &mut out,
            &format!("bessel.z{z}"),
            &|| Ok(bessel_j0y0_j1y1(&b(z)).to_vec()),
            &["j0", "y0", "j1", "y1"],
        )?;
    }

    let mut head = String::new();
    writeln!(
        head,
        "# oracle reference values, {DIGITS} significant digits working precision"
    )
    .unwrap();
    writeln!(
        head,
        "# every value re-evaluated at {CHECK_DIGITS} digits; minimum agreement {worst:.1} digits"
    )
    .unwrap();
    writeln!(head, "# generated {} by conical-freeze derived", today()).unwrap();
    Ok(head + &out)
}

#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    m: u32,
    tau: f64,
}

fn fixture_points() -> Vec<Point> {
    [
        (1.5, 0, 1.0),
        (2.0, 1, 5.0),
        (1.01, 0, 1.0),
        (1.02, 1, 50.0),
        (1.001, 3, 30.0),
        (1.05, 2, 90.0),
        (1.1, 0, 0.25),
        (1.2, 7, 12.0),
        (2.5, 12, 0.5),
        (3.0, 0, 40.0),
        (5.0, 20, 15.0),
        (10.0, 0, 30.0),
        (10.0, 1, 20.0),
        (30.0, 5, 60.0),
        (50.0, 40, 80.0),
        (50.0, 10, 80.0),
        (75.0, 60, 33.0),
        (100.0, 100, 2.0),
        (1.3, 25, 100.0),
        (7.25, 2, 0.0),
    ]
    .into_iter()
    .map(|(x, m, tau)| Point { x, m, tau })
    .collect()
}

fn round_sig(v: f64, digits: usize) -> f64 {
    format!("{v:.*e}", digits - 1).parse().unwrap()
}

fn grid_points() -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
    let log_uniform = |rng: &mut ChaCha8Rng, a: f64, b: f64| (rng.random_range(a.ln()..b.ln())).exp();
    let mut pts = Vec::new();
    // (count, sampler) per dispatch region
    type Sampler = fn(&mut ChaCha8Rng, &dyn Fn(&mut ChaCha8Rng, f64, f64) -> f64) -> (f64, u32, f64);
    let regions: [(usize, Sampler); 7] = [
        // interval (-1, 1)
        (30, |r, _| {
            (
                r.random_range(-0.8..0.99),
                r.random_range(0..=30),
                r.random_range(0.0..60.0),
            )
        }),
        // near-one series, small tau
        (30, |r, lu| {
            (1.0 + lu(r, 1e-6, 0.2), r.random_range(0..=20), r.random_range(0.0..6.0))
        }),
        // near-one series, moderate tau close to one
        (15, |r, lu| {
            let tau: f64 = r.random_range(6.0..60.0);
            let dmax = (2.0 * (3.0 / tau).powi(2)).min(0.19);
            (1.0 + lu(r, 1e-7, dmax), r.random_range(0..=10), tau)
        }),
        // large-tau expansion near one
        (35, |r, lu| {
            (
                1.0 + lu(r, 1e-3, 0.19),
                r.random_range(0..=10),
                r.random_range(20.0..100.0),
            )
        }),
        // large-x expansion
        (45, |r, lu| {
            (lu(r, 1.2, 100.0), r.random_range(0..=40), r.random_range(0.0..100.0))
        }),
        // order recurrence beyond the direct large-x orders
        (30, |r, lu| {
            (lu(r, 1.2, 100.0), r.random_range(41..=100), r.random_range(0.0..100.0))
        }),
        // seam between near-one methods and large-x
        (15, |r, _| {
            (
                r.random_range(1.15..1.25),
                r.random_range(0..=40),
                r.random_range(0.0..100.0),
            )
        }),
    ];
    for (count, sample) in regions {
        let mut kept = 0;
        while kept < count {
            let (x, m, tau) = sample(&mut rng, &log_uniform);
            let x = if x < 1.0 {
                round_sig(x, 6)
            } else {
                1.0 + round_sig(x - 1.0, 6)
            };
            let p = Point {
                x,
                m,
                tau: round_sig(tau, 6),
            };
            if representable(p) {
                pts.push(p);
                kept += 1;
            }
        }
    }
    pts
}

/// Quick 30-digit screen that every value of the point fits binary64 comfortably.
fn representable(p: Point) -> bool {
    with_digits(30, || match values(p) {
        Ok(v) => v.iter().all(|b| {
            let a = b.abs().to_f64();
            b.is_zero() || (a < MAG_LIMIT && a > 1.0 / MAG_LIMIT)
        }),
        Err(_) => false,
    })
}

fn values(p: Point) -> Result<Vec<BigReal>, String> {
    let err = |e: conical_oracle::conical::OracleError| e.to_string();
    if p.x < 1.0 {
        let v = oracle_p(p.x, p.m, p.tau).map_err(err)?;
        Ok(vec![v.value, v.deriv])
    } else {
        let q = oracle_conical(p.x, p.m, p.tau).map_err(err)?;
        Ok(vec![q.pm, q.pmd, q.rm, q.rmd])
    }
}

fn fixture_file(points: &[Point], title: &str, full_digits: bool) -> Result<String, String> {
    let mut body = String::new();
    let mut worst = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        eprintln!("[{}/{}] x={} m={} tau={}", i + 1, points.len(), p.x, p.m, p.tau);
        let (vals, agree) = doubled(|| values(*p))?;
        worst = worst.min(agree);
        if full_digits {
            let full: Vec<String> = vals.iter().map(sci).collect();
            writeln!(body, "# {}", full.join(" ")).unwrap();
        }
        let mut cols: Vec<String> =
            with_digits(DIGITS, || vals.iter().map(|v| format!("{:.16e}", v.to_f64())).collect());
        cols.resize(4, "nan".into());
        writeln!(body, "{} {} {} {}", p.x, p.m, p.tau, cols.join(" ")).unwrap();
    }
    let mut head = String::new();
    writeln!(head, "# conical functions, {title}: {} points", points.len()).unwrap();
    writeln!(head, "# columns: x m tau pm pmd rm rmd (rm, rmd are nan for x < 1)").unwrap();
    writeln!(head, "# oracle precision {DIGITS} digits; re-evaluated at {CHECK_DIGITS} digits, minimum agreement {worst:.1} digits").unwrap();
    writeln!(head, "# anchor: near-one series at x_a = 1 + min(0.5, 8/tau^2); larger x by Taylor march and upward order recurrence").unwrap();
    if !full_digits {
        writeln!(head, "# sample seed {GRID_SEED}").unwrap();
    }
    writeln!(head, "# generated {} by conical-freeze", today()).unwrap();
    Ok(head + &body)
}

/// J0, Y0, J1, Y1 on 500 log-spaced arguments in [1e-3, 200].
fn bessel_grid() -> Result<String, String> {
    const N: usize = 500;
    let mut out = String::new();
    writeln!(out, "# Bessel J0 Y0 J1 Y1, {N} log-spaced arguments in [1e-3, 200]").unwrap();
    writeln!(
        out,
        "# ascending series at 40 digits plus guard digits; generated {}",
        today()
    )
    .unwrap();
    writeln!(out, "# columns: z j0 y0 j1 y1").unwrap();
    for i in 0..N {
        let t = i as f64 / (N - 1) as f64;
        let z = round_sig((1e-3f64.ln() + t * (200f64 / 1e-3).ln()).exp(), 8);
        let v = with_digits(40, || {
            bessel_j0y0_j1y1(&BigReal::from_f64(z)).map(|b| format!("{:.16e}", b.to_f64()))
        });
        writeln!(out, "{z} {}", v.join(" ")).unwrap();
    }
    Ok(out)
}
