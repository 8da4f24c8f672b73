//! Verification sweeps: Wronskian, order recurrence, near-one cross product and
//! the frozen oracle grid.

use std::io::{self, Write};

use rayon::prelude::*;

use conical::conical_p::{conicp_pair, conicpr_scaled};
use conical::conical_r::{conicr_pair, kummer_expansion, KummerTerms, LargeXState};
use conical::verify::{near_one_error, recurrence_errors, wronskian_error};
use conical::{EvalStatus, NumericConfig, Scaled};

use crate::fixture::{check_line, FixtureLine};
use crate::format::g17;
use crate::sample::{Domain, Sampler};

/// Fraction reported alongside the threshold count.
pub const FINE_LEVEL: f64 = 1e-13;
const MAX_DRAWS_PER_SAMPLE: usize = 1000;
/// Largest tau at which the seven-term Kummer expansion still fails the
/// 1e-12 recurrence test at m = 1, rounded up; calibrated on the default sweep.
pub const KUMMER_TAU_CUTOFF: f64 = 17.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Production dispatch at each of the three orders.
    Auto,
    /// Large-x expansion evaluated directly at every order.
    LargeX,
    /// Large-tau expansion with the fixed term count of the configuration.
    Kummer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Wronskian,
    Recurrence(Method),
    NearOne,
    Oracle,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Self::Wronskian => "wronskian",
            Self::Recurrence(Method::Auto) => "recurrence",
            Self::Recurrence(Method::LargeX) => "recurrence/large-x",
            Self::Recurrence(Method::Kummer) => "recurrence/kummer",
            Self::NearOne => "near-one",
            Self::Oracle => "oracle",
        }
    }

    pub fn default_domain(self) -> Domain {
        let d = |xmin, xmax, taumin, taumax, mmin, mmax| Domain {
            xmin,
            xmax,
            taumin,
            taumax,
            mmin,
            mmax,
        };
        match self {
            Self::Wronskian | Self::Oracle => d(1.001, 100.0, 0.0, 100.0, 0, 100),
            Self::Recurrence(Method::Auto) => d(1.001, 100.0, 0.0, 100.0, 1, 100),
            Self::Recurrence(Method::LargeX) => d(1.2, 100.0, 0.0, 100.0, 1, 1),
            Self::Recurrence(Method::Kummer) => d(1.001, 1.05, 15.0, 100.0, 1, 1),
            Self::NearOne => d(1.0001, 1.2, 0.0, 100.0, 0, 0),
        }
    }

    pub fn default_threshold(self) -> f64 {
        match self {
            Self::Recurrence(Method::LargeX) | Self::Oracle => 5e-12,
            _ => 1e-12,
        }
    }

    pub fn default_budget(self) -> f64 {
        match self {
            Self::Oracle | Self::Recurrence(Method::LargeX) => 0.0,
            _ => 0.01,
        }
    }
}

/// Test quantities at one sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    pub x: f64,
    pub tau: f64,
    pub m: u32,
    pub err_wronskian: Option<f64>,
    pub err_rec1: Option<f64>,
    pub err_rec2: Option<f64>,
    pub err_min: Option<f64>,
    /// Error the suite judges by.
    pub err: f64,
    pub region: &'static str,
    pub status: EvalStatus,
}

impl VerificationRecord {
    fn failed(x: f64, tau: f64, m: u32, status: EvalStatus) -> Self {
        Self {
            x,
            tau,
            m,
            err_wronskian: None,
            err_rec1: None,
            err_rec2: None,
            err_min: None,
            err: f64::INFINITY,
            region: "none",
            status,
        }
    }

    fn recurrence(x: f64, tau: f64, m: u32, r: [Scaled; 3], region: &'static str) -> Self {
        let (e1, e2) = recurrence_errors(r[0], r[1], r[2], x, m, tau);
        let e = e1.min(e2);
        Self {
            x,
            tau,
            m,
            err_wronskian: None,
            err_rec1: Some(e1),
            err_rec2: Some(e2),
            err_min: Some(e),
            err: e,
            region,
            status: EvalStatus::Ok,
        }
    }
}

fn status_of(e: conical::Error) -> EvalStatus {
    EvalStatus::from(e)
}

pub fn wronskian_record(x: f64, tau: f64, m: u32, cfg: &NumericConfig) -> VerificationRecord {
    match conicpr_scaled(x, m, tau, cfg) {
        Ok(q) => {
            let e = wronskian_error(&q, x, m, tau);
            VerificationRecord {
                err_wronskian: Some(e),
                err: if e.is_nan() { f64::INFINITY } else { e },
                region: q.r_region.tag(),
                ..VerificationRecord::failed(x, tau, m, EvalStatus::Ok)
            }
        }
        Err(e) => VerificationRecord::failed(x, tau, m, status_of(e)),
    }
}

pub fn recurrence_record(x: f64, tau: f64, m: u32, method: Method, cfg: &NumericConfig) -> VerificationRecord {
    assert!(m >= 1, "the recurrence test needs m >= 1");
    let orders = [m - 1, m, m + 1];
    let values: Result<Vec<Scaled>, conical::Error> = match method {
        Method::Auto => orders
            .iter()
            .map(|&k| conicr_pair(x, k, tau, cfg).map(|p| p.rm))
            .collect(),
        Method::LargeX => orders
            .iter()
            .map(|&k| LargeXState::new(x, tau, k, cfg).map(|s| s.r_value().0))
            .collect(),
        Method::Kummer => orders
            .iter()
            .map(|&k| kummer_expansion(x, tau, k, KummerTerms::Fixed(cfg.kummer_terms)).map(|v| Scaled::from(v.0)))
            .collect(),
    };
    let region = match method {
        Method::Auto => conicr_pair(x, m, tau, cfg).map(|p| p.region.tag()).unwrap_or("none"),
        Method::LargeX => "large-x",
        Method::Kummer => "kummer",
    };
    match values {
        Ok(v) => VerificationRecord::recurrence(x, tau, m, [v[0], v[1], v[2]], region),
        Err(e) => VerificationRecord::failed(x, tau, m, status_of(e)),
    }
}

/// Whether the near-one suite samples the point: the series region of R.
pub fn in_near_one_region(x: f64, tau: f64, cfg: &NumericConfig) -> bool {
    x > 1.0 && x < cfg.x_largex_min && tau * ((x - 1.0) / 2.0).sqrt() <= cfg.series_cancellation_max
}

pub fn near_one_record(x: f64, tau: f64, cfg: &NumericConfig) -> VerificationRecord {
    match near_one_error(x, tau, cfg) {
        Ok(e) => VerificationRecord {
            err_wronskian: Some(e),
            err: e,
            region: "series",
            ..VerificationRecord::failed(x, tau, 0, EvalStatus::Ok)
        },
        Err(e) => VerificationRecord::failed(x, tau, 0, status_of(e)),
    }
}

pub fn oracle_record(line: &FixtureLine, cfg: &NumericConfig) -> VerificationRecord {
    let c = check_line(line);
    let (x, tau, m) = (line.x, line.tau, line.m);
    let region = if x < 1.0 {
        conicp_pair(x, m, tau, cfg).map(|p| p.region.tag()).unwrap_or("none")
    } else {
        conicr_pair(x, m, tau, cfg).map(|p| p.region.tag()).unwrap_or("none")
    };
    let status = if c
        .got
        .iter()
        .zip(line.expected())
        .any(|(g, w)| w.is_some() && g.is_none())
    {
        EvalStatus::OverUnderflow
    } else {
        EvalStatus::Ok
    };
    VerificationRecord {
        err: c.max_rel(),
        region,
        ..VerificationRecord::failed(x, tau, m, status)
    }
}

/// Settings of one sweep.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub suite: Suite,
    pub domain: Domain,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Sweep {
    pub fn new(suite: Suite, samples: usize, seed: u64) -> Self {
        Self {
            suite,
            domain: suite.default_domain(),
            samples,
            seed,
            threshold: suite.default_threshold(),
        }
    }

    /// Sample points in index order.
    pub fn points(&self, cfg: &NumericConfig) -> Vec<(f64, f64, u32)> {
        let sampler = Sampler::new(self.seed);
        if self.suite != Suite::NearOne {
            return (0..self.samples).map(|i| self.domain.map(sampler.unit(i))).collect();
        }
        let mut pts = Vec::with_capacity(self.samples);
        let mut i = 0;
        while pts.len() < self.samples && i < self.samples * MAX_DRAWS_PER_SAMPLE {
            let p = self.domain.map(sampler.unit(i));
            if in_near_one_region(p.0, p.1, cfg) {
                pts.push(p);
            }
            i += 1;
        }
        pts
    }

    /// Runs the sweep; records come back in point order.
    pub fn run(&self, cfg: &NumericConfig) -> Vec<VerificationRecord> {
        let pts = self.points(cfg);
        pts.par_iter()
            .map(|&(x, tau, m)| match self.suite {
                Suite::Wronskian => wronskian_record(x, tau, m, cfg),
                Suite::Recurrence(method) => recurrence_record(x, tau, m, method, cfg),
                Suite::NearOne => near_one_record(x, tau, cfg),
                Suite::Oracle => unreachable!("the oracle suite runs on the frozen grid"),
            })
            .collect()
    }
}

pub fn run_oracle(lines: &[FixtureLine], cfg: &NumericConfig) -> Vec<VerificationRecord> {
    lines.par_iter().map(|l| oracle_record(l, cfg)).collect()
}

/// Aggregate of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub max_err: f64,
    pub worst: Option<(f64, f64, u32)>,
    pub over: usize,
    pub fine: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(records: &[VerificationRecord], threshold: f64) -> Self {
        let mut s = Summary {
            count: records.len(),
            max_err: 0.0,
            worst: None,
            over: 0,
            fine: 0,
            failed: 0,
        };
        for r in records {
            if r.err > s.max_err || s.worst.is_none() {
                s.max_err = s.max_err.max(r.err);
                s.worst = Some((r.x, r.tau, r.m));
            }
            if r.err > threshold {
                s.over += 1;
            }
            if r.err <= FINE_LEVEL {
                s.fine += 1;
            }
            if !r.status.is_ok() {
                s.failed += 1;
            }
        }
        s
    }

    pub fn frac_over(&self) -> f64 {
        self.over as f64 / self.count.max(1) as f64
    }

    pub fn frac_fine(&self) -> f64 {
        self.fine as f64 / self.count.max(1) as f64
    }
}

/// Writes the CSV of every record above `threshold`, preceded by a comment
/// line carrying the sweep settings.
pub fn write_csv<W: Write>(out: W, comment: &str, records: &[VerificationRecord], threshold: f64) -> io::Result<()> {
    let mut out = out;
    writeln!(out, "# {comment}")?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["x", "tau", "m", "err", "region", "status"])?;
    for r in records.iter().filter(|r| r.err > threshold) {
        w.write_record([
            g17(r.x),
            g17(r.tau),
            r.m.to_string(),
            g17(r.err),
            r.region.to_string(),
            r.status.code().to_string(),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_invariants() {
        let cfg = NumericConfig::default();
        let r = recurrence_record(3.0, 10.0, 1, Method::LargeX, &cfg);
        let (e1, e2, e) = (r.err_rec1.unwrap(), r.err_rec2.unwrap(), r.err_min.unwrap());
        assert!(e <= e1 && e <= e2 && e >= 0.0);
        assert!(e < 5e-12);
        let w = wronskian_record(3.0, 10.0, 4, &cfg);
        assert!(w.err < 1e-12 && w.status.is_ok());
    }

    #[test]
    fn near_one_points_lie_in_the_series_region() {
        let cfg = NumericConfig::default();
        let s = Sweep::new(Suite::NearOne, 200, 5);
        let pts = s.points(&cfg);
        assert_eq!(pts.len(), 200);
        assert!(pts.iter().all(|p| in_near_one_region(p.0, p.1, &cfg)));
    }

    #[test]
    fn csv_lists_only_points_over_threshold() {
        let cfg = NumericConfig::default();
        let mut recs = vec![wronskian_record(2.0, 1.0, 0, &cfg)];
        recs.push(VerificationRecord::failed(1.5, 2.0, 3, EvalStatus::OverUnderflow));
        let mut buf = Vec::new();
        write_csv(&mut buf, "seed=1", &recs, 1e-12).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# seed=1\nx,tau,m,err,region,status\n1.5,2,3,inf,none,1\n");
    }
}
