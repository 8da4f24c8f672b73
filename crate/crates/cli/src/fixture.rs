//! Fixture files: whitespace-separated `x m tau pm pmd rm rmd` lines with `#`
//! comments. Lines with x < 1 carry `nan` for the R columns.

use std::fmt;

use conical::conical_p::conicp_pair;
use conical::{conicpr, NumericConfig};

/// Relative tolerance of the fixture comparison.
pub const REL_TOL: f64 = 5e-12;
/// Absolute floor for values that vanish.
pub const ABS_TOL: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureLine {
    pub line_no: usize,
    pub x: f64,
    pub m: u32,
    pub tau: f64,
    pub pm: f64,
    pub pmd: f64,
    pub rm: Option<f64>,
    pub rmd: Option<f64>,
}

impl FixtureLine {
    pub fn expected(&self) -> [Option<f64>; 4] {
        [Some(self.pm), Some(self.pmd), self.rm, self.rmd]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Empty,
    Line { line_no: usize, reason: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => f.write_str("fixture contains no data lines"),
            Self::Line { line_no, reason } => write!(f, "line {line_no}: {reason}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn parse_line(line_no: usize, text: &str) -> Result<FixtureLine, ParseError> {
    let err = |reason: String| ParseError::Line { line_no, reason };
    let cols: Vec<&str> = text.split_whitespace().collect();
    if cols.len() != 7 {
        return Err(err(format!("expected 7 columns, found {}", cols.len())));
    }
    let num = |i: usize| {
        cols[i]
            .parse::<f64>()
            .map_err(|e| err(format!("column {}: {e}", i + 1)))
    };
    let m = cols[1].parse::<u32>().map_err(|e| err(format!("column 2: {e}")))?;
    let (x, tau, pm, pmd, rm, rmd) = (num(0)?, num(2)?, num(3)?, num(4)?, num(5)?, num(6)?);
    if !x.is_finite() || !tau.is_finite() || !pm.is_finite() || !pmd.is_finite() {
        return Err(err("x, tau, pm and pmd must be finite".into()));
    }
    let opt = |v: f64| if v.is_nan() { None } else { Some(v) };
    let (rm, rmd) = (opt(rm), opt(rmd));
    if x > 1.0 && (rm.is_none() || rmd.is_none()) {
        return Err(err("rm and rmd are required for x > 1".into()));
    }
    Ok(FixtureLine {
        line_no,
        x,
        m,
        tau,
        pm,
        pmd,
        rm,
        rmd,
    })
}

/// Parses a fixture, rejecting files without any data line.
pub fn parse(text: &str) -> Result<Vec<FixtureLine>, ParseError> {
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| parse_line(n, l))
        .collect::<Result<Vec<_>, _>>()?;
    if lines.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(lines)
}

/// Outcome of recomputing one fixture line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineCheck {
    pub line: FixtureLine,
    /// Recomputed pm, pmd, rm, rmd; `None` where not applicable.
    pub got: [Option<f64>; 4],
    /// Relative deviations, infinite where the evaluation failed.
    pub rel: [f64; 4],
    pub pass: bool,
}

impl LineCheck {
    pub fn max_rel(&self) -> f64 {
        self.rel.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_rel_values(&self) -> f64 {
        self.rel[0].max(self.rel[2])
    }

    pub fn max_rel_derivs(&self) -> f64 {
        self.rel[1].max(self.rel[3])
    }
}

/// pm, pmd, rm, rmd at a point; the R entries are `None` for x < 1.
pub fn evaluate(x: f64, m: u32, tau: f64) -> [Option<f64>; 4] {
    if x < 1.0 {
        let v = conicp_pair(x, m, tau, &NumericConfig::default()).ok();
        let pm = v.and_then(|v| v.pm.to_f64());
        let pmd = v.and_then(|v| v.pmd.to_f64());
        return [pm, pmd, None, None];
    }
    let q = conicpr(x, m as i32, tau);
    if q.status.is_ok() {
        [Some(q.pm), Some(q.pmd), Some(q.rm), Some(q.rmd)]
    } else {
        [None; 4]
    }
}

fn deviation(got: Option<f64>, want: Option<f64>) -> f64 {
    match (got, want) {
        (_, None) => 0.0,
        (None, Some(_)) => f64::INFINITY,
        (Some(g), Some(w)) => {
            let d = (g - w).abs();
            if d <= ABS_TOL {
                0.0
            } else {
                d / w.abs()
            }
        }
    }
}

pub fn check_line(line: &FixtureLine) -> LineCheck {
    let got = evaluate(line.x, line.m, line.tau);
    let want = line.expected();
    let rel: [f64; 4] = std::array::from_fn(|i| deviation(got[i], want[i]));
    let pass = rel.iter().all(|&r| r <= REL_TOL);
    LineCheck {
        line: *line,
        got,
        rel,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_nan_columns() {
        let text = "# header\n\n0.5 3 4 564.8 -3347.6 nan nan\n2 1 5 -0.52 3.79 1.97 1.72\n";
        let lines = parse(text).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].rm, None);
        assert_eq!(lines[1].line_no, 4);
        assert_eq!(lines[1].rmd, Some(1.72));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse("# only comments\n"), Err(ParseError::Empty));
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert!(matches!(
            parse("1.5 0 1 1 2 3"),
            Err(ParseError::Line { line_no: 1, .. })
        ));
        assert!(matches!(parse("1.5 x 1 1 2 3 4"), Err(ParseError::Line { .. })));
        assert!(matches!(parse("1.5 0 1 1 2 nan nan"), Err(ParseError::Line { .. })));
    }

    #[test]
    fn tolerance_rule() {
        assert_eq!(deviation(Some(1.5), Some(2.0)), 0.25);
        assert_eq!(deviation(Some(-3.0), Some(-2.0)), 0.5);
        assert_eq!(deviation(Some(1e-310), Some(0.0)), 0.0);
        assert_eq!(deviation(None, Some(1.0)), f64::INFINITY);
        assert_eq!(deviation(None, None), 0.0);
    }
}
