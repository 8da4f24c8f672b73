//! Argument and result types shared by every evaluator.

use std::fmt;

/// Argument triple consumed by the evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: f64,
    pub m: i32,
    pub tau: f64,
}

impl EvalPoint {
    pub fn new(x: f64, m: i32, tau: f64) -> Self {
        Self { x, m, tau }
    }
}

/// Which routine a point is validated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    P,
    R,
    PR,
}

/// Status flag of an evaluation. The discriminants are the classic `ierr` codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum EvalStatus {
    Ok = 0,
    OverUnderflow = 1,
    OutOfRange = 2,
}

impl EvalStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_code(code: i32) -> Option<Self> {
        match code {
            0 => Some(Self::Ok),
            1 => Some(Self::OverUnderflow),
            2 => Some(Self::OutOfRange),
            _ => None,
        }
    }

    pub fn is_ok(self) -> bool {
        self == Self::Ok
    }
}

impl fmt::Display for EvalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Ok => "ok",
            Self::OverUnderflow => "overflow/underflow",
            Self::OutOfRange => "out of range",
        };
        f.write_str(s)
    }
}

/// Failure of an internal computation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("computation failed due to overflow/underflow or loss of accuracy")]
    OverUnderflow,
    #[error("arguments out of range")]
    OutOfRange,
}

impl From<Error> for EvalStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::OverUnderflow => EvalStatus::OverUnderflow,
            Error::OutOfRange => EvalStatus::OutOfRange,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Computation path that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    SeriesNear1,
    KummerLargeTau,
    LargeX,
    Recurrence,
    OdeMarch,
}

impl Region {
    pub fn tag(self) -> &'static str {
        match self {
            Self::SeriesNear1 => "series",
            Self::KummerLargeTau => "kummer",
            Self::LargeX => "large-x",
            Self::Recurrence => "recurrence",
            Self::OdeMarch => "march",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Single function value with its status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Internal relative error estimate.
    pub est_rel_err: f64,
    pub status: EvalStatus,
    pub region: Region,
}

impl EvalResult {
    pub(crate) fn failed(status: EvalStatus, region: Region) -> Self {
        Self {
            value: f64::NAN,
            est_rel_err: f64::INFINITY,
            status,
            region,
        }
    }
}

/// Tuning constants of the region dispatch.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericConfig {
    /// Cap on the number of terms of any convergent series.
    pub series_max_terms: usize,
    /// Fixed number of terms `N` (k = 0..=N) for the large-tau Kummer expansion
    /// when it is run in fixed-length mode, as in the expansion-accuracy sweeps.
    pub kummer_terms: usize,
    /// Upper bound on the adaptively truncated Kummer expansion used by `conicr`.
    pub kummer_max_terms: usize,
    /// Smallest tau at which the Kummer expansion is trusted.
    pub tau_kummer_min: f64,
    /// Near x = 1 the R series is used while tau*sqrt((x-1)/2) stays below this.
    pub series_cancellation_max: f64,
    /// Start of the large-x expansion.
    pub x_largex_min: f64,
    /// Largest order evaluated directly by the large-x expansion.
    pub largex_direct_max_order: i32,
    /// Natural-log magnitude above which a binary64 result counts as overflow.
    pub overflow_log_limit: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            series_max_terms: 200,
            kummer_terms: 7,
            kummer_max_terms: 20,
            tau_kummer_min: 6.0,
            series_cancellation_max: 3.0,
            x_largex_min: 1.2,
            largex_direct_max_order: 40,
            overflow_log_limit: 690.0,
        }
    }
}

/// Checks a point against the domain of the requested routine.
///
/// Pure and total: every input maps to exactly one status.
pub fn validate(point: EvalPoint, kind: FunctionKind) -> EvalStatus {
    let EvalPoint { x, m, tau } = point;
    if !x.is_finite() || !tau.is_finite() || m < 0 || tau < 0.0 {
        return EvalStatus::OutOfRange;
    }
    let in_domain = match kind {
        FunctionKind::P => x > -1.0,
        FunctionKind::R | FunctionKind::PR => x > 1.0,
    };
    if in_domain {
        EvalStatus::Ok
    } else {
        EvalStatus::OutOfRange
    }
}
