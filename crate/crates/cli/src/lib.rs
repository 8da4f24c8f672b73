//! Front end of the conical function library: point evaluation, the accuracy
//! sweeps, failure maps and the fixture comparison.

pub mod fixture;
pub mod format;
pub mod sample;
pub mod suite;

/// Oracle grid shipped with the crate.
pub const GRID200: &str = include_str!("../data/grid200.txt");
/// Twenty-point fixture shipped with the crate.
pub const FIXTURE20: &str = include_str!("../data/fixture20.txt");
