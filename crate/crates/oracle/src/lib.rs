//! Extended-precision reference evaluators for the conical functions.
//!
//! Everything here trades speed for digits; results are frozen into fixture
//! files and never used on a hot path.

pub mod bessel;
pub mod bigreal;
pub mod conical;
pub mod gamma;

pub use bigreal::{with_digits, BigComplex, BigReal};
