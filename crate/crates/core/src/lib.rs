//! Conical (Mehler) functions P and R of degree -1/2 + i tau and integer
//! order m, with first derivatives.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod besseljy;
pub mod common;
pub mod conical_p;
pub mod conical_r;
mod dd;
pub mod gammakit;
pub mod ode;
pub mod scaled;
pub mod verify;

pub use common::{validate, Error, EvalPoint, EvalResult, EvalStatus, FunctionKind, NumericConfig, Region, Result};
pub use conical_p::{conicp, conicp_with, conicpr, conicpr_with, ConicPR};
pub use conical_r::{conicr, conicr_with};
pub use scaled::Scaled;
