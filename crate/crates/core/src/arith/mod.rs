//! Exact rationals and constructive reals.

mod creal;
mod rat;

pub use creal::{approx_compare, positive_margin, ArithOp, CReal, Verdict};
pub use rat::Rat;
