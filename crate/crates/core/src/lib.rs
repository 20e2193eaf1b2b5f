//! Exact-arithmetic compacts in complete metric spaces and extraction of
//! uniform-continuity moduli from image-compact oracles.

pub mod arith;
pub mod catalog;
pub mod compact;
pub mod error;
pub mod list;
pub mod maps;
pub mod metric;
pub mod modulus;
pub mod sampling;

pub use arith::{approx_compare, ArithOp, CReal, Rat, Verdict};
pub use compact::{Compact, Component, SplitResult};
pub use error::{Error, Result};
pub use list::FiniteList;
pub use maps::{EffectiveMap, ImageOracle, ModulusImageOracle, UniformModulus};
pub use metric::{MetricSpace, Point};
pub use modulus::{ClassCertificate, Extractor, TraceEvent};
