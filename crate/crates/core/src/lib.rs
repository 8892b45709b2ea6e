//! Entropy/information trade-offs for compressing a binary-classification
//! likelihood `W = P(Y = 1 | X)` into a discrete variable `Z`.
//!
//! The pipeline is: model or samples → uniformize `W` → `N` equal-mass
//! micro-bins → sort by `P(Y = 1 | bin)` → search contiguous groupings of the
//! sorted micro-bins for the maximal `I(Z, Y)` at each entropy `H(Z)`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod dib;
pub mod error;
pub mod exec;
pub mod frontier;
pub mod info;
pub mod models;
pub mod pipeline;
pub mod quad;
pub mod unit;

pub use error::{Error, Result};
pub use exec::Exec;
pub use info::{DiscreteJoint, ProbVector};
pub use models::ClassConditionalModel;
pub use pipeline::MicroBinModel;
