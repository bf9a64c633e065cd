//! Almost-everywhere convergence diagnostics for sequences of measurable functions.
//!
//! A sequence is tested on a discretized probability space by window
//! functionals such as κ_n^m = ∫ φ(max_{k=n..m} |f_k − f_∞|) dν, whose tails
//! vanish exactly when the sequence converges almost everywhere.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod corpus;
pub mod criterion;
pub mod error;
pub mod fourier;
pub mod measure;
pub mod report;
pub mod sequence;
pub mod spaces;
pub mod trial;

pub use error::{Error, Result};
