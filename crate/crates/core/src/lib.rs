//! Time-changed Brownian motion `X_t = B^H_{V(t)}`: variance functions,
//! self-similar measures, path simulation and dimension estimators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod harness;
pub mod process;
pub mod self_similar;
pub mod variance;

pub use error::{Error, Result};
