//! Bounds and Monte Carlo simulation for discriminating QAM coherent states
//! with an adaptive displacement-feedback receiver.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod constellation;
pub mod error;
pub mod hermitian;
pub mod montecarlo;
pub mod receiver;

pub use error::{Error, Result};
