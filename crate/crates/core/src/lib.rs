//! Exponential vector spaces as an executable contract.

pub mod error;
pub mod evs;
pub mod instances;
pub mod metric;
pub mod norm;
pub mod order;
pub mod rational;

pub use error::{Error, Result};
pub use rational::{q, Rational, Scalar};
