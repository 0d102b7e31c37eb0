//! Exact and high-precision verification of alternating convolution
//! identities for Catalan numbers and central binomial coefficients, the
//! confluent hypergeometric product formulae behind them, and their
//! double-integral representations.

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod hyperseries;
pub mod identities;
pub mod numerics;

pub use error::{Error, Result};
