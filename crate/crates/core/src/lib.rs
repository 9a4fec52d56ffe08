//! Distributed fusion estimation for tessarine signals observed through fading sensors.
//!
//! Signals are described by a factorization of their augmented pseudo-autocorrelation.
//! Under T_k-properness the same estimation engine runs on `k·n` components instead of `4n`.

pub mod algebra;
pub mod error;
pub mod estimator;
pub mod fusion;
pub mod models;
pub mod random;
pub mod sensing;
pub mod simkit;

pub use error::{Error, Result};

/// Library version recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
