//! Dispersion of labeled mobile robots on a dynamic ring.
//!
//! [`ring`] holds the configuration model and move rule, [`algorithms`] the
//! per-robot policies, [`adversary`] the dynamism generators, [`scheduler`]
//! the synchronous round loop and [`verifier`] the exhaustive game search.

pub mod adversary;
pub mod algorithms;
pub mod chain;
pub mod cli;
pub mod error;
pub mod ring;
pub mod scheduler;
pub mod verifier;
pub mod view;
