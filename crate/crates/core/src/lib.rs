//! Numerics for the Petz and minimal quantum Rényi divergences, the
//! conditional entropies built from them, pretty good measures, and a
//! randomized harness that checks the inequalities relating them.
//!
//! Logarithms are base 2 throughout; entropies are in bits.

pub mod divergence;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod matcore;
pub mod pretty_good;
pub mod report;
pub mod sdpsolve;
pub mod states;

pub use error::{Error, Result};
