//! Orders on finitely generated groups at finite scale.
//!
//! The crate covers exact arithmetic in `Z^n`, the discrete Heisenberg group
//! and `SL_3(Z)`; strict orders restricted to finite windows; a complete
//! extension solver with replayable certificates; and window-level samplers
//! for invariant random orders together with Monte Carlo estimators.

pub mod constraints;
pub mod engine;
pub mod error;
pub mod group;
pub mod io;
pub mod order;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod sl3;
pub mod stats;
pub mod window;

pub use error::{Error, Result};
