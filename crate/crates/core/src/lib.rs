//! Exact construction and verification toolkit for origami distributions:
//! recursive tripartite distributions whose secret-key (LOPC) and
//! entanglement (LOCC) distillation needs a fixed number of communication
//! rounds.
//!
//! Classical quantities are computed in exact rational arithmetic; the only
//! floating-point surfaces are entropies and the quantum state simulation.

pub mod dist;
pub mod channel;
pub mod common;
pub mod error;
pub mod info;
pub mod lopc;
pub mod quantum;
pub mod rank;
pub mod report;
pub mod structure;
pub(crate) mod serde_fraction;

pub use dist::{Event, OrigamiParams, Rational, TripartiteDistribution, Var};
pub use error::{Error, Result};
pub use report::{VerificationReport, Verdict};
