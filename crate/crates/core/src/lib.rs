//! Achievable rates and upper bounds for the primitive relay channel.
//!
//! * [`info`]: exact entropy and mutual information on small joint tables.
//! * [`scalar_opt`]: grid plus golden-section maximization on an interval.
//! * [`erasure`]: closed forms for the erasure relay channel.
//! * [`general`]: the same rates evaluated on arbitrary finite-alphabet models.
//! * [`chain_sim`]: Monte-Carlo run of the two-block chaining scheme.
//! * [`sweep`]: tables of every bound over a range of relay-link capacities.

pub mod chain_sim;
pub mod erasure;
pub mod error;
pub mod general;
pub mod info;
mod report;
pub mod scalar_opt;
pub mod sweep;

pub use erasure::ErasureRelayParams;
pub use error::{RelayError, Result};
pub use report::BoundReport;
