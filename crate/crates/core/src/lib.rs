//! Optimal time allocation for a wireless-powered cognitive radio slot.
//!
//! A primary base station first powers every node wirelessly, then the
//! primary user and `N` secondary pairs transmit in turn, each also
//! harvesting from the others' transmissions. This crate models that slot,
//! computes the throughput-maximising allocation subject to a minimum
//! primary rate, and ships independent numerical oracles and baseline
//! schemes to check it against.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the double-precision instantiation used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baselines;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SystemParams64 = model::SystemParams<f64>;
pub type Point64 = model::Point<f64>;
pub type Topology64 = model::Topology<f64>;
pub type ChannelGains64 = model::ChannelGains<f64>;
pub type GammaVector64 = model::GammaVector<f64>;
pub type TimeAllocation64 = model::TimeAllocation<f64>;
pub type Solution64 = solver::Solution<f64>;
pub type SolverOutcome64 = solver::SolverOutcome<f64>;
pub type GslsConfig64 = solver::GslsConfig<f64>;
pub type KktReport64 = oracle::KktReport<f64>;
pub type SchemeReport64 = baselines::SchemeReport<f64>;
