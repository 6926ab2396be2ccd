//! Analytical range and throughput models for IEEE 802.11ah against
//! 802.11a/n/ac.
//!
//! - [`profiles`]: MAC/PHY constants per amendment.
//! - [`propagation`]: TGah path-loss models and maximum range.
//! - [`throughput`]: single-link DCF throughput with and without A-MPDU.
//! - [`linksim`]: Monte Carlo check of the backoff expectation.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod linksim;
pub mod profiles;
pub mod propagation;
pub mod throughput;

pub use error::{Error, Result};
pub use profiles::{builtin_profile, AckScheme, GuardInterval, ProfileId, StandardProfile};
pub use propagation::{LinkBudget, PathLossKind, PathLossModel};
pub use throughput::{AggregationLimit, AggregationPlan, FrameSpec, ThroughputBreakdown};
