//! File formats, sweeps, reports and the command-line front end for the
//! `dot11ah-core` models.

pub mod error;
pub mod format;
pub mod published;
pub mod range;
pub mod reproduce;
pub mod scenario;
pub mod svg;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
