use alloc::string::String;

use crate::profiles::{AckScheme, ProfileId, FIELD_NAMES};
use crate::throughput::AggregationLimit;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown profile `{0}` (expected one of: ah-short-header, ah-long-header, ac, n-2.4, n-5, a)")]
    UnknownProfile(String),

    #[error("profile {profile} has no radio preset `{preset}`")]
    UnknownPreset { profile: ProfileId, preset: String },

    #[error("unknown profile key `{0}`; valid keys are: {keys}", keys = ValidKeys)]
    UnknownField(String),

    #[error("invalid value for `{key}`: {reason}")]
    InvalidFieldValue {
        key: &'static str,
        reason: &'static str,
    },

    #[error("profile violates invariant: {0}")]
    InvalidProfile(&'static str),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("packet error rate {0} is outside [0, 1)")]
    InvalidPer(f64),

    #[error("link budget is not positive: tx power {tx_power_dbm} dBm <= sensitivity {sensitivity_dbm} dBm")]
    NonPositiveBudget {
        tx_power_dbm: f64,
        sensitivity_dbm: f64,
    },

    #[error("link closes nowhere: budget of {budget_db:.2} dB does not cover the loss at 1 m")]
    LinkClosesNowhere { budget_db: f64 },

    #[error("{scheme} is not supported by profile {profile}")]
    UnsupportedAckScheme {
        scheme: AckScheme,
        profile: ProfileId,
    },

    #[error("frame exceeds physical limit ({0})")]
    ExceedsPhysicalLimit(AggregationLimit),

    #[error("aggregating {k} MPDUs violates the {limit} limit")]
    InfeasibleAggregation { k: u32, limit: AggregationLimit },

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(&'static str),
}

struct ValidKeys;

impl core::fmt::Display for ValidKeys {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, key) in FIELD_NAMES.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(key)?;
        }
        Ok(())
    }
}
