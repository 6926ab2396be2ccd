//! Single-link DCF throughput: symbol counting, frame airtime, expected
//! backoff under packet errors, and A-MPDU aggregation.
//!
//! Durations are in microseconds and sizes in octets, so `8·bytes / µs`
//! is directly in Mbps.

use core::fmt;

use crate::error::{Error, Result};
use crate::profiles::{AckScheme, StandardProfile, AMPDU_DELIMITER_BYTES, MAX_BACKOFF_STAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameSpec {
    pub payload_bytes: u32,
    pub header_bytes: u32,
    pub ack_scheme: AckScheme,
}

impl FrameSpec {
    /// A frame using the profile's header length and default ACK scheme.
    pub fn for_profile(profile: &StandardProfile, payload_bytes: u32) -> Self {
        FrameSpec {
            payload_bytes,
            header_bytes: profile.mac_llc_header_bytes,
            ack_scheme: profile.ack_scheme,
        }
    }

    pub fn with_ack(self, ack_scheme: AckScheme) -> Self {
        FrameSpec { ack_scheme, ..self }
    }

    pub fn mpdu_bytes(&self) -> u32 {
        self.header_bytes + self.payload_bytes
    }
}

/// Which physical constraint capped an aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregationLimit {
    PsduBytes,
    PpduDuration,
    SubframeCap,
    None,
}

impl AggregationLimit {
    pub fn label(self) -> &'static str {
        match self {
            AggregationLimit::PsduBytes => "psdu-bytes",
            AggregationLimit::PpduDuration => "ppdu-duration",
            AggregationLimit::SubframeCap => "subframe-cap",
            AggregationLimit::None => "none",
        }
    }
}

impl fmt::Display for AggregationLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AggregationPlan {
    pub k: u32,
    pub delimiter_bytes: u32,
    pub binding_limit: AggregationLimit,
}

/// Throughput of one frame-exchange cycle and its additive time components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputBreakdown {
    pub s_mbps: f64,
    pub difs_us: f64,
    pub t_data_us: f64,
    pub sifs_us: f64,
    pub t_ack_us: f64,
    pub t_backoff_us: f64,
    pub t_message_us: f64,
    pub n_sym: u64,
    pub per: f64,
    pub delta_us: f64,
}

impl ThroughputBreakdown {
    /// `DIFS + T_DATA + SIFS + T_ACK + T_BACKOFF + 2δ`, summed in that order.
    pub fn message_time(
        difs: f64,
        data: f64,
        sifs: f64,
        ack: f64,
        backoff: f64,
        delta: f64,
    ) -> f64 {
        difs + data + sifs + ack + backoff + 2.0 * delta
    }
}

fn check_per(per: f64) -> Result<()> {
    if (0.0..1.0).contains(&per) {
        Ok(())
    } else {
        Err(Error::InvalidPer(per))
    }
}

fn check_delta(delta_us: f64) -> Result<()> {
    if delta_us.is_finite() && delta_us >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(
            "propagation delay must be a non-negative duration",
        ))
    }
}

fn symbols_for_bits(profile: &StandardProfile, bits: u64) -> u64 {
    bits.div_ceil(u64::from(profile.bits_per_symbol))
}

/// Data symbols needed for a PSDU of `total_mpdu_bytes` octets.
pub fn n_sym(profile: &StandardProfile, total_mpdu_bytes: u32) -> u64 {
    symbols_for_bits(
        profile,
        u64::from(profile.service_tail_bits) + 8 * u64::from(total_mpdu_bytes),
    )
}

/// Data symbols of an A-MPDU of `k` equal subframes.
pub fn n_sym_ampdu(profile: &StandardProfile, k: u32, payload_bytes: u32) -> u64 {
    let k = u64::from(k.max(1));
    let mpdu = u64::from(profile.mac_llc_header_bytes + payload_bytes);
    let delimiters = (k - 1) * u64::from(AMPDU_DELIMITER_BYTES) * 8;
    symbols_for_bits(
        profile,
        8 * k * mpdu + u64::from(profile.service_tail_bits) + delimiters,
    )
}

/// PSDU octets of an A-MPDU of `k` subframes.
pub fn ampdu_psdu_bytes(profile: &StandardProfile, k: u32, payload_bytes: u32) -> u64 {
    let k = u64::from(k);
    k * u64::from(profile.mac_llc_header_bytes + payload_bytes)
        + k.saturating_sub(1) * u64::from(AMPDU_DELIMITER_BYTES)
}

/// Preamble, header and data symbols; the quantity the PPDU duration cap limits.
pub fn ppdu_duration(profile: &StandardProfile, n_sym: u64) -> f64 {
    profile.t_preamble_header_us + profile.t_sym_us * n_sym as f64
}

fn airtime(profile: &StandardProfile, n_sym: u64) -> f64 {
    ppdu_duration(profile, n_sym) + profile.signal_extension_us
}

/// Airtime of a PPDU carrying `total_mpdu_bytes`, including any signal extension.
pub fn t_data(profile: &StandardProfile, total_mpdu_bytes: u32) -> f64 {
    airtime(profile, n_sym(profile, total_mpdu_bytes))
}

pub fn t_ack(profile: &StandardProfile, scheme: AckScheme) -> Result<f64> {
    match scheme {
        AckScheme::NormalAck => Ok(t_data(profile, profile.ack_bytes)),
        AckScheme::NdpAck if profile.id.is_s1g() => Ok(airtime(profile, 0)),
        AckScheme::NdpAck => Err(Error::UnsupportedAckScheme {
            scheme,
            profile: profile.id,
        }),
        AckScheme::BlockAck => Ok(t_data(profile, profile.ba_bytes)),
    }
}

/// Contention window at transmission attempt `stage` (1-based): doubles from
/// `cw_min` below [`MAX_BACKOFF_STAGE`], `cw_max` from that stage on.
pub fn stage_window(profile: &StandardProfile, stage: u32) -> u32 {
    assert!(stage >= 1, "backoff stages start at 1");
    if stage < MAX_BACKOFF_STAGE {
        (1u32 << (stage - 1)) * (profile.cw_min + 1) - 1
    } else {
        profile.cw_max
    }
}

/// Expected backoff of the delivering attempt, in slots.
///
/// The attempt index is geometric with success probability `1 - per`. The
/// stages below [`MAX_BACKOFF_STAGE`] are summed explicitly; every later
/// stage draws from `cw_max`, and their probabilities sum to
/// `per^(MAX_BACKOFF_STAGE - 1)`.
pub fn expected_backoff_slots(profile: &StandardProfile, per: f64) -> Result<f64> {
    check_per(per)?;
    let mut slots = 0.0;
    let mut reach = 1.0; // per^(i-1)
    for stage in 1..MAX_BACKOFF_STAGE {
        slots += (1.0 - per) * reach * f64::from(stage_window(profile, stage)) / 2.0;
        reach *= per;
    }
    slots += reach * f64::from(profile.cw_max) / 2.0;
    Ok(slots)
}

/// Expected backoff in microseconds.
pub fn expected_backoff(profile: &StandardProfile, per: f64) -> Result<f64> {
    Ok(expected_backoff_slots(profile, per)? * profile.t_slot_us)
}

fn check_single_frame(profile: &StandardProfile, frame: &FrameSpec) -> Result<u64> {
    if let Some(cap) = profile.max_psdu_bytes {
        if frame.mpdu_bytes() > cap {
            return Err(Error::ExceedsPhysicalLimit(AggregationLimit::PsduBytes));
        }
    }
    let symbols = n_sym(profile, frame.mpdu_bytes());
    if let Some(cap) = profile.max_ppdu_duration_us {
        if ppdu_duration(profile, symbols) > cap {
            return Err(Error::ExceedsPhysicalLimit(AggregationLimit::PpduDuration));
        }
    }
    Ok(symbols)
}

fn breakdown(
    profile: &StandardProfile,
    delivered_bytes: f64,
    symbols: u64,
    t_ack_us: f64,
    per: f64,
    delta_us: f64,
) -> Result<ThroughputBreakdown> {
    check_per(per)?;
    check_delta(delta_us)?;
    let t_data_us = airtime(profile, symbols);
    let t_backoff_us = expected_backoff(profile, per)?;
    let t_message_us = ThroughputBreakdown::message_time(
        profile.difs_us,
        t_data_us,
        profile.sifs_us,
        t_ack_us,
        t_backoff_us,
        delta_us,
    );
    Ok(ThroughputBreakdown {
        s_mbps: (1.0 - per) * 8.0 * delivered_bytes / t_message_us,
        difs_us: profile.difs_us,
        t_data_us,
        sifs_us: profile.sifs_us,
        t_ack_us,
        t_backoff_us,
        t_message_us,
        n_sym: symbols,
        per,
        delta_us,
    })
}

/// Throughput of unaggregated frames. Errors only scale the numerator by
/// `1 - per` and lengthen the backoff; retransmitted airtime is not added,
/// and ACK errors are neglected.
pub fn throughput_single(
    profile: &StandardProfile,
    frame: &FrameSpec,
    per: f64,
    delta_us: f64,
) -> Result<ThroughputBreakdown> {
    check_per(per)?;
    let symbols = check_single_frame(profile, frame)?;
    let ack = t_ack(profile, frame.ack_scheme)?;
    breakdown(
        profile,
        f64::from(frame.payload_bytes),
        symbols,
        ack,
        per,
        delta_us,
    )
}

/// First limit that an aggregate of `k` subframes violates, if any.
pub fn violated_limit(
    profile: &StandardProfile,
    k: u32,
    payload_bytes: u32,
) -> Option<AggregationLimit> {
    if let Some(cap) = profile.max_psdu_bytes {
        if ampdu_psdu_bytes(profile, k, payload_bytes) > u64::from(cap) {
            return Some(AggregationLimit::PsduBytes);
        }
    }
    if let Some(cap) = profile.max_ppdu_duration_us {
        if ppdu_duration(profile, n_sym_ampdu(profile, k, payload_bytes)) > cap {
            return Some(AggregationLimit::PpduDuration);
        }
    }
    if k > profile.max_ampdu_subframes {
        return Some(AggregationLimit::SubframeCap);
    }
    None
}

/// Largest number of equal subframes that fits the profile's limits.
pub fn max_aggregation(profile: &StandardProfile, payload_bytes: u32) -> Result<AggregationPlan> {
    if payload_bytes == 0 {
        return Err(Error::Domain(
            "aggregation needs a payload of at least 1 byte",
        ));
    }
    if let Some(limit) = violated_limit(profile, 1, payload_bytes) {
        return Err(Error::ExceedsPhysicalLimit(limit));
    }
    // Every limit is monotone in k, so the first violation ends the search.
    let mut k = 1;
    loop {
        if let Some(binding_limit) = violated_limit(profile, k + 1, payload_bytes) {
            return Ok(AggregationPlan {
                k,
                delimiter_bytes: AMPDU_DELIMITER_BYTES,
                binding_limit,
            });
        }
        k += 1;
    }
}

/// Validates a caller-chosen subframe count.
pub fn check_aggregation(
    profile: &StandardProfile,
    payload_bytes: u32,
    k: u32,
) -> Result<AggregationPlan> {
    if k == 0 {
        return Err(Error::Domain("aggregate needs at least one subframe"));
    }
    if let Some(limit) = violated_limit(profile, k, payload_bytes) {
        return Err(Error::InfeasibleAggregation { k, limit });
    }
    let binding_limit =
        violated_limit(profile, k + 1, payload_bytes).unwrap_or(AggregationLimit::None);
    Ok(AggregationPlan {
        k,
        delimiter_bytes: AMPDU_DELIMITER_BYTES,
        binding_limit,
    })
}

/// A-MPDU throughput for `k` subframes without checking the aggregation
/// limits. Use [`throughput_ampdu`] unless the limits are deliberately
/// being set aside.
pub fn ampdu_breakdown(
    profile: &StandardProfile,
    payload_bytes: u32,
    per: f64,
    k: u32,
    delta_us: f64,
) -> Result<ThroughputBreakdown> {
    if k == 0 {
        return Err(Error::Domain("aggregate needs at least one subframe"));
    }
    let symbols = n_sym_ampdu(profile, k, payload_bytes);
    let ack = t_ack(profile, AckScheme::BlockAck)?;
    breakdown(
        profile,
        f64::from(payload_bytes) * f64::from(k),
        symbols,
        ack,
        per,
        delta_us,
    )
}

/// A-MPDU throughput with a block ACK that is always received. `k = None`
/// picks the largest feasible aggregate.
pub fn throughput_ampdu(
    profile: &StandardProfile,
    payload_bytes: u32,
    per: f64,
    k: Option<u32>,
    delta_us: f64,
) -> Result<(ThroughputBreakdown, AggregationPlan)> {
    check_per(per)?;
    let plan = match k {
        Some(k) => check_aggregation(profile, payload_bytes, k)?,
        None => max_aggregation(profile, payload_bytes)?,
    };
    let b = ampdu_breakdown(profile, payload_bytes, per, plan.k, delta_us)?;
    Ok((b, plan))
}
