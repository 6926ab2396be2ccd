//! Payload × PER sweeps over the throughput model.

use std::fmt;
use std::str::FromStr;

use dot11ah_core::profiles::{
    builtin_profile, AckScheme, GuardInterval, ProfileId, StandardProfile,
};
use dot11ah_core::throughput::{
    throughput_ampdu, throughput_single, FrameSpec, ThroughputBreakdown,
};
use rayon::prelude::*;
use std::io::Write;

use crate::error::{Error, Result};
use crate::format::{plain, sig, sig6};
use crate::published::{deviation_pct, published_throughput};
use crate::range::{csv_writer, NA};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Off,
    Auto,
    Fixed(u32),
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(Aggregation::Off),
            "auto" => Ok(Aggregation::Auto),
            k => match k.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(Aggregation::Fixed(k)),
                _ => Err(Error::Usage(format!(
                    "aggregation must be off, auto or a subframe count >= 1, got `{s}`"
                ))),
            },
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregation::Off => f.write_str("off"),
            Aggregation::Auto => f.write_str("auto"),
            Aggregation::Fixed(k) => write!(f, "{k}"),
        }
    }
}

pub fn parse_gi(s: &str) -> Result<GuardInterval> {
    match s {
        "long" => Ok(GuardInterval::Long),
        "short" => Ok(GuardInterval::Short),
        _ => Err(Error::Usage(format!(
            "guard interval must be long or short, got `{s}`"
        ))),
    }
}

/// Inclusive payload range in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PayloadRange {
    pub start: u32,
    pub end: u32,
    pub step: u32,
}

impl PayloadRange {
    pub fn single(payload: u32) -> Self {
        PayloadRange {
            start: payload,
            end: payload,
            step: 1,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        (self.start..=self.end).step_by(self.step.max(1) as usize)
    }
}

/// Accepts `N`, `START:END` or `START:END:STEP`.
impl FromStr for PayloadRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Usage(format!(
                "payload must be N, START:END or START:END:STEP, got `{s}`"
            ))
        };
        let parts = s
            .split(':')
            .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match parts[..] {
            [n] => Ok(PayloadRange::single(n)),
            [start, end] => Ok(PayloadRange {
                start,
                end,
                step: 1,
            }),
            [start, end, step] => Ok(PayloadRange { start, end, step }),
            _ => Err(bad()),
        }
    }
}

pub const DEFAULT_PER_LIST: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
pub const MIN_SWEEP_PAYLOAD: u32 = 12;
pub const MAX_SWEEP_PAYLOAD: u32 = 1500;

/// Largest payload one unaggregated frame can carry, capped at 1500 bytes.
pub fn max_single_payload(profile: &StandardProfile) -> u32 {
    match profile.max_psdu_bytes {
        Some(cap) => cap
            .saturating_sub(profile.mac_llc_header_bytes)
            .min(MAX_SWEEP_PAYLOAD),
        None => MAX_SWEEP_PAYLOAD,
    }
}

pub fn default_payload_range(profile: &StandardProfile) -> PayloadRange {
    PayloadRange {
        start: MIN_SWEEP_PAYLOAD,
        end: max_single_payload(profile),
        step: 1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub profile_id: ProfileId,
    pub preset: Option<String>,
    pub payload: PayloadRange,
    pub per_list: Vec<f64>,
    pub aggregation: Aggregation,
    /// `None` uses the profile default (block ACK when aggregating).
    pub ack_scheme: Option<AckScheme>,
    pub delta_us: f64,
    pub gi: GuardInterval,
}

impl SweepSpec {
    pub fn new(profile_id: ProfileId) -> Self {
        SweepSpec {
            profile_id,
            preset: None,
            payload: default_payload_range(&builtin_profile(profile_id)),
            per_list: DEFAULT_PER_LIST.to_vec(),
            aggregation: Aggregation::Off,
            ack_scheme: None,
            delta_us: 0.0,
            gi: GuardInterval::Long,
        }
    }

    /// Applies preset and guard interval to `base` (the built-in profile when absent).
    pub fn resolve_profile(&self, base: Option<StandardProfile>) -> Result<StandardProfile> {
        let mut profile = base.unwrap_or_else(|| builtin_profile(self.profile_id));
        if let Some(preset) = &self.preset {
            profile = profile.with_preset(preset)?;
        }
        if self.gi == GuardInterval::Short {
            profile = profile.with_guard_interval(GuardInterval::Short)?;
        }
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.payload;
        if p.step == 0 {
            return Err(Error::Usage("payload step must be at least 1".into()));
        }
        if p.start > p.end {
            return Err(Error::Usage(format!(
                "payload range {}:{} is empty",
                p.start, p.end
            )));
        }
        if self.per_list.is_empty() {
            return Err(Error::Usage("PER list is empty".into()));
        }
        if let Some(per) = self.per_list.iter().find(|per| !(0.0..1.0).contains(*per)) {
            return Err(Error::Usage(format!("PER {per} is outside [0, 1)")));
        }
        if !(self.delta_us.is_finite() && self.delta_us >= 0.0) {
            return Err(Error::Usage(
                "delta-us must be a non-negative number".into(),
            ));
        }
        if self.aggregation != Aggregation::Off {
            if let Some(ack) = self.ack_scheme.filter(|a| *a != AckScheme::BlockAck) {
                return Err(Error::Usage(format!(
                    "aggregated frames are block-acknowledged, not {ack}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub payload_bytes: u32,
    pub per: f64,
    pub k: u32,
    pub breakdown: ThroughputBreakdown,
}

/// Evaluates every (PER, payload) cell. Rows are ordered by PER, then payload.
/// A cell the model rejects (oversized frame, infeasible K) fails the sweep.
pub fn run_sweep(profile: &StandardProfile, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let cells: Vec<(f64, u32)> = spec
        .per_list
        .iter()
        .flat_map(|&per| spec.payload.iter().map(move |payload| (per, payload)))
        .collect();
    cells
        .into_par_iter()
        .map(|(per, payload)| evaluate(profile, spec, payload, per))
        .collect()
}

fn evaluate(
    profile: &StandardProfile,
    spec: &SweepSpec,
    payload: u32,
    per: f64,
) -> Result<SweepRow> {
    let (breakdown, k) = match spec.aggregation {
        Aggregation::Off => {
            let mut frame = FrameSpec::for_profile(profile, payload);
            if let Some(ack) = spec.ack_scheme {
                frame = frame.with_ack(ack);
            }
            (throughput_single(profile, &frame, per, spec.delta_us)?, 1)
        }
        Aggregation::Auto | Aggregation::Fixed(_) => {
            let k = match spec.aggregation {
                Aggregation::Fixed(k) => Some(k),
                _ => None,
            };
            let (b, plan) = throughput_ampdu(profile, payload, per, k, spec.delta_us)?;
            (b, plan.k)
        }
    };
    Ok(SweepRow {
        payload_bytes: payload,
        per,
        k,
        breakdown,
    })
}

pub const CSV_HEADER: [&str; 8] = [
    "payload_bytes",
    "per",
    "s_mbps",
    "t_data_us",
    "t_ack_us",
    "t_backoff_us",
    "t_message_us",
    "k",
];

impl SweepRow {
    /// The row as written to CSV; plots reuse these strings.
    pub fn fields(&self) -> [String; 8] {
        let b = &self.breakdown;
        [
            self.payload_bytes.to_string(),
            plain(self.per),
            sig6(b.s_mbps),
            sig6(b.t_data_us),
            sig6(b.t_ack_us),
            sig6(b.t_backoff_us),
            sig6(b.t_message_us),
            self.k.to_string(),
        ]
    }
}

/// Writes the sweep. With `compare`, `published_mbps,dev_pct` follow each
/// row, empty where nothing was published for that cell.
pub fn write_csv<W: Write>(
    out: W,
    rows: &[SweepRow],
    spec: &SweepSpec,
    compare: bool,
) -> Result<()> {
    let mut w = csv_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if compare {
        header.extend(["published_mbps", "dev_pct"]);
    }
    w.write_record(&header)?;
    for row in rows {
        let mut record = row.fields().to_vec();
        if compare {
            let k = (spec.aggregation != Aggregation::Off).then_some(row.k);
            match published_throughput(spec.profile_id, k, row.payload_bytes, row.per) {
                Some(p) => {
                    record.push(sig6(p.s_mbps));
                    record.push(sig(deviation_pct(row.breakdown.s_mbps, p.s_mbps), 3));
                }
                None => record.extend([NA.to_owned(), NA.to_owned()]),
            }
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payload_range_parsing() {
        assert_eq!(
            "475".parse::<PayloadRange>().unwrap(),
            PayloadRange::single(475)
        );
        assert_eq!(
            "12:1500:4".parse::<PayloadRange>().unwrap(),
            PayloadRange {
                start: 12,
                end: 1500,
                step: 4
            }
        );
        assert!("12:".parse::<PayloadRange>().is_err());
        assert!("1:2:3:4".parse::<PayloadRange>().is_err());
        let r = PayloadRange {
            start: 12,
            end: 20,
            step: 4,
        };
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![12, 16, 20]);
    }

    #[test]
    fn aggregation_parsing() {
        assert_eq!("auto".parse::<Aggregation>().unwrap(), Aggregation::Auto);
        assert_eq!("9".parse::<Aggregation>().unwrap(), Aggregation::Fixed(9));
        assert!("0".parse::<Aggregation>().is_err());
        assert!("max".parse::<Aggregation>().is_err());
    }

    #[test]
    fn default_ranges() {
        assert_eq!(
            default_payload_range(&builtin_profile(ProfileId::AhLongHeader)).end,
            475
        );
        assert_eq!(
            default_payload_range(&builtin_profile(ProfileId::AhShortHeader)).end,
            485
        );
        assert_eq!(
            default_payload_range(&builtin_profile(ProfileId::Ac)).end,
            1500
        );
    }

    #[test]
    fn degenerate_sweep_has_one_row() {
        let spec = SweepSpec {
            payload: PayloadRange::single(100),
            per_list: vec![0.0],
            ..SweepSpec::new(ProfileId::A)
        };
        let p = spec.resolve_profile(None).unwrap();
        assert_eq!(run_sweep(&p, &spec).unwrap().len(), 1);
    }

    #[test]
    fn invalid_specs() {
        let ah = SweepSpec::new(ProfileId::AhLongHeader);
        let p = ah.resolve_profile(None).unwrap();
        let too_big = SweepSpec {
            payload: PayloadRange {
                start: 12,
                end: 1500,
                step: 1,
            },
            ..ah.clone()
        };
        assert!(run_sweep(&p, &too_big).is_err());
        let bad_per = SweepSpec {
            per_list: vec![1.0],
            ..ah.clone()
        };
        assert!(matches!(run_sweep(&p, &bad_per), Err(Error::Usage(_))));
        let bad_ack = SweepSpec {
            aggregation: Aggregation::Auto,
            ack_scheme: Some(AckScheme::NormalAck),
            ..ah.clone()
        };
        assert!(bad_ack.validate().is_err());
        let zero_step = SweepSpec {
            payload: PayloadRange {
                start: 12,
                end: 20,
                step: 0,
            },
            ..ah
        };
        assert!(zero_step.validate().is_err());
    }

    #[test]
    fn ampdu_k_is_non_increasing() {
        let spec = SweepSpec {
            aggregation: Aggregation::Auto,
            per_list: vec![0.0],
            ..SweepSpec::new(ProfileId::Ac)
        };
        let p = spec.resolve_profile(None).unwrap();
        let rows = run_sweep(&p, &spec).unwrap();
        assert_eq!(rows.len(), 1489);
        assert!(rows.windows(2).all(|w| w[1].k <= w[0].k));
        assert_eq!(rows[0].k, 64);
    }

    #[test]
    fn csv_layout() {
        let spec = SweepSpec {
            payload: PayloadRange::single(475),
            per_list: vec![0.0, 0.5],
            ..SweepSpec::new(ProfileId::AhLongHeader)
        };
        let p = spec.resolve_profile(None).unwrap();
        let rows = run_sweep(&p, &spec).unwrap();
        let mut out = Vec::new();
        write_csv(&mut out, &rows, &spec, true).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "payload_bytes,per,s_mbps,t_data_us,t_ack_us,t_backoff_us,t_message_us,k,published_mbps,dev_pct"
        );
        assert!(lines[1].starts_with("475,0,0.126103,"), "{}", lines[1]);
        assert!(lines[1].ends_with(",1,0.126000,0.0821"), "{}", lines[1]);
        assert!(lines[2].starts_with("475,0.5,"));
    }
}
