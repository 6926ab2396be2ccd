//! Per-amendment MAC/PHY parameter sets.
//!
//! Each [`StandardProfile`] carries the timing, framing and radio constants
//! for the most robust single-stream configuration of one amendment. The
//! two 802.11ah profiles differ only in MAC header length. Amendments with
//! two regulatory power levels in the 5 GHz band share one profile and
//! expose the levels as [`RadioPreset`]s.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::propagation::LinkBudget;

/// Highest backoff stage with a doubling window; stages at or beyond it use `cw_max`.
pub const MAX_BACKOFF_STAGE: u32 = 6;

/// Octets of the delimiter preceding each A-MPDU subframe.
pub const AMPDU_DELIMITER_BYTES: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProfileId {
    AhShortHeader,
    AhLongHeader,
    Ac,
    N24,
    N5,
    A,
}

impl ProfileId {
    pub const ALL: [ProfileId; 6] = [
        ProfileId::AhShortHeader,
        ProfileId::AhLongHeader,
        ProfileId::Ac,
        ProfileId::N24,
        ProfileId::N5,
        ProfileId::A,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProfileId::AhShortHeader => "ah-short-header",
            ProfileId::AhLongHeader => "ah-long-header",
            ProfileId::Ac => "ac",
            ProfileId::N24 => "n-2.4",
            ProfileId::N5 => "n-5",
            ProfileId::A => "a",
        }
    }

    /// Sub-1 GHz (802.11ah) profiles.
    pub fn is_s1g(self) -> bool {
        matches!(self, ProfileId::AhShortHeader | ProfileId::AhLongHeader)
    }

    pub fn amendment(self) -> &'static AmendmentInfo {
        match self {
            ProfileId::AhShortHeader | ProfileId::AhLongHeader => &AMENDMENTS[3],
            ProfileId::Ac => &AMENDMENTS[2],
            ProfileId::N24 | ProfileId::N5 => &AMENDMENTS[1],
            ProfileId::A => &AMENDMENTS[0],
        }
    }
}

impl fmt::Display for ProfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ProfileId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProfileId::ALL
            .into_iter()
            .find(|id| id.label() == s)
            .ok_or_else(|| Error::UnknownProfile(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AckScheme {
    NormalAck,
    /// PHY preamble and header only, zero data symbols (802.11ah).
    NdpAck,
    BlockAck,
}

impl AckScheme {
    pub fn label(self) -> &'static str {
        match self {
            AckScheme::NormalAck => "normal-ack",
            AckScheme::NdpAck => "ndp-ack",
            AckScheme::BlockAck => "block-ack",
        }
    }
}

impl fmt::Display for AckScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AckScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal-ack" | "normal" => Ok(AckScheme::NormalAck),
            "ndp-ack" | "ndp" => Ok(AckScheme::NdpAck),
            "block-ack" | "block" => Ok(AckScheme::BlockAck),
            _ => Err(Error::InvalidFieldValue {
                key: "ack_scheme",
                reason: "expected normal-ack, ndp-ack or block-ack",
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardInterval {
    Long,
    Short,
}

/// MAC/PHY constants of one amendment configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardProfile {
    pub id: ProfileId,
    pub sifs_us: f64,
    pub difs_us: f64,
    pub t_preamble_header_us: f64,
    pub mac_llc_header_bytes: u32,
    /// Appended to every PPDU; zero where the amendment has none.
    pub signal_extension_us: f64,
    pub t_sym_us: f64,
    pub t_slot_us: f64,
    pub cw_min: u32,
    pub cw_max: u32,
    pub bits_per_symbol: u32,
    /// SERVICE field plus tail bits added to the PSDU bit count.
    pub service_tail_bits: u32,
    pub ack_bytes: u32,
    pub ba_bytes: u32,
    pub ack_scheme: AckScheme,
    pub max_psdu_bytes: Option<u32>,
    pub max_ppdu_duration_us: Option<f64>,
    pub max_ampdu_subframes: u32,
    pub carrier_freq_mhz: f64,
    pub tx_power_dbm: f64,
    pub sensitivity_dbm: f64,
    pub bit_rate_mbps: f64,
}

/// A named transmit power / sensitivity / frequency triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioPreset {
    pub name: &'static str,
    pub carrier_freq_mhz: f64,
    pub tx_power_mw: f64,
    pub sensitivity_dbm: f64,
}

impl RadioPreset {
    pub fn tx_power_dbm(&self) -> f64 {
        mw_to_dbm(self.tx_power_mw)
    }
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * libm::log10(mw)
}

const AH_RADIO: [RadioPreset; 1] = [RadioPreset {
    name: "0.9",
    carrier_freq_mhz: 900.0,
    tx_power_mw: 1000.0,
    sensitivity_dbm: -98.0,
}];

const AC_RADIO: [RadioPreset; 2] = [
    RadioPreset {
        name: "5.15",
        carrier_freq_mhz: 5150.0,
        tx_power_mw: 200.0,
        sensitivity_dbm: -82.0,
    },
    RadioPreset {
        name: "5.45",
        carrier_freq_mhz: 5450.0,
        tx_power_mw: 1000.0,
        sensitivity_dbm: -82.0,
    },
];

const N24_RADIO: [RadioPreset; 1] = [RadioPreset {
    name: "2.4",
    carrier_freq_mhz: 2400.0,
    tx_power_mw: 100.0,
    sensitivity_dbm: -82.0,
}];

const A_RADIO: [RadioPreset; 2] = [
    RadioPreset {
        name: "5.15",
        carrier_freq_mhz: 5150.0,
        tx_power_mw: 200.0,
        sensitivity_dbm: -88.0,
    },
    RadioPreset {
        name: "5.45",
        carrier_freq_mhz: 5450.0,
        tx_power_mw: 1000.0,
        sensitivity_dbm: -88.0,
    },
];

/// Radio presets for a profile. The first entry is the profile's default radio.
pub fn radio_presets(id: ProfileId) -> &'static [RadioPreset] {
    match id {
        ProfileId::AhShortHeader | ProfileId::AhLongHeader => &AH_RADIO,
        // 802.11n in the 5 GHz band shares the 802.11ac radio figures.
        ProfileId::Ac | ProfileId::N5 => &AC_RADIO,
        ProfileId::N24 => &N24_RADIO,
        ProfileId::A => &A_RADIO,
    }
}

/// Longest PPDU the legacy SIGNAL field can describe.
const LEGACY_MAX_PPDU_US: f64 = 5484.0;

/// Returns the built-in constants for `id`.
pub fn builtin_profile(id: ProfileId) -> StandardProfile {
    let radio = radio_presets(id)[0];
    let base = StandardProfile {
        id,
        sifs_us: 16.0,
        difs_us: 34.0,
        t_preamble_header_us: 40.0,
        mac_llc_header_bytes: 36,
        signal_extension_us: 0.0,
        t_sym_us: 4.0,
        t_slot_us: 9.0,
        cw_min: 15,
        cw_max: 1023,
        bits_per_symbol: 26,
        service_tail_bits: 22,
        ack_bytes: 14,
        ba_bytes: 32,
        ack_scheme: AckScheme::NormalAck,
        max_psdu_bytes: None,
        max_ppdu_duration_us: Some(LEGACY_MAX_PPDU_US),
        max_ampdu_subframes: 64,
        carrier_freq_mhz: radio.carrier_freq_mhz,
        tx_power_dbm: radio.tx_power_dbm(),
        sensitivity_dbm: radio.sensitivity_dbm,
        bit_rate_mbps: 6.5,
    };
    match id {
        ProfileId::AhShortHeader | ProfileId::AhLongHeader => StandardProfile {
            sifs_us: 160.0,
            difs_us: 264.0,
            t_preamble_header_us: 560.0,
            mac_llc_header_bytes: if id == ProfileId::AhShortHeader {
                26
            } else {
                36
            },
            t_sym_us: 40.0,
            t_slot_us: 52.0,
            bits_per_symbol: 6,
            service_tail_bits: 14,
            max_psdu_bytes: Some(511),
            max_ppdu_duration_us: None,
            bit_rate_mbps: 0.15,
            ..base
        },
        ProfileId::Ac => base,
        ProfileId::N24 => StandardProfile {
            sifs_us: 10.0,
            difs_us: 28.0,
            t_preamble_header_us: 36.0,
            signal_extension_us: 6.0,
            ..base
        },
        ProfileId::N5 => StandardProfile {
            t_preamble_header_us: 36.0,
            ..base
        },
        ProfileId::A => StandardProfile {
            t_preamble_header_us: 20.0,
            bits_per_symbol: 6,
            max_ppdu_duration_us: None,
            bit_rate_mbps: 1.5,
            ..base
        },
    }
}

impl StandardProfile {
    pub fn link_budget(&self) -> Result<LinkBudget> {
        LinkBudget::new(
            self.tx_power_dbm,
            self.sensitivity_dbm,
            self.carrier_freq_mhz,
        )
    }

    /// Replaces the radio fields with the named preset.
    pub fn with_preset(mut self, name: &str) -> Result<Self> {
        let preset = radio_presets(self.id)
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownPreset {
                profile: self.id,
                preset: name.to_string(),
            })?;
        self.carrier_freq_mhz = preset.carrier_freq_mhz;
        self.tx_power_dbm = preset.tx_power_dbm();
        self.sensitivity_dbm = preset.sensitivity_dbm;
        Ok(self)
    }

    /// Switches the OFDM symbol duration between long and short guard
    /// interval. A short guard interval shortens the symbol by 10 %
    /// (4 µs to 3.6 µs, 40 µs to 36 µs) and raises the nominal rate
    /// accordingly. 802.11a has no short guard interval.
    pub fn with_guard_interval(mut self, gi: GuardInterval) -> Result<Self> {
        let long_sym = builtin_profile(self.id).t_sym_us;
        self.t_sym_us = match gi {
            GuardInterval::Long => long_sym,
            GuardInterval::Short if self.id == ProfileId::A => {
                return Err(Error::InvalidFieldValue {
                    key: "t_sym_us",
                    reason: "802.11a has no short guard interval",
                })
            }
            GuardInterval::Short => long_sym * 0.9,
        };
        self.bit_rate_mbps = f64::from(self.bits_per_symbol) / self.t_sym_us;
        Ok(self)
    }

    /// Checks the invariants every profile, built-in or overridden, must satisfy.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.sifs_us, "sifs_us > 0"),
            (self.difs_us, "difs_us > 0"),
            (self.t_preamble_header_us, "t_preamble_header_us > 0"),
            (self.t_sym_us, "t_sym_us > 0"),
            (self.t_slot_us, "t_slot_us > 0"),
            (self.carrier_freq_mhz, "carrier_freq_mhz > 0"),
            (self.bit_rate_mbps, "bit_rate_mbps > 0"),
        ];
        for (value, invariant) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidProfile(invariant));
            }
        }
        if !(self.signal_extension_us.is_finite() && self.signal_extension_us >= 0.0) {
            return Err(Error::InvalidProfile("signal_extension_us >= 0"));
        }
        if !self.tx_power_dbm.is_finite() || !self.sensitivity_dbm.is_finite() {
            return Err(Error::InvalidProfile(
                "tx_power_dbm and sensitivity_dbm are finite",
            ));
        }
        let counts = [
            (self.mac_llc_header_bytes, "mac_llc_header_bytes > 0"),
            (self.cw_min, "cw_min > 0"),
            (self.bits_per_symbol, "bits_per_symbol > 0"),
            (self.service_tail_bits, "service_tail_bits > 0"),
            (self.ack_bytes, "ack_bytes > 0"),
            (self.ba_bytes, "ba_bytes > 0"),
            (self.max_ampdu_subframes, "max_ampdu_subframes > 0"),
        ];
        for (value, invariant) in counts {
            if value == 0 {
                return Err(Error::InvalidProfile(invariant));
            }
        }
        if self.sifs_us >= self.difs_us {
            return Err(Error::InvalidProfile("sifs_us < difs_us"));
        }
        if self.cw_min >= self.cw_max {
            return Err(Error::InvalidProfile("cw_min < cw_max"));
        }
        if self.max_psdu_bytes == Some(0) {
            return Err(Error::InvalidProfile("max_psdu_bytes > 0"));
        }
        if let Some(cap) = self.max_ppdu_duration_us {
            if !(cap.is_finite() && cap > 0.0) {
                return Err(Error::InvalidProfile("max_ppdu_duration_us > 0"));
            }
        }
        match self.ack_scheme {
            AckScheme::NormalAck => {}
            AckScheme::NdpAck if self.id.is_s1g() => {}
            AckScheme::NdpAck => {
                return Err(Error::InvalidProfile(
                    "ndp-ack requires an 802.11ah profile",
                ))
            }
            AckScheme::BlockAck => {
                return Err(Error::InvalidProfile(
                    "default ack_scheme is normal-ack or ndp-ack",
                ))
            }
        }
        Ok(())
    }

    /// Every field as a `(name, value)` pair, in [`FIELD_NAMES`] order.
    pub fn field_values(&self) -> [(&'static str, FieldValue<'static>); FIELD_NAMES.len()] {
        use FieldValue::{Float, Integer, Text};
        let int = |v: u32| Integer(i64::from(v));
        [
            ("id", Text(self.id.label())),
            ("sifs_us", Float(self.sifs_us)),
            ("difs_us", Float(self.difs_us)),
            ("t_preamble_header_us", Float(self.t_preamble_header_us)),
            ("mac_llc_header_bytes", int(self.mac_llc_header_bytes)),
            ("signal_extension_us", Float(self.signal_extension_us)),
            ("t_sym_us", Float(self.t_sym_us)),
            ("t_slot_us", Float(self.t_slot_us)),
            ("cw_min", int(self.cw_min)),
            ("cw_max", int(self.cw_max)),
            ("bits_per_symbol", int(self.bits_per_symbol)),
            ("service_tail_bits", int(self.service_tail_bits)),
            ("ack_bytes", int(self.ack_bytes)),
            ("ba_bytes", int(self.ba_bytes)),
            ("ack_scheme", Text(self.ack_scheme.label())),
            (
                "max_psdu_bytes",
                self.max_psdu_bytes.map_or(Text(NONE), int),
            ),
            (
                "max_ppdu_duration_us",
                self.max_ppdu_duration_us.map_or(Text(NONE), Float),
            ),
            ("max_ampdu_subframes", int(self.max_ampdu_subframes)),
            ("carrier_freq_mhz", Float(self.carrier_freq_mhz)),
            ("tx_power_dbm", Float(self.tx_power_dbm)),
            ("sensitivity_dbm", Float(self.sensitivity_dbm)),
            ("bit_rate_mbps", Float(self.bit_rate_mbps)),
        ]
    }

    /// Overrides one field by name. `id` selects the base profile and is
    /// handled by the caller; optional caps are cleared with the text `none`.
    /// Invariants are not checked here; call [`StandardProfile::validate`]
    /// once all overrides are applied.
    pub fn set_field(&mut self, key: &str, value: FieldValue<'_>) -> Result<()> {
        let Some(&key) = FIELD_NAMES.iter().find(|k| **k == key) else {
            return Err(Error::UnknownField(key.to_string()));
        };
        match key {
            "id" => {
                return Err(Error::InvalidFieldValue {
                    key,
                    reason: "id selects the base profile and cannot be overridden",
                })
            }
            "sifs_us" => self.sifs_us = value.float(key)?,
            "difs_us" => self.difs_us = value.float(key)?,
            "t_preamble_header_us" => self.t_preamble_header_us = value.float(key)?,
            "mac_llc_header_bytes" => self.mac_llc_header_bytes = value.count(key)?,
            "signal_extension_us" => self.signal_extension_us = value.float(key)?,
            "t_sym_us" => self.t_sym_us = value.float(key)?,
            "t_slot_us" => self.t_slot_us = value.float(key)?,
            "cw_min" => self.cw_min = value.count(key)?,
            "cw_max" => self.cw_max = value.count(key)?,
            "bits_per_symbol" => self.bits_per_symbol = value.count(key)?,
            "service_tail_bits" => self.service_tail_bits = value.count(key)?,
            "ack_bytes" => self.ack_bytes = value.count(key)?,
            "ba_bytes" => self.ba_bytes = value.count(key)?,
            "ack_scheme" => match value {
                FieldValue::Text(s) => self.ack_scheme = s.parse()?,
                _ => {
                    return Err(Error::InvalidFieldValue {
                        key,
                        reason: "expected text",
                    })
                }
            },
            "max_psdu_bytes" => {
                self.max_psdu_bytes = if value.is_none() {
                    None
                } else {
                    Some(value.count(key)?)
                }
            }
            "max_ppdu_duration_us" => {
                self.max_ppdu_duration_us = if value.is_none() {
                    None
                } else {
                    Some(value.float(key)?)
                }
            }
            "max_ampdu_subframes" => self.max_ampdu_subframes = value.count(key)?,
            "carrier_freq_mhz" => self.carrier_freq_mhz = value.float(key)?,
            "tx_power_dbm" => self.tx_power_dbm = value.float(key)?,
            "sensitivity_dbm" => self.sensitivity_dbm = value.float(key)?,
            "bit_rate_mbps" => self.bit_rate_mbps = value.float(key)?,
            _ => unreachable!("FIELD_NAMES and set_field disagree on `{key}`"),
        }
        Ok(())
    }
}

pub const FIELD_NAMES: [&str; 22] = [
    "id",
    "sifs_us",
    "difs_us",
    "t_preamble_header_us",
    "mac_llc_header_bytes",
    "signal_extension_us",
    "t_sym_us",
    "t_slot_us",
    "cw_min",
    "cw_max",
    "bits_per_symbol",
    "service_tail_bits",
    "ack_bytes",
    "ba_bytes",
    "ack_scheme",
    "max_psdu_bytes",
    "max_ppdu_duration_us",
    "max_ampdu_subframes",
    "carrier_freq_mhz",
    "tx_power_dbm",
    "sensitivity_dbm",
    "bit_rate_mbps",
];

const NONE: &str = "none";

/// A scalar read from or written to a profile document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue<'a> {
    Integer(i64),
    Float(f64),
    Text(&'a str),
}

impl FieldValue<'_> {
    fn is_none(&self) -> bool {
        matches!(self, FieldValue::Text(s) if *s == NONE)
    }

    fn float(&self, key: &'static str) -> Result<f64> {
        match *self {
            FieldValue::Float(v) => Ok(v),
            FieldValue::Integer(v) => Ok(v as f64),
            FieldValue::Text(_) => Err(Error::InvalidFieldValue {
                key,
                reason: "expected a number",
            }),
        }
    }

    fn count(&self, key: &'static str) -> Result<u32> {
        match *self {
            FieldValue::Integer(v) => u32::try_from(v).map_err(|_| Error::InvalidFieldValue {
                key,
                reason: "expected a non-negative 32-bit integer",
            }),
            _ => Err(Error::InvalidFieldValue {
                key,
                reason: "expected an integer",
            }),
        }
    }
}

/// Descriptive amendment facts. Nothing in the models computes with these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmendmentInfo {
    pub name: &'static str,
    pub antenna_configuration: &'static str,
    pub modulations: &'static str,
    pub channel_bandwidths: &'static str,
    pub fft_sizes: &'static str,
    pub year_approved: &'static str,
    pub bit_rate_range: &'static str,
    pub max_stations: &'static str,
}

pub const AMENDMENTS: [AmendmentInfo; 4] = [
    AmendmentInfo {
        name: "802.11a/g",
        antenna_configuration: "1x1 SISO",
        modulations: "BPSK to 64-QAM",
        channel_bandwidths: "5, 10 MHz (11a), 20 MHz (11a/g)",
        fft_sizes: "64",
        year_approved: "1999/2003",
        bit_rate_range: "6 to 54 Mbps",
        max_stations: "2007",
    },
    AmendmentInfo {
        name: "802.11n",
        antenna_configuration: "4x4 MIMO",
        modulations: "BPSK to 64-QAM",
        channel_bandwidths: "20, 40 MHz",
        fft_sizes: "64 (20 MHz), 128 (40 MHz)",
        year_approved: "2009",
        bit_rate_range: "6.5 to 600 Mbps",
        max_stations: "2007",
    },
    AmendmentInfo {
        name: "802.11ac",
        antenna_configuration: "8x8 MIMO",
        modulations: "BPSK to 256-QAM",
        channel_bandwidths: "20, 40, 80, 160 MHz",
        fft_sizes: "64, 128, 256, 512",
        year_approved: "2014",
        bit_rate_range: "6.5 to 6933.3 Mbps",
        max_stations: "2007",
    },
    AmendmentInfo {
        name: "802.11ah",
        antenna_configuration: "4x4 MIMO",
        modulations: "BPSK to 256-QAM",
        channel_bandwidths: "1, 2, 4, 8, 16 MHz",
        fft_sizes: "32, 64, 128, 256, 512",
        year_approved: "2016 (draft)",
        bit_rate_range: "0.15 to 347 Mbps",
        max_stations: "about 8000",
    },
];

/// Sub-1 GHz PHY facts for 802.11ah.
pub mod s1g_phy {
    pub const CARRIER_BANDS: &str = "863-868 MHz (Europe), 902-928 MHz (US)";
    pub const BANDWIDTHS_MHZ: [u32; 5] = [1, 2, 4, 8, 16];
    /// (bandwidth MHz, data subcarriers, total subcarriers)
    pub const SUBCARRIERS: [(u32, u32, u32); 5] = [
        (1, 24, 32),
        (2, 52, 64),
        (4, 108, 124),
        (8, 234, 256),
        (16, 468, 512),
    ];
    pub const SPATIAL_STREAMS: (u32, u32) = (1, 4);
    pub const SUBCARRIER_SPACING_KHZ: f64 = 31.25;
}
