//! TGah path-loss models, received power and maximum-range inversion.
//!
//! Outdoor (macro, pico) models are log-distance fits referenced to 900 MHz
//! with a `21·log10(f/900)` correction for other carriers. Indoor models are
//! free-space up to a breakpoint and decay at 35 dB/decade beyond it.

use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use libm::{log10, pow};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT_M_PER_S: f64 = 2.997_924_58e8;

/// Shortest distance at which the models are evaluated.
pub const MIN_DISTANCE_M: f64 = 1.0;

const OUTDOOR_REFERENCE_MHZ: f64 = 900.0;
const FREQ_CORRECTION_DB_PER_DECADE: f64 = 21.0;
const FREE_SPACE_DB_PER_DECADE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathLossKind {
    /// Outdoor, antenna 15 m above rooftop.
    Macro,
    /// Outdoor, antenna at rooftop.
    Pico,
    /// Large indoor open space, non-line-of-sight.
    IndoorC,
    /// Large indoor open space, line-of-sight.
    IndoorD,
}

impl PathLossKind {
    pub const ALL: [PathLossKind; 4] = [
        PathLossKind::Macro,
        PathLossKind::Pico,
        PathLossKind::IndoorC,
        PathLossKind::IndoorD,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PathLossKind::Macro => "macro",
            PathLossKind::Pico => "pico",
            PathLossKind::IndoorC => "indoor-c",
            PathLossKind::IndoorD => "indoor-d",
        }
    }
}

impl fmt::Display for PathLossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PathLossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PathLossKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or(Error::Domain(
                "unknown path-loss model (expected macro, pico, indoor-c or indoor-d)",
            ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub kind: PathLossKind,
    /// Constant term of the outdoor fits.
    pub intercept_db: Option<f64>,
    /// dB per decade of distance (post-breakpoint slope for indoor models).
    pub slope: f64,
    pub breakpoint_m: Option<f64>,
    /// Carrier the outdoor fit is referenced to.
    pub reference_freq_mhz: Option<f64>,
}

impl PathLossModel {
    pub const MACRO: PathLossModel = PathLossModel {
        kind: PathLossKind::Macro,
        intercept_db: Some(8.0),
        slope: 37.6,
        breakpoint_m: None,
        reference_freq_mhz: Some(OUTDOOR_REFERENCE_MHZ),
    };
    pub const PICO: PathLossModel = PathLossModel {
        kind: PathLossKind::Pico,
        intercept_db: Some(23.3),
        slope: 36.7,
        breakpoint_m: None,
        reference_freq_mhz: Some(OUTDOOR_REFERENCE_MHZ),
    };
    pub const INDOOR_C: PathLossModel = PathLossModel {
        kind: PathLossKind::IndoorC,
        intercept_db: None,
        slope: 35.0,
        breakpoint_m: Some(5.0),
        reference_freq_mhz: None,
    };
    pub const INDOOR_D: PathLossModel = PathLossModel {
        kind: PathLossKind::IndoorD,
        intercept_db: None,
        slope: 35.0,
        breakpoint_m: Some(10.0),
        reference_freq_mhz: None,
    };

    pub fn new(kind: PathLossKind) -> Self {
        match kind {
            PathLossKind::Macro => Self::MACRO,
            PathLossKind::Pico => Self::PICO,
            PathLossKind::IndoorC => Self::INDOOR_C,
            PathLossKind::IndoorD => Self::INDOOR_D,
        }
    }

    pub fn all() -> [PathLossModel; 4] {
        PathLossKind::ALL.map(Self::new)
    }

    fn shape(&self) -> Shape {
        match (
            self.intercept_db,
            self.reference_freq_mhz,
            self.breakpoint_m,
        ) {
            (_, _, Some(breakpoint_m)) => Shape::Breakpoint {
                breakpoint_m,
                slope: self.slope,
            },
            (Some(intercept_db), Some(reference_mhz), None) => Shape::LogDistance {
                intercept_db,
                slope: self.slope,
                reference_mhz,
            },
            _ => unreachable!("path-loss model without intercept or breakpoint"),
        }
    }
}

enum Shape {
    LogDistance {
        intercept_db: f64,
        slope: f64,
        reference_mhz: f64,
    },
    Breakpoint {
        breakpoint_m: f64,
        slope: f64,
    },
}

/// Transmit power, receiver sensitivity and carrier of one radio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    tx_power_dbm: f64,
    sensitivity_dbm: f64,
    carrier_freq_mhz: f64,
}

impl LinkBudget {
    pub fn new(tx_power_dbm: f64, sensitivity_dbm: f64, carrier_freq_mhz: f64) -> Result<Self> {
        if !(carrier_freq_mhz.is_finite() && carrier_freq_mhz > 0.0) {
            return Err(Error::Domain("carrier frequency must be positive"));
        }
        if !(tx_power_dbm.is_finite() && sensitivity_dbm.is_finite())
            || tx_power_dbm <= sensitivity_dbm
        {
            return Err(Error::NonPositiveBudget {
                tx_power_dbm,
                sensitivity_dbm,
            });
        }
        Ok(LinkBudget {
            tx_power_dbm,
            sensitivity_dbm,
            carrier_freq_mhz,
        })
    }

    pub fn tx_power_dbm(&self) -> f64 {
        self.tx_power_dbm
    }

    pub fn sensitivity_dbm(&self) -> f64 {
        self.sensitivity_dbm
    }

    pub fn carrier_freq_mhz(&self) -> f64 {
        self.carrier_freq_mhz
    }

    /// Largest tolerable path loss, dB.
    pub fn budget_db(&self) -> f64 {
        self.tx_power_dbm - self.sensitivity_dbm
    }
}

/// `20·log10(4π·d·f/c)` with `d` in metres and `f` in MHz.
pub fn free_space_loss(d_m: f64, f_mhz: f64) -> f64 {
    FREE_SPACE_DB_PER_DECADE * log10(4.0 * PI * d_m * f_mhz * 1e6 / SPEED_OF_LIGHT_M_PER_S)
}

fn frequency_correction(f_mhz: f64, reference_mhz: f64) -> f64 {
    FREQ_CORRECTION_DB_PER_DECADE * log10(f_mhz / reference_mhz)
}

/// Path loss in dB at distance `d_m` metres and carrier `f_mhz`.
pub fn path_loss(model: &PathLossModel, d_m: f64, f_mhz: f64) -> Result<f64> {
    if !(d_m.is_finite() && d_m > 0.0) {
        return Err(Error::Domain("distance must be positive"));
    }
    if !(f_mhz.is_finite() && f_mhz > 0.0) {
        return Err(Error::Domain("frequency must be positive"));
    }
    match model.shape() {
        Shape::LogDistance {
            intercept_db,
            slope,
            reference_mhz,
        } => {
            if d_m < MIN_DISTANCE_M {
                return Err(Error::Domain("outdoor models are undefined below 1 m"));
            }
            Ok(intercept_db + slope * log10(d_m) + frequency_correction(f_mhz, reference_mhz))
        }
        Shape::Breakpoint {
            breakpoint_m,
            slope,
        } => {
            if d_m <= breakpoint_m {
                Ok(free_space_loss(d_m, f_mhz))
            } else {
                Ok(free_space_loss(breakpoint_m, f_mhz) + slope * log10(d_m / breakpoint_m))
            }
        }
    }
}

/// Received power in dBm. No antenna gains are applied.
pub fn received_power(budget: &LinkBudget, model: &PathLossModel, d_m: f64) -> Result<f64> {
    Ok(budget.tx_power_dbm - path_loss(model, d_m, budget.carrier_freq_mhz)?)
}

/// Largest distance, in metres, at which the received power still meets the
/// sensitivity. Closed-form inversion of [`path_loss`]; not rounded.
pub fn max_range(budget: &LinkBudget, model: &PathLossModel) -> Result<f64> {
    let budget_db = budget.budget_db();
    let f = budget.carrier_freq_mhz;
    let d = match model.shape() {
        Shape::LogDistance {
            intercept_db,
            slope,
            reference_mhz,
        } => {
            let excess = budget_db - intercept_db - frequency_correction(f, reference_mhz);
            pow(10.0, excess / slope)
        }
        Shape::Breakpoint {
            breakpoint_m,
            slope,
        } => {
            let at_breakpoint = free_space_loss(breakpoint_m, f);
            if budget_db <= at_breakpoint {
                pow(
                    10.0,
                    (budget_db - free_space_loss(1.0, f)) / FREE_SPACE_DB_PER_DECADE,
                )
            } else {
                breakpoint_m * pow(10.0, (budget_db - at_breakpoint) / slope)
            }
        }
    };
    if !(d >= MIN_DISTANCE_M) {
        return Err(Error::LinkClosesNowhere { budget_db });
    }
    // Rounding in pow can land one ulp past the edge.
    let mut d = d;
    while received_power(budget, model, d)? < budget.sensitivity_dbm && d > MIN_DISTANCE_M {
        d = d.next_down();
    }
    Ok(d)
}

/// One-way propagation delay in microseconds over `d_m` metres.
pub fn propagation_delay_us(d_m: f64) -> f64 {
    d_m / SPEED_OF_LIGHT_M_PER_S * 1e6
}
