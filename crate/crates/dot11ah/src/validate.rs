//! Monte Carlo check of the analytical backoff and throughput.

use std::io::Write;

use dot11ah_core::linksim::{simulate_stream, SimConfig, SimMode, SimReport, SimTally};
use dot11ah_core::profiles::{builtin_profile, ProfileId};
use dot11ah_core::throughput::{expected_backoff, throughput_single, FrameSpec};
use rayon::prelude::*;

use crate::error::Result;
use crate::format::{plain, sig6};

pub const DEFAULT_FRAMES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PAYLOAD: u32 = 100;
pub const DEFAULT_PER_GRID: [f64; 4] = [0.0, 0.1, 0.3, 0.5];
pub const DEFAULT_PROFILES: [ProfileId; 2] = [ProfileId::AhLongHeader, ProfileId::Ac];
pub const Z_LIMIT: f64 = 3.0;

/// Runs the blocks of `config` on the rayon pool and merges them in block
/// order, so the report does not depend on the thread count.
pub fn simulate_parallel(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let tallies = (0..config.streams())
        .into_par_iter()
        .map(|stream| simulate_stream(config, stream))
        .collect::<Result<Vec<_>, _>>()?;
    let mut total = SimTally::default();
    for t in &tallies {
        total.merge(t);
    }
    Ok(total.finish(config))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateConfig {
    pub profiles: Vec<ProfileId>,
    pub per_list: Vec<f64>,
    pub payload_bytes: u32,
    pub n_frames: u64,
    pub seed: u64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            profiles: DEFAULT_PROFILES.to_vec(),
            per_list: DEFAULT_PER_GRID.to_vec(),
            payload_bytes: DEFAULT_PAYLOAD,
            n_frames: DEFAULT_FRAMES,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Pass,
    Fail,
    InsufficientSamples,
}

impl CellStatus {
    pub fn label(self) -> &'static str {
        match self {
            CellStatus::Pass => "PASS",
            CellStatus::Fail => "FAIL",
            CellStatus::InsufficientSamples => "insufficient samples",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCell {
    pub profile: ProfileId,
    pub per: f64,
    pub analytical_backoff_us: f64,
    pub backoff: SimReport,
    /// (mean − analytical) / stderr; zero when both vanish.
    pub z: f64,
    pub status: CellStatus,
    pub analytical_mbps: f64,
    pub full_cycle: SimReport,
}

impl ValidationCell {
    pub fn goodput_mbps(&self) -> f64 {
        self.full_cycle.goodput_mbps.unwrap_or(f64::NAN)
    }

    pub fn goodput_stderr_mbps(&self) -> f64 {
        self.full_cycle.goodput_stderr_mbps.unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub config: ValidateConfig,
    pub cells: Vec<ValidationCell>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.status == CellStatus::Pass)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let c = &self.config;
        writeln!(
            out,
            "frames per cell: {}, seed: {}, payload: {} B",
            c.n_frames, c.seed, c.payload_bytes
        )?;
        if let Some(cell) = self.cells.first() {
            writeln!(out, "rng: {}", cell.backoff.rng)?;
        }
        writeln!(out, "\nfinal-stage backoff (pass when |z| <= {Z_LIMIT}):")?;
        writeln!(
            out,
            "{:<16} {:>5} {:>14} {:>14} {:>10} {:>8}  status",
            "profile", "per", "analytical_us", "empirical_us", "stderr_us", "z"
        )?;
        for cell in &self.cells {
            writeln!(
                out,
                "{:<16} {:>5} {:>14} {:>14} {:>10} {:>8.3}  {}",
                cell.profile.label(),
                plain(cell.per),
                sig6(cell.analytical_backoff_us),
                sig6(cell.backoff.mean_backoff_us),
                sig6(cell.backoff.backoff_stderr_us),
                cell.z,
                cell.status.label()
            )?;
        }
        writeln!(
            out,
            "\nfull-cycle goodput, retransmitted airtime included (informational):"
        )?;
        writeln!(
            out,
            "{:<16} {:>5} {:>14} {:>14} {:>12} {:>10}",
            "profile", "per", "analytical", "goodput", "stderr", "delta_pct"
        )?;
        for cell in &self.cells {
            let delta = 100.0 * (cell.goodput_mbps() - cell.analytical_mbps) / cell.analytical_mbps;
            writeln!(
                out,
                "{:<16} {:>5} {:>14} {:>14} {:>12} {:>10.4}",
                cell.profile.label(),
                plain(cell.per),
                sig6(cell.analytical_mbps),
                sig6(cell.goodput_mbps()),
                sig6(cell.goodput_stderr_mbps()),
                delta
            )?;
        }
        let failing: Vec<String> = self
            .cells
            .iter()
            .filter(|c| c.status != CellStatus::Pass)
            .map(|c| {
                format!(
                    "{} per={} ({})",
                    c.profile.label(),
                    plain(c.per),
                    c.status.label()
                )
            })
            .collect();
        if failing.is_empty() {
            writeln!(out, "\nall backoff checks pass")?;
        } else {
            writeln!(out, "\nfailing cells: {}", failing.join(", "))?;
        }
        Ok(())
    }
}

fn z_score(mean: f64, analytical: f64, stderr: f64) -> f64 {
    let diff = mean - analytical;
    if stderr > 0.0 {
        diff / stderr
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

pub fn validate_cell(
    profile_id: ProfileId,
    per: f64,
    config: &ValidateConfig,
) -> Result<ValidationCell> {
    let profile = builtin_profile(profile_id);
    let sim = |mode| SimConfig {
        profile,
        payload_bytes: config.payload_bytes,
        per,
        n_frames: config.n_frames,
        seed: config.seed,
        mode,
    };
    let backoff = simulate_parallel(&sim(SimMode::FinalStageBackoff))?;
    let full_cycle = simulate_parallel(&sim(SimMode::FullCycle))?;
    let analytical_backoff_us = expected_backoff(&profile, per)?;
    let frame = FrameSpec::for_profile(&profile, config.payload_bytes);
    let analytical_mbps = throughput_single(&profile, &frame, per, 0.0)?.s_mbps;
    let z = z_score(
        backoff.mean_backoff_us,
        analytical_backoff_us,
        backoff.backoff_stderr_us,
    );
    let status = if backoff.frames_delivered < 2 {
        CellStatus::InsufficientSamples
    } else if z.abs() <= Z_LIMIT {
        CellStatus::Pass
    } else {
        CellStatus::Fail
    };
    Ok(ValidationCell {
        profile: profile_id,
        per,
        analytical_backoff_us,
        backoff,
        z,
        status,
        analytical_mbps,
        full_cycle,
    })
}

/// Every (profile, PER) cell, profile-major.
pub fn run_validation(config: &ValidateConfig) -> Result<ValidationReport> {
    let cells = config
        .profiles
        .iter()
        .flat_map(|&id| config.per_list.iter().map(move |&per| (id, per)))
        .map(|(id, per)| validate_cell(id, per, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport {
        config: config.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dot11ah_core::linksim::simulate;

    #[test]
    fn parallel_matches_sequential() {
        let config = SimConfig {
            profile: builtin_profile(ProfileId::Ac),
            payload_bytes: 100,
            per: 0.3,
            n_frames: 200_000,
            seed: 9,
            mode: SimMode::FullCycle,
        };
        assert_eq!(
            simulate_parallel(&config).unwrap(),
            simulate(&config).unwrap()
        );
    }

    #[test]
    fn single_frame_is_insufficient() {
        let config = ValidateConfig {
            n_frames: 1,
            ..ValidateConfig::default()
        };
        let cell = validate_cell(ProfileId::AhLongHeader, 0.0, &config).unwrap();
        assert_eq!(cell.status, CellStatus::InsufficientSamples);
        assert_eq!(cell.analytical_backoff_us, 390.0);
    }

    #[test]
    fn z_scores() {
        assert_eq!(z_score(1.0, 1.0, 0.0), 0.0);
        assert_eq!(z_score(2.0, 1.0, 0.0), f64::INFINITY);
        assert_eq!(z_score(1.0, 2.0, 0.5), -2.0);
    }
}
