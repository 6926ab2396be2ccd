//! Seeded Monte Carlo of the retransmission process.
//!
//! [`SimMode::FinalStageBackoff`] draws only the backoff of the delivering
//! attempt, which is what the analytical expectation averages over.
//! [`SimMode::FullCycle`] also charges every attempt's airtime and backoff,
//! giving an empirical goodput.
//!
//! Frames are split into fixed blocks of [`FRAMES_PER_STREAM`]; block `s`
//! uses ChaCha8 stream `s` under the configured seed. Tallies merge in block
//! order, so a report does not depend on how blocks are scheduled.

use libm::sqrt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::profiles::StandardProfile;
use crate::throughput::{self, stage_window, FrameSpec};

pub const FRAMES_PER_STREAM: u64 = 1 << 16;

/// Attempts after which a frame is abandoned.
pub const RETRY_HARD_CAP: u32 = 10_000;

pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha), seed_from_u64(seed), stream = frame block index";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    FinalStageBackoff,
    FullCycle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub profile: StandardProfile,
    pub payload_bytes: u32,
    pub per: f64,
    pub n_frames: u64,
    pub seed: u64,
    pub mode: SimMode,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_frames == 0 {
            return Err(Error::InvalidSimConfig("n_frames must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.per) {
            return Err(Error::InvalidPer(self.per));
        }
        self.profile.validate()
    }

    pub fn streams(&self) -> u64 {
        self.n_frames.div_ceil(FRAMES_PER_STREAM)
    }
}

/// Sufficient statistics of a block of frames.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimTally {
    pub frames: u64,
    pub delivered: u64,
    pub attempts: u64,
    pub attempts_sq: u128,
    pub backoff_slots: u64,
    pub backoff_slots_sq: u128,
    pub retry_cap_hits: u64,
    /// Full-cycle only: per-frame channel time and its square, µs.
    pub channel_time_us: f64,
    pub channel_time_sq: f64,
}

impl SimTally {
    pub fn merge(&mut self, other: &SimTally) {
        self.frames += other.frames;
        self.delivered += other.delivered;
        self.attempts += other.attempts;
        self.attempts_sq += other.attempts_sq;
        self.backoff_slots += other.backoff_slots;
        self.backoff_slots_sq += other.backoff_slots_sq;
        self.retry_cap_hits += other.retry_cap_hits;
        self.channel_time_us += other.channel_time_us;
        self.channel_time_sq += other.channel_time_sq;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimReport {
    pub mean_backoff_us: f64,
    pub backoff_stderr_us: f64,
    pub mean_attempts: f64,
    pub attempts_stderr: f64,
    /// Full-cycle mode only.
    pub goodput_mbps: Option<f64>,
    pub goodput_stderr_mbps: Option<f64>,
    pub frames_delivered: u64,
    pub attempts_total: u64,
    pub retry_cap_hits: u64,
    pub rng: &'static str,
}

/// Per-attempt airtime excluding backoff: DIFS + data + SIFS + ACK.
fn attempt_airtime(config: &SimConfig) -> Result<f64> {
    let p = &config.profile;
    let frame = FrameSpec::for_profile(p, config.payload_bytes);
    let data = throughput::t_data(p, frame.mpdu_bytes());
    let ack = throughput::t_ack(p, frame.ack_scheme)?;
    Ok(p.difs_us + data + p.sifs_us + ack)
}

/// Simulates block `stream` of the configured frames.
pub fn simulate_stream(config: &SimConfig, stream: u64) -> Result<SimTally> {
    config.validate()?;
    let start = stream * FRAMES_PER_STREAM;
    let end = config.n_frames.min(start + FRAMES_PER_STREAM);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);

    let full_cycle = config.mode == SimMode::FullCycle;
    let airtime = if full_cycle {
        attempt_airtime(config)?
    } else {
        0.0
    };
    let slot = config.profile.t_slot_us;
    let mut tally = SimTally::default();

    for _ in start..end {
        tally.frames += 1;
        let mut attempt = 1u32;
        let mut frame_slots = 0u64;
        let delivered = loop {
            if full_cycle {
                frame_slots +=
                    u64::from(rng.random_range(0..=stage_window(&config.profile, attempt)));
            }
            if !rng.random_bool(config.per) {
                break true;
            }
            if attempt == RETRY_HARD_CAP {
                break false;
            }
            attempt += 1;
        };
        tally.attempts += u64::from(attempt);
        tally.attempts_sq += u128::from(attempt) * u128::from(attempt);
        if full_cycle {
            let t = f64::from(attempt) * airtime + frame_slots as f64 * slot;
            tally.channel_time_us += t;
            tally.channel_time_sq += t * t;
        }
        if !delivered {
            tally.retry_cap_hits += 1;
            continue;
        }
        tally.delivered += 1;
        let final_slots = u64::from(rng.random_range(0..=stage_window(&config.profile, attempt)));
        tally.backoff_slots += final_slots;
        tally.backoff_slots_sq += u128::from(final_slots) * u128::from(final_slots);
    }
    Ok(tally)
}

/// Mean and standard error of the mean from a sum and a sum of squares.
fn mean_stderr(n: u64, sum: f64, sum_sq: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let n = n as f64;
    let mean = sum / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    (mean, sqrt(var / n))
}

impl SimTally {
    pub fn finish(&self, config: &SimConfig) -> SimReport {
        let slot = config.profile.t_slot_us;
        let (mean_slots, slots_se) = mean_stderr(
            self.delivered,
            self.backoff_slots as f64,
            self.backoff_slots_sq as f64,
        );
        let (mean_attempts, attempts_stderr) =
            mean_stderr(self.frames, self.attempts as f64, self.attempts_sq as f64);

        let (goodput_mbps, goodput_stderr_mbps) = if config.mode == SimMode::FullCycle {
            let bits = 8.0 * f64::from(config.payload_bytes) * self.delivered as f64;
            let goodput = bits / self.channel_time_us;
            // Delta method on the ratio of delivered bits to mean frame time.
            let (mean_t, se_t) =
                mean_stderr(self.frames, self.channel_time_us, self.channel_time_sq);
            (Some(goodput), Some(goodput * se_t / mean_t))
        } else {
            (None, None)
        };

        SimReport {
            mean_backoff_us: mean_slots * slot,
            backoff_stderr_us: slots_se * slot,
            mean_attempts,
            attempts_stderr,
            goodput_mbps,
            goodput_stderr_mbps,
            frames_delivered: self.delivered,
            attempts_total: self.attempts,
            retry_cap_hits: self.retry_cap_hits,
            rng: RNG_ALGORITHM,
        }
    }
}

/// Runs every block in order on the calling thread.
pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let mut total = SimTally::default();
    for stream in 0..config.streams() {
        total.merge(&simulate_stream(config, stream)?);
    }
    Ok(total.finish(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{builtin_profile, ProfileId};

    fn config(per: f64, n_frames: u64, mode: SimMode) -> SimConfig {
        SimConfig {
            profile: builtin_profile(ProfileId::AhLongHeader),
            payload_bytes: 100,
            per,
            n_frames,
            seed: 7,
            mode,
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(simulate(&config(0.0, 0, SimMode::FinalStageBackoff)).is_err());
        assert!(simulate(&config(1.0, 10, SimMode::FinalStageBackoff)).is_err());
    }

    #[test]
    fn per_zero_is_one_attempt() {
        let r = simulate(&config(0.0, 5000, SimMode::FullCycle)).unwrap();
        assert_eq!(r.attempts_total, 5000);
        assert_eq!(r.frames_delivered, 5000);
        assert_eq!(r.mean_attempts, 1.0);
        assert_eq!(r.attempts_stderr, 0.0);
        assert_eq!(r.retry_cap_hits, 0);
    }

    #[test]
    fn single_frame_has_zero_stderr() {
        let r = simulate(&config(0.3, 1, SimMode::FinalStageBackoff)).unwrap();
        assert_eq!(r.backoff_stderr_us, 0.0);
        assert!(r.attempts_total >= 1);
        assert_eq!(r.goodput_mbps, None);
    }

    #[test]
    fn stream_partition_covers_all_frames() {
        let c = config(0.2, 2 * FRAMES_PER_STREAM + 5, SimMode::FinalStageBackoff);
        assert_eq!(c.streams(), 3);
        let last = simulate_stream(&c, 2).unwrap();
        assert_eq!(last.frames, 5);
    }

    #[test]
    fn retry_cap_is_reported() {
        // per just below 1: almost every frame exhausts its attempts.
        let c = config(1.0 - 1e-12, 3, SimMode::FinalStageBackoff);
        let r = simulate(&c).unwrap();
        assert_eq!(r.retry_cap_hits + r.frames_delivered, 3);
        assert!(r.retry_cap_hits > 0);
        assert_eq!(r.attempts_total, 3 * u64::from(RETRY_HARD_CAP));
    }
}
