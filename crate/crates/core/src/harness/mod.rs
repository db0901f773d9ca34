//! Monte Carlo BLER/BER sweeps.
//!
//! Every frame draws its channel, noise and payload from streams keyed by
//! `(seed, snr index, frame index, purpose, lane)`, so a frame's outcome does
//! not depend on which worker thread ran it. Frames are evaluated in chunks
//! and folded in frame order; a point stops at the first frame where the
//! error target is met, or at `max_frames`.
//!
//! SNR is the receive SNR `P_t G_t G_r E|h|^2 / sigma^2`, where `E|h|^2` is
//! the subcarrier-averaged squared path gain times the mean fading power and
//! `sigma^2 = k_B T B` is the total complex noise variance. Each grid point
//! sets `P_t` to hit its target.

mod config;
pub mod stats;

pub use config::{ChannelConfig, CodeConfig, CrcChoice, FrameSpec, SimConfig, SCHEMA_VERSION};

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chanmodel::{path_gain, realize_channel, ChannelError, ChannelRealization};
use crate::decoders::DecoderConfig;
use crate::detect::Regime;
use crate::link::{receive_frame, transmit_frame, FrameConfig, LinkError, Schedule};
use crate::rng::{Purpose, StreamKey};
use stats::{wilson_interval, Z95};

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Channel redraws allowed before a frame gives up on a singular channel.
const MAX_CHANNEL_ATTEMPTS: u32 = 64;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("{0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn is_config(&self) -> bool {
        matches!(self, HarnessError::Config(_))
    }
}

/// Thermal noise power `k_B T B` in watts.
pub fn noise_power(temperature_k: f64, bandwidth_hz: f64) -> Result<f64, HarnessError> {
    let mut bad = Vec::new();
    if !(temperature_k.is_finite() && temperature_k > 0.0) {
        bad.push(format!("temperature must be positive, got {temperature_k}"));
    }
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        bad.push(format!("bandwidth must be positive, got {bandwidth_hz}"));
    }
    if !bad.is_empty() {
        return Err(HarnessError::Config(bad));
    }
    Ok(BOLTZMANN * temperature_k * bandwidth_hz)
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub blocks: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bit_errors: u64,
    pub ber: f64,
    pub mean_queries: f64,
    pub mean_list_rank: f64,
}

/// One receiver configuration evaluated on shared frames.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arm {
    pub regime: Regime,
    pub decoder: DecoderConfig,
}

impl Arm {
    pub fn label(&self) -> String {
        format!("{}/{}", self.regime.name(), self.decoder.label())
    }
}

/// A validated configuration with its derived link parameters.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub cfg: SimConfig,
    pub frame: FrameConfig,
    /// Total complex noise variance per subcarrier.
    pub sigma2: f64,
    /// `E|h|^2` averaged over subcarriers.
    pub mean_gain2: f64,
}

impl Prepared {
    pub fn new(cfg: &SimConfig) -> Result<Self, HarnessError> {
        let problems = cfg.problems();
        if !problems.is_empty() {
            return Err(HarnessError::Config(problems));
        }
        let code = cfg
            .code
            .build()
            .map_err(|e| HarnessError::Config(vec![e]))?;
        let frame = FrameConfig::new(
            cfg.channel.path.num_subcarriers,
            cfg.frame.modulation.constellation(),
            code,
            1.0,
            db_to_lin(cfg.frame.tx_gain_dbi),
            db_to_lin(cfg.frame.rx_gain_dbi),
        )?;
        let sigma2 = noise_power(cfg.temperature_k, cfg.channel.path.bandwidth_hz)?;
        let l = cfg.channel.path.num_subcarriers;
        let mut path2 = 0.0;
        for i in 1..=l {
            path2 += path_gain(&cfg.channel.path, i)?.powi(2);
        }
        let mean_gain2 = path2 / l as f64 * cfg.channel.fading.mean_power()?;
        Ok(Self {
            cfg: cfg.clone(),
            frame,
            sigma2,
            mean_gain2,
        })
    }

    /// Transmit power that gives a receive SNR of `snr_db`.
    pub fn tx_power_for(&self, snr_db: f64) -> f64 {
        db_to_lin(snr_db) * self.sigma2
            / (self.frame.tx_gain_lin * self.frame.rx_gain_lin * self.mean_gain2)
    }

    pub fn with_tx_power(&self, snr_db: f64) -> FrameConfig {
        let mut f = self.frame.clone();
        f.tx_power_w = self.tx_power_for(snr_db);
        f
    }

    fn key(&self, snr_index: usize, frame_index: u64, purpose: Purpose) -> StreamKey {
        StreamKey::new(self.cfg.seed, snr_index as u32, frame_index, purpose)
    }

    /// Channel of one frame, redrawn while any subcarrier gain is zero.
    pub fn channel(
        &self,
        snr_index: usize,
        frame_index: u64,
    ) -> Result<ChannelRealization, HarnessError> {
        let base = self.key(snr_index, frame_index, Purpose::Channel);
        for attempt in 0..MAX_CHANNEL_ATTEMPTS {
            let mut rng = base.with_attempt(attempt).rng();
            let chan = realize_channel(
                &self.cfg.channel.path,
                &self.cfg.channel.fading,
                self.sigma2,
                &mut rng,
            )?;
            if !chan.is_singular() {
                return Ok(chan);
            }
        }
        Err(HarnessError::Runtime(format!(
            "frame {frame_index}: channel stayed singular after {MAX_CHANNEL_ATTEMPTS} draws"
        )))
    }

    /// Payload of one frame; lane `v` has its own stream.
    pub fn payload(&self, snr_index: usize, frame_index: u64) -> Vec<u8> {
        let k = self.frame.code().payload_len();
        let mut bits = Vec::with_capacity(self.frame.payload_bits());
        for v in 0..self.frame.lanes() {
            let mut rng = self
                .key(snr_index, frame_index, Purpose::Payload)
                .with_lane(v as u32)
                .rng();
            bits.extend((0..k).map(|_| rng.random_range(0..2u8)));
        }
        bits
    }
}

// Per-frame counts for every arm.
#[derive(Clone, Debug)]
struct FrameObs {
    blocks: u64,
    block_errors: Vec<u64>,
    bit_errors: Vec<u64>,
    queries: Vec<u64>,
    ranks: Vec<u64>,
    // disc[a * m + b]: blocks wrong under arm a and right under arm b
    disc: Vec<u64>,
}

#[derive(Clone, Debug)]
struct Tally {
    frames: u64,
    obs: FrameObs,
}

impl Tally {
    fn new(m: usize) -> Self {
        Self {
            frames: 0,
            obs: FrameObs {
                blocks: 0,
                block_errors: vec![0; m],
                bit_errors: vec![0; m],
                queries: vec![0; m],
                ranks: vec![0; m],
                disc: vec![0; m * m],
            },
        }
    }

    fn add(&mut self, o: &FrameObs) {
        self.frames += 1;
        self.obs.blocks += o.blocks;
        for (a, b) in [
            (&mut self.obs.block_errors, &o.block_errors),
            (&mut self.obs.bit_errors, &o.bit_errors),
            (&mut self.obs.queries, &o.queries),
            (&mut self.obs.ranks, &o.ranks),
            (&mut self.obs.disc, &o.disc),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    fn point(&self, arm: usize, snr_db: f64, payload_len: usize) -> BlerPoint {
        let blocks = self.obs.blocks;
        let errs = self.obs.block_errors[arm];
        let bits = blocks * payload_len as u64;
        let (ci_low, ci_high) = wilson_interval(errs, blocks, Z95);
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        BlerPoint {
            snr_db,
            frames: self.frames,
            blocks,
            block_errors: errs,
            bler: ratio(errs, blocks),
            ci_low,
            ci_high,
            bit_errors: self.obs.bit_errors[arm],
            ber: ratio(self.obs.bit_errors[arm], bits),
            mean_queries: ratio(self.obs.queries[arm], blocks),
            mean_list_rank: ratio(self.obs.ranks[arm], blocks),
        }
    }
}

fn simulate_frame(
    prep: &Prepared,
    frame: &FrameConfig,
    arms: &[Arm],
    snr_index: usize,
    frame_index: u64,
) -> Result<FrameObs, HarnessError> {
    let chan = prep.channel(snr_index, frame_index)?;
    let info = prep.payload(snr_index, frame_index);
    let mut noise = prep.key(snr_index, frame_index, Purpose::Noise).rng();
    let y = transmit_frame(&info, frame, &chan, &mut noise)?;

    let m = arms.len();
    let lanes = frame.lanes();
    let mut obs = FrameObs {
        blocks: lanes as u64,
        block_errors: vec![0; m],
        bit_errors: vec![0; m],
        queries: vec![0; m],
        ranks: vec![0; m],
        disc: vec![0; m * m],
    };
    let mut wrong = vec![false; m * lanes];
    for (a, arm) in arms.iter().enumerate() {
        let res = receive_frame(
            &y,
            &info,
            &chan,
            frame,
            arm.regime,
            &arm.decoder,
            Schedule::Sequential,
        )?;
        obs.block_errors[a] = res.block_errors as u64;
        obs.bit_errors[a] = res.bit_errors() as u64;
        obs.queries[a] = res.total_queries();
        obs.ranks[a] = res.outcomes.iter().map(|o| o.list_rank as u64).sum();
        for v in 0..lanes {
            wrong[a * lanes + v] = res.decoded_info[v] != res.tx_info[v];
        }
    }
    for a in 0..m {
        for b in 0..m {
            obs.disc[a * m + b] = (0..lanes)
                .filter(|&v| wrong[a * lanes + v] && !wrong[b * lanes + v])
                .count() as u64;
        }
    }
    Ok(obs)
}

fn thread_pool(lanes: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(lanes)
        .build()
        .map_err(|e| HarnessError::Runtime(format!("thread pool: {e}")))
}

// Runs one SNR point for all arms until each has `min_block_errors` errors.
fn run_point(
    prep: &Prepared,
    pool: &rayon::ThreadPool,
    arms: &[Arm],
    snr_index: usize,
) -> Result<Tally, HarnessError> {
    let cfg = &prep.cfg;
    let frame = prep.with_tx_power(cfg.snr_grid_db[snr_index]);
    let chunk = (pool.current_num_threads() as u64 * 4).max(8);
    let mut tally = Tally::new(arms.len());
    let mut next = 0u64;
    while next < cfg.max_frames {
        let end = (next + chunk).min(cfg.max_frames);
        let batch: Vec<Result<FrameObs, HarnessError>> = pool.install(|| {
            (next..end)
                .into_par_iter()
                .map(|f| simulate_frame(prep, &frame, arms, snr_index, f))
                .collect()
        });
        for obs in batch {
            tally.add(&obs?);
            if tally
                .obs
                .block_errors
                .iter()
                .all(|&e| e >= cfg.min_block_errors)
            {
                return Ok(tally);
            }
        }
        next = end;
    }
    Ok(tally)
}

/// BLER/BER at every grid point for the configured regime and decoder.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<BlerPoint>, HarnessError> {
    let arm = Arm {
        regime: cfg.regime,
        decoder: cfg.decoder,
    };
    Ok(run_arms(cfg, &[arm])?.points.swap_remove(0))
}

/// Result of a paired run of several arms on common frames.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub arms: Vec<Arm>,
    /// `points[arm][snr]`.
    pub points: Vec<Vec<BlerPoint>>,
    /// Per SNR point, `discordance[snr][a][b]` counts blocks wrong under arm
    /// `a` and right under arm `b`.
    pub discordance: Vec<Vec<Vec<u64>>>,
}

/// BLER targets at which SNR gaps are reported.
pub const GAP_TARGETS: [f64; 2] = [1e-2, 1e-3];

impl Comparison {
    /// SNR at which arm `a` reaches `target`, if the curve brackets it.
    pub fn snr_at(&self, a: usize, target: f64) -> Option<f64> {
        snr_at_bler(&self.points[a], target)
    }

    /// `snr(arm a) - snr(arm 0)` at `target`, in dB.
    pub fn delta_db(&self, a: usize, target: f64) -> Option<f64> {
        Some(self.snr_at(a, target)? - self.snr_at(0, target)?)
    }

    /// One-sided sign-test p-value for "arm `b` has fewer block errors than
    /// arm `a`" at grid point `snr`.
    pub fn sign_test(&self, snr: usize, a: usize, b: usize) -> f64 {
        let d = &self.discordance[snr];
        stats::sign_test_p(d[a][b], d[b][a])
    }
}

/// Runs `arms` on common channel, noise and payload realizations.
///
/// Each point continues until every arm has `min_block_errors` errors or
/// `max_frames` is reached.
pub fn paired_compare_arms(cfg: &SimConfig, arms: &[Arm]) -> Result<Comparison, HarnessError> {
    if arms.is_empty() {
        return Err(HarnessError::Config(vec![
            "at least one arm is required".into()
        ]));
    }
    run_arms(cfg, arms)
}

/// Regime comparison with the configured decoder.
pub fn paired_compare(cfg: &SimConfig, regimes: &[Regime]) -> Result<Comparison, HarnessError> {
    if regimes.len() < 2 {
        return Err(HarnessError::Config(vec![
            "compare needs at least two regimes".into(),
        ]));
    }
    let arms: Vec<Arm> = regimes
        .iter()
        .map(|&regime| Arm {
            regime,
            decoder: cfg.decoder,
        })
        .collect();
    run_arms(cfg, &arms)
}

fn run_arms(cfg: &SimConfig, arms: &[Arm]) -> Result<Comparison, HarnessError> {
    let prep = Prepared::new(cfg)?;
    let pool = thread_pool(cfg.lanes)?;
    let m = arms.len();
    let payload_len = prep.frame.code().payload_len();
    let mut points = vec![Vec::with_capacity(cfg.snr_grid_db.len()); m];
    let mut discordance = Vec::with_capacity(cfg.snr_grid_db.len());
    for (i, &snr) in cfg.snr_grid_db.iter().enumerate() {
        let tally = run_point(&prep, &pool, arms, i)?;
        for (a, series) in points.iter_mut().enumerate() {
            series.push(tally.point(a, snr, payload_len));
        }
        discordance.push(
            (0..m)
                .map(|a| tally.obs.disc[a * m..(a + 1) * m].to_vec())
                .collect(),
        );
    }
    Ok(Comparison {
        arms: arms.to_vec(),
        points,
        discordance,
    })
}

/// SNR at which a BLER curve first falls to `target`, by linear interpolation
/// of `log10(BLER)` against SNR between the bracketing grid points.
pub fn snr_at_bler(points: &[BlerPoint], target: f64) -> Option<f64> {
    let mut pts: Vec<&BlerPoint> = points.iter().collect();
    pts.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.bler >= target && b.bler <= target {
            if a.bler == b.bler {
                return Some(a.snr_db);
            }
            if b.bler == 0.0 {
                // no log scale below the last observed error; stay on the grid
                return if a.bler == target {
                    Some(a.snr_db)
                } else {
                    None
                };
            }
            let t = (a.bler.log10() - target.log10()) / (a.bler.log10() - b.bler.log10());
            return Some(a.snr_db + t * (b.snr_db - a.snr_db));
        }
    }
    None
}

/// Run metadata repeated on every CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMeta {
    pub decoder: String,
    pub regime: Regime,
    pub code_n: usize,
    pub code_k: usize,
    pub modulation: String,
    pub channel: String,
    pub seed: u64,
}

impl SeriesMeta {
    pub fn new(cfg: &SimConfig, arm: &Arm) -> Self {
        Self {
            decoder: arm.decoder.label(),
            regime: arm.regime,
            code_n: cfg.code.n(),
            code_k: cfg.code.k(),
            modulation: cfg.frame.modulation.name().to_string(),
            channel: cfg.channel.fading.name().to_string(),
            seed: cfg.seed,
        }
    }

    pub fn label(&self) -> String {
        format!("{} {} N={}", self.regime.name(), self.decoder, self.code_n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub meta: SeriesMeta,
    pub points: Vec<BlerPoint>,
}

pub const CSV_HEADER: &str = "snr_db,frames,blocks,block_errors,bler,ci_low,ci_high,bit_errors,ber,mean_queries,decoder,regime,code_n,code_k,modulation,channel,seed";

/// CSV with one row per point; floats use the shortest round-trip form.
pub fn to_csv(series: &[Series]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in series {
        let m = &s.meta;
        for p in &s.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                p.snr_db,
                p.frames,
                p.blocks,
                p.block_errors,
                p.bler,
                p.ci_low,
                p.ci_high,
                p.bit_errors,
                p.ber,
                p.mean_queries,
                m.decoder,
                m.regime.name(),
                m.code_n,
                m.code_k,
                m.modulation,
                m.channel,
                m.seed
            );
        }
    }
    out
}
