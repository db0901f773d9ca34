//! Keyed random streams.
//!
//! Every random draw in a simulation comes from a ChaCha8 stream whose 256-bit
//! key is the tuple `(seed, snr index, frame index, purpose, lane, attempt)`.
//! Two streams with different keys are independent, and a stream never depends
//! on how work was scheduled, so results do not change with the number of
//! worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// What a stream is used for. Part of the key, so payload, channel and noise
/// draws for the same frame never overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum Purpose {
    Payload = 1,
    Channel = 2,
    Noise = 3,
    Aux = 4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub snr_index: u32,
    pub frame_index: u64,
    pub purpose: Purpose,
    pub lane: u32,
    pub attempt: u32,
}

impl StreamKey {
    pub fn new(seed: u64, snr_index: u32, frame_index: u64, purpose: Purpose) -> Self {
        Self {
            seed,
            snr_index,
            frame_index,
            purpose,
            lane: 0,
            attempt: 0,
        }
    }

    pub fn with_lane(mut self, lane: u32) -> Self {
        self.lane = lane;
        self
    }

    pub fn with_attempt(mut self, attempt: u32) -> Self {
        self.attempt = attempt;
        self
    }

    /// Packs the key into a ChaCha key. The mapping is injective.
    pub fn key_bytes(&self) -> [u8; 32] {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.frame_index.to_le_bytes());
        key[16..20].copy_from_slice(&self.snr_index.to_le_bytes());
        key[20..24].copy_from_slice(&(self.purpose as u32).to_le_bytes());
        key[24..28].copy_from_slice(&self.lane.to_le_bytes());
        key[28..32].copy_from_slice(&self.attempt.to_le_bytes());
        key
    }

    pub fn rng(&self) -> SimRng {
        ChaCha8Rng::from_seed(self.key_bytes())
    }
}

/// A stream for ad-hoc use (tests, `sample-channel`) keyed only by a seed.
pub fn seeded(seed: u64) -> SimRng {
    StreamKey::new(seed, 0, 0, Purpose::Aux).rng()
}
