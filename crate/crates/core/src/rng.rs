//! Seeded, splittable randomness.
//!
//! Each `(master_seed, trial_index, stream_id)` triple names an independent
//! ChaCha8 stream. Stream 0 feeds the environment (the `(v, theta)` draws),
//! stream 1 feeds an algorithm's own coin flips, so changing an algorithm
//! never shifts the input sequence it sees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ENV_STREAM: u64 = 0;
pub const ALGO_STREAM: u64 = 1;

#[derive(Clone, Debug)]
pub struct SeededSampler {
    rng: ChaCha8Rng,
    master_seed: u64,
    trial_index: u64,
    stream_id: u64,
    draws: u64,
}

impl SeededSampler {
    pub fn new(master_seed: u64, trial_index: u64, stream_id: u64) -> SeededSampler {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&trial_index.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_id);
        SeededSampler { rng, master_seed, trial_index, stream_id, draws: 0 }
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.rng.random::<f64>()
    }

    /// `true` with probability `p` (clamped to `[0, 1]`). Always consumes one draw.
    pub fn coin(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Number of draws taken so far.
    pub fn draw_index(&self) -> u64 {
        self.draws
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn trial_index(&self) -> u64 {
        self.trial_index
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}
