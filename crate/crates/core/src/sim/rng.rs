//! Per-path random streams.
//!
//! Each path owns a ChaCha8 stream keyed by the run seed and indexed by the
//! path number, so a path's draws depend only on `(seed, path)` and never on
//! how paths are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn key_from_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Standard-normal source for one simulated path.
#[derive(Debug, Clone)]
pub struct PathStream {
    rng: ChaCha8Rng,
}

impl PathStream {
    pub fn new(seed: u64, path: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(key_from_seed(seed));
        rng.set_stream(path);
        PathStream { rng }
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}
