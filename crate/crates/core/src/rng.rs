//! Deterministic, splittable random streams.
//!
//! A stream is a ChaCha20 keystream. Children are keyed by a separate
//! keystream of the parent key, indexed by position, so `split(i)` does not
//! depend on how much of the parent has already been consumed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const DERIVE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone)]
pub struct RngStream {
    key: [u8; 32],
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        let key = ChaCha20Rng::seed_from_u64(seed).get_seed();
        Self::from_key(key)
    }

    fn from_key(key: [u8; 32]) -> Self {
        Self {
            key,
            rng: ChaCha20Rng::from_seed(key),
        }
    }

    /// Independent child stream number `index`.
    pub fn split(&self, index: u64) -> Self {
        let mut derive = ChaCha20Rng::from_seed(self.key);
        derive.set_stream(DERIVE_STREAM);
        derive.set_word_pos(u128::from(index) * 8);
        let mut key = [0u8; 32];
        derive.fill_bytes(&mut key);
        Self::from_key(key)
    }

    /// Child for a path of indices, e.g. `[window, replicate]`.
    pub fn split_path(&self, path: &[u64]) -> Self {
        path.iter().fold(self.clone(), |s, &i| s.split(i))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
