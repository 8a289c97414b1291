//! Derivation of independent, reproducible random streams.
//!
//! Every stochastic step draws from a ChaCha stream keyed by the tuple that
//! identifies it (master seed, strategy, beta index, trial, document id), so
//! results never depend on evaluation order or worker count.

use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

#[derive(Clone)]
pub struct StreamKey {
    hasher: Sha256,
}

impl StreamKey {
    pub fn new(master_seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"topic-noise/stream/v1");
        hasher.update(master_seed.to_le_bytes());
        Self { hasher }
    }

    pub fn with_u64(mut self, value: u64) -> Self {
        self.hasher.update([0u8]);
        self.hasher.update(value.to_le_bytes());
        self
    }

    pub fn with_str(mut self, value: &str) -> Self {
        self.hasher.update([1u8]);
        self.hasher.update((value.len() as u64).to_le_bytes());
        self.hasher.update(value.as_bytes());
        self
    }

    pub fn rng(self) -> ChaCha8Rng {
        let seed: [u8; 32] = self.hasher.finalize().into();
        ChaCha8Rng::from_seed(seed)
    }
}
