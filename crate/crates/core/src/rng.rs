//! Counter-based random streams.
//!
//! A [`RandomStream`] is a position in a tree of independent ChaCha streams.
//! Children are derived by mixing a key into the parent's 256-bit seed, so the
//! numbers drawn for a given (replication, level, sample, purpose) path never
//! depend on how work is scheduled across threads.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// What a child stream is used for. Keeps the draws for the field, the
/// partition and the jump heights of one realization independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Field,
    Partition,
    Jumps,
    Synthetic,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Field => 0x4649_454c_4400_0001,
            Purpose::Partition => 0x5041_5254_0000_0002,
            Purpose::Jumps => 0x4a55_4d50_0000_0003,
            Purpose::Synthetic => 0x5359_4e54_0000_0004,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    key: [u64; 4],
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u64; 4];
        let mut s = seed;
        for k in key.iter_mut() {
            s = splitmix64(s);
            *k = s;
        }
        RandomStream { key }
    }

    /// Child stream keyed by an integer (replication, level or sample index).
    pub fn child(&self, index: u64) -> Self {
        let mut key = [0u64; 4];
        let mut acc = splitmix64(index ^ 0xa076_1d64_78bd_642f);
        for (i, k) in key.iter_mut().enumerate() {
            acc = splitmix64(acc ^ self.key[i].rotate_left(17 * i as u32 + 7));
            *k = acc;
        }
        RandomStream { key }
    }

    pub fn purpose(&self, purpose: Purpose) -> Self {
        self.child(purpose.tag())
    }

    /// Hex digest of the stream key, for cache fingerprints and manifests.
    pub fn key_hex(&self) -> String {
        self.key.iter().map(|k| format!("{k:016x}")).collect()
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        for (chunk, k) in seed.chunks_exact_mut(8).zip(self.key.iter()) {
            chunk.copy_from_slice(&k.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
