//! Indexed random streams.
//!
//! Stream `i` of master seed `s` is a ChaCha8 generator seeded with
//! `splitmix64(s ^ splitmix64(i))`, where `splitmix64` is the standard
//! SplitMix64 output function (Steele, Lea & Flood). The mapping is fixed:
//! changing it changes every reproducible result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type StreamRng = ChaCha8Rng;

#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeededStream {
            master_seed,
            stream_index,
        }
    }

    /// The 64-bit seed this stream feeds to its generator.
    pub fn seed(&self) -> u64 {
        splitmix64(self.master_seed ^ splitmix64(self.stream_index))
    }

    pub fn rng(&self) -> StreamRng {
        ChaCha8Rng::seed_from_u64(self.seed())
    }

    /// A derived stream, for nested campaigns that need their own index space.
    pub fn child(&self, index: u64) -> SeededStream {
        SeededStream::new(self.seed(), index)
    }
}
