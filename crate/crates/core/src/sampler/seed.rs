use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one replicate's randomness: a master seed and a replicate
/// index. Independent substreams are derived from it by label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master: u64,
    pub replicate: u64,
}

pub mod stream {
    pub const TYPICAL: u64 = 1;
    pub const DIRECTED: u64 = 2;
    pub const WINDOW: u64 = 3;
    pub const OUTSIDE: u64 = 4;
    pub const REVERSED: u64 = 5;
    pub const POINTS: u64 = 6;
    pub const EDGES: u64 = 7;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeedSpec {
    pub fn new(master: u64, replicate: u64) -> Self {
        SeedSpec { master, replicate }
    }

    /// Generator for the given substream label. Depends only on
    /// `(master, replicate, label)`.
    pub fn rng(&self, label: u64) -> ChaCha8Rng {
        let mut state = self.master;
        let a = splitmix64(&mut state);
        let mut state = a ^ self.replicate.wrapping_mul(0xD1B5_4A32_D192_ED03);
        let b = splitmix64(&mut state);
        let mut state = b ^ label.wrapping_mul(0x8CB9_2BA7_2F3D_8DD7);
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
