//! Seeded random streams.
//!
//! Every randomized routine takes an explicit `u64` seed. Particle
//! simulations derive one independent stream per particle from
//! `(seed, index)`, so results do not depend on how work is scheduled.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type StreamRng = Xoshiro256PlusPlus;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for a sequential (single-stream) computation.
pub fn seeded(seed: u64) -> StreamRng {
    stream(seed, u64::MAX)
}

/// Generator for stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut state = seed;
    let a = splitmix64(&mut state);
    let mut state = a ^ index.wrapping_mul(GOLDEN).rotate_left(17);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    Xoshiro256PlusPlus::from_seed(bytes)
}
