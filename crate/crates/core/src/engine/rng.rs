use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream reserved for initial status sampling.
pub(crate) const INIT_STREAM: u64 = u64::MAX;

/// Generator for `stream` of the run keyed by `seed`, positioned at word 0.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Fills `out` with the uniforms of nodes `start..start + out.len()` for one iteration.
pub(crate) fn node_uniforms(seed: u64, iteration: u64, start: usize, out: &mut [f64]) {
    let mut rng = stream(seed, iteration);
    // Each f64 consumes one u64, i.e. two 32-bit words.
    rng.set_word_pos(2 * start as u128);
    for u in out {
        *u = rng.gen::<f64>();
    }
}

/// Seed of run `run` in a batch keyed by `base` (splitmix64 finaliser).
pub fn child_seed(base: u64, run: u64) -> u64 {
    let mut z = base ^ run.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
