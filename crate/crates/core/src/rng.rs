//! Seed discipline. Every chain owns a ChaCha stream derived from the master
//! seed by a fixed stream number, so the target chain's draws never depend on
//! what the other chains consume.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fixed stream offsets per chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Target = 0,
    Metropolis = 1,
    Auxiliary = 2,
    /// Graph generation and other setup work.
    Setup = 3,
}

pub type ChainRng = ChaCha8Rng;

pub fn chain_rng(seed: u64, stream: Stream) -> ChainRng {
    stream_rng(seed, stream as u64)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer. A bijection on `u64`, so distinct inputs give
/// distinct outputs.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replication `index` under `master`. Pairwise distinct across
/// indices for a fixed master seed.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index))
}
