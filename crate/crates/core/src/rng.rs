//! Seeded random streams.
//!
//! Every random quantity comes from a ChaCha8 generator keyed by a 64-bit
//! master seed. Independent consumers (replications, probe sets, truth
//! draws) select distinct ChaCha stream ids, so the bits any consumer sees
//! depend only on `(seed, stream)` and never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids used by the library for its own draws.
pub mod stream {
    pub const SAMPLES: u64 = 0;
    pub const PROBES: u64 = 1;
    pub const FAMILY: u64 = 2;
    /// Replication `i` uses stream `REPLICATION_BASE + i`.
    pub const REPLICATION_BASE: u64 = 1 << 32;
}

/// Generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive the master seed of replication `index` from `master`.
///
/// The first word of stream `REPLICATION_BASE + index` becomes the child seed.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    use rand::RngCore;
    rng_for(master, stream::REPLICATION_BASE + index).next_u64()
}
