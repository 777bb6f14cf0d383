//! Counter-based random streams.
//!
//! Every randomized computation in this crate draws from a ChaCha8 stream
//! addressed by `(master_seed, stream_index)`. Streams are independent, so
//! trials can run on any worker in any order and still reproduce bit-for-bit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream index used when generating an instance from a config seed.
/// Trial indices count up from zero, so the top of the range is reserved.
pub const INSTANCE_STREAM: u64 = u64::MAX;

/// Stream index used for synthetic election generation.
pub const ELECTION_STREAM: u64 = u64::MAX - 1;

/// RNG for one trial (or any other addressed sub-computation) of an
/// experiment with the given master seed.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
