//! Seeded, splittable random streams.
//!
//! Every replication and every bootstrap summary draws from its own ChaCha8
//! stream, selected by a 64-bit stream id under a common seed. Results are
//! therefore independent of scheduling and worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const BOOTSTRAP_TAG: u64 = 1 << 63;

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream for replication `rep` of DGP number `dgp`.
pub fn replication_stream(dgp: usize, rep: usize) -> u64 {
    ((dgp as u64) << 40) | rep as u64
}

/// Stream for bootstrap summary `column` of DGP number `dgp`.
pub fn bootstrap_stream(dgp: usize, column: usize) -> u64 {
    BOOTSTRAP_TAG | ((dgp as u64) << 40) | column as u64
}
