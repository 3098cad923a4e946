//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 keystream keyed by `(seed, stream_id)`. Distinct
//! stream ids give independent sequences for the same seed, so callers can
//! hand out one stream per work item and get results that do not depend on
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
