//! Seeded, splittable random streams.
//!
//! Every random quantity in a simulation is drawn from a ChaCha8 stream keyed
//! by the master seed, with the 64-bit stream id set to `tag ^ index`. A trial
//! therefore depends only on `(master seed, trial index)`, never on which
//! worker ran it or in what order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator type used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Stream families. The tag occupies the top byte so it never collides with a
/// trial index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamTag {
    Source = 0x01 << 56,
    Noise = 0x02 << 56,
    Pattern = 0x03 << 56,
    Interleaver = 0x04 << 56,
}

/// Generator seeded directly from `seed` (stream 0).
pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The stream `tag ^ index` under `master`.
pub fn stream(master: u64, tag: StreamTag, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(tag as u64 ^ index);
    rng
}

/// A 64-bit sub-seed drawn from `stream(master, tag, index)`.
pub fn derive_seed(master: u64, tag: StreamTag, index: u64) -> u64 {
    stream(master, tag, index).next_u64()
}
