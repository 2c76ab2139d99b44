//! Rate-compatible random puncturing of quasi-cyclic LDPC codes, with and
//! without continuous phase modulation.
//!
//! The crate is organised along the signal chain:
//!
//! - [`code`]: parity-check matrices, circulant expansion, alist I/O,
//!   generator derivation and encoding, plus a registry of built-in codes.
//! - [`puncture`]: seeded interleaving, random puncturing, zero-filling
//!   depuncturing and exact rate/overhead arithmetic.
//! - [`framing`]: attached sync marker handling.
//! - [`cpm`]: CPM modulation, its phase trellis and a log-MAP SISO demodulator.
//! - [`channel`]: AWGN, BPSK and SNR bookkeeping.
//! - [`decoder`]: flooding sum-product and min-sum LDPC decoding.
//! - [`sim`]: the transmit chain, the iterative receiver and the Monte Carlo
//!   harness that writes CSV/JSON results.
//!
//! Soft values everywhere are log-likelihood ratios `ln P(0)/P(1)`: positive
//! means bit 0, zero means "no information" (an erasure).

pub mod channel;
pub mod code;
pub mod cpm;
pub mod decoder;
mod error;
pub mod framing;
pub mod gf2;
pub mod puncture;
pub mod rng;
pub mod sim;

pub use code::{LdpcCode, ParityCheckMatrix};
pub use error::{AlistError, Error, Result};

/// Magnitude bound applied to every LLR the crate produces.
pub const LLR_MAX: f64 = 50.0;

/// Clamp an LLR to `[-LLR_MAX, LLR_MAX]`.
#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_MAX, LLR_MAX)
}

/// Hard decision under the crate's sign convention; ties go to 0.
#[inline]
pub fn hard_bit(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}
