//! Link simulation: the transmit chain, the iterative receiver and the Monte
//! Carlo harness.
//!
//! Transmit: encode → interleave → puncture → attach ASM → BPSK or CPM.
//! Receive (CPM): the SISO demodulator and the LDPC decoder exchange
//! extrinsic LLRs for up to `global_iters` passes. The first pass runs the
//! demodulator without priors; later passes feed it the decoder's extrinsic
//! output, interleaved and punctured back to the transmitted positions. The
//! decoder keeps its check messages between passes, so punctured bits keep
//! the soft values learned in earlier passes.
//! Receive (no CPM): BPSK LLRs are depunctured, deinterleaved and decoded once.

mod config;
mod link;
mod output;
mod run;

pub use config::{Mode, SimConfig, SnrAxis};
pub use link::{ChannelFrame, Link, LinkParams, RxOutcome, TrialOutcome, TruthRecord};
pub use output::{csv_row, write_csv, write_json, CSV_HEADER};
pub use run::{BerRecord, Simulation};
