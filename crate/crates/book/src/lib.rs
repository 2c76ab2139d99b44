//! The user guide's chapters, compiled as documentation so that every Rust
//! snippet in them runs under `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}

#[doc = include_str!("../../../book/src/puncturing.md")]
pub mod puncturing {}

#[doc = include_str!("../../../book/src/framing.md")]
pub mod framing {}

#[doc = include_str!("../../../book/src/cpm.md")]
pub mod cpm {}

#[doc = include_str!("../../../book/src/decoding.md")]
pub mod decoding {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
