//! Attached sync marker (ASM) framing.
//!
//! A frame is `asm ‖ payload ‖ tail`. The tail is a run of known zero bits
//! (empty unless a modulator needs the frame length rounded up to a whole
//! number of symbols). Frame boundaries are known to the receiver, so the ASM
//! and tail act as known-bit priors rather than as a search target.

use crate::code::check_len;
use crate::{Error, Result, LLR_MAX};

/// Default marker content.
pub const DEFAULT_ASM_HEX: &str = "034776C7272895B0";
pub const DEFAULT_ASM_BITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameConfig {
    asm: Vec<u8>,
    payload_len: usize,
    tail_len: usize,
}

impl FrameConfig {
    pub fn new(asm: Vec<u8>, payload_len: usize) -> Self {
        Self {
            asm,
            payload_len,
            tail_len: 0,
        }
    }

    /// Marker taken from the first `bits` bits of `hex`, MSB first.
    pub fn from_hex(hex: &str, bits: usize, payload_len: usize) -> Result<Self> {
        Ok(Self::new(asm_from_hex(hex, bits)?, payload_len))
    }

    /// Append zero bits so the frame length is a multiple of `multiple`.
    pub fn with_tail_to_multiple(mut self, multiple: usize) -> Self {
        let len = self.asm.len() + self.payload_len;
        self.tail_len = (multiple - len % multiple) % multiple;
        self
    }

    pub fn asm(&self) -> &[u8] {
        &self.asm
    }

    pub fn asm_len(&self) -> usize {
        self.asm.len()
    }

    pub fn payload_len(&self) -> usize {
        self.payload_len
    }

    pub fn tail_len(&self) -> usize {
        self.tail_len
    }

    pub fn frame_len(&self) -> usize {
        self.asm.len() + self.payload_len + self.tail_len
    }

    /// Range of payload positions within a frame.
    pub fn payload_range(&self) -> std::ops::Range<usize> {
        self.asm.len()..self.asm.len() + self.payload_len
    }
}

pub fn asm_from_hex(hex: &str, bits: usize) -> Result<Vec<u8>> {
    let hex = hex.trim().trim_start_matches("0x");
    if bits > hex.len() * 4 {
        return Err(Error::InvalidFrame(format!(
            "{bits} marker bits requested from {} hex digits",
            hex.len()
        )));
    }
    let mut out = Vec::with_capacity(hex.len() * 4);
    for ch in hex.chars() {
        let d = ch
            .to_digit(16)
            .ok_or_else(|| Error::InvalidFrame(format!("bad hex digit {ch:?}")))?;
        out.extend((0..4).rev().map(|b| ((d >> b) & 1) as u8));
    }
    out.truncate(bits);
    Ok(out)
}

/// `asm ‖ payload ‖ tail`.
pub fn attach_asm(payload: &[u8], cfg: &FrameConfig) -> Result<Vec<u8>> {
    check_len(cfg.payload_len, payload.len())?;
    let mut u = Vec::with_capacity(cfg.frame_len());
    u.extend_from_slice(&cfg.asm);
    u.extend_from_slice(payload);
    u.resize(cfg.frame_len(), 0);
    Ok(u)
}

/// Split frame LLRs into `(asm, payload)`; tail values are dropped.
pub fn split_frame<'a>(llr: &'a [f64], cfg: &FrameConfig) -> Result<(&'a [f64], &'a [f64])> {
    check_len(cfg.frame_len(), llr.len())?;
    Ok((&llr[..cfg.asm_len()], &llr[cfg.payload_range()]))
}

/// Overwrite the ASM and tail positions of a frame-length LLR vector with
/// `±LLR_MAX` according to their known bits.
pub fn inject_known_priors(llr: &mut [f64], cfg: &FrameConfig) -> Result<()> {
    check_len(cfg.frame_len(), llr.len())?;
    for (l, &b) in llr.iter_mut().zip(&cfg.asm) {
        *l = if b == 0 { LLR_MAX } else { -LLR_MAX };
    }
    let tail_start = cfg.asm_len() + cfg.payload_len;
    for l in &mut llr[tail_start..] {
        *l = LLR_MAX;
    }
    Ok(())
}

/// Frame-length prior vector: known bits at `±LLR_MAX`, payload from `payload`.
pub fn frame_priors(payload: &[f64], cfg: &FrameConfig) -> Result<Vec<f64>> {
    check_len(cfg.payload_len, payload.len())?;
    let mut out = vec![0.0; cfg.frame_len()];
    out[cfg.payload_range()].copy_from_slice(payload);
    inject_known_priors(&mut out, cfg)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attach_concatenates() {
        let cfg = FrameConfig::new(vec![1, 0, 1, 0], 4);
        assert_eq!(attach_asm(&[0, 0, 1, 1], &cfg).unwrap(), vec![1, 0, 1, 0, 0, 0, 1, 1]);
        let bare = FrameConfig::new(vec![], 3);
        assert_eq!(attach_asm(&[1, 1, 0], &bare).unwrap(), vec![1, 1, 0]);
        assert!(attach_asm(&[1], &cfg).is_err());
    }

    #[test]
    fn split_restores_parts() {
        let cfg = FrameConfig::new(vec![1, 1], 3);
        let llr = [1.0, 2.0, 3.0, 4.0, 5.0];
        let (a, p) = split_frame(&llr, &cfg).unwrap();
        assert_eq!([a, p].concat(), llr.to_vec());
        let bare = FrameConfig::new(vec![], 2);
        assert_eq!(split_frame(&[7.0, 8.0], &bare).unwrap().1, &[7.0, 8.0]);
    }

    #[test]
    fn perfect_priors_follow_known_bits() {
        let cfg = FrameConfig::new(vec![0, 1, 1], 2).with_tail_to_multiple(2);
        assert_eq!(cfg.tail_len(), 1);
        let pri = frame_priors(&[0.5, -0.25], &cfg).unwrap();
        assert_eq!(pri, vec![50.0, -50.0, -50.0, 0.5, -0.25, 50.0]);
    }

    #[test]
    fn default_marker() {
        let asm = asm_from_hex(DEFAULT_ASM_HEX, DEFAULT_ASM_BITS).unwrap();
        assert_eq!(asm.len(), 64);
        assert_eq!(&asm[..8], &[0, 0, 0, 0, 0, 0, 1, 1]);
        assert_eq!(asm_from_hex("F", 2).unwrap(), vec![1, 1]);
        assert!(asm_from_hex("F", 5).is_err());
        assert!(asm_from_hex("G", 4).is_err());
    }
}
