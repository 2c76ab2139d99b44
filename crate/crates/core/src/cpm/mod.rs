//! Continuous phase modulation.
//!
//! The transmitted phase is `φ(t) = 2π Σ_i h_i a_i q(t − iT)` with symbols
//! `a_i ∈ {±1, ±3, …, ±(q−1)}`, modulation indices `h_i` cycling through
//! `h_set`, and phase pulse `q(t)` rising from 0 to 1/2 over `L` symbols.
//! Symbols before the start of a frame are taken to be symbol index 0, so the
//! modulator and the trellis share a known initial state.

mod modulate;
mod siso;
mod trellis;

pub use modulate::{modulate, modulate_symbols};
pub use siso::{siso_demodulate, MaxStar, SisoOutput};
pub use trellis::{CpmTrellis, TrellisState};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest phase denominator accepted (keeps the trellis finite and small).
pub const MAX_PHASE_DENOMINATOR: u32 = 64;

/// A rational modulation index `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ModIndex {
    pub num: u32,
    pub den: u32,
}

impl ModIndex {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidCpm(format!(
                "modulation index {num}/{den} must be positive"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn value(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl std::str::FromStr for ModIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCpm(format!("modulation index must look like k/p, got {s:?}"));
        let (n, d) = s.trim().split_once('/').ok_or_else(bad)?;
        Self::new(
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        )
    }
}

impl TryFrom<String> for ModIndex {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ModIndex> for String {
    fn from(h: ModIndex) -> Self {
        format!("{}/{}", h.num, h.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PulseShape {
    /// Rectangular frequency pulse.
    Rec,
    /// Raised-cosine frequency pulse.
    Rc,
}

/// Bit-to-symbol labeling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitMap {
    #[default]
    Gray,
    Natural,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpmConfig {
    pub bits_per_symbol: usize,
    pub h_set: Vec<ModIndex>,
    pub pulse: PulseShape,
    pub pulse_len: usize,
    pub sps: usize,
    #[serde(default)]
    pub bit_map: BitMap,
    /// Differentially precode the data symbols: the transmitted symbol is
    /// `(u_n − u_{n−1}) mod q`, with `u_{−1} = 0`.
    #[serde(default)]
    pub precode: bool,
}

impl CpmConfig {
    /// Minimum shift keying: binary, h = 1/2, 1REC, precoded so that each
    /// bit is detected like an antipodal symbol.
    pub fn msk() -> Self {
        Self {
            bits_per_symbol: 1,
            h_set: vec![ModIndex { num: 1, den: 2 }],
            pulse: PulseShape::Rec,
            pulse_len: 1,
            sps: 8,
            bit_map: BitMap::Gray,
            precode: true,
        }
    }

    /// Quaternary multi-h 3RC with h cycling {4/16, 5/16}. Shaped like the
    /// ARTM waveform; not claimed to be identical to it.
    pub fn artm_like() -> Self {
        Self {
            bits_per_symbol: 2,
            h_set: vec![ModIndex { num: 4, den: 16 }, ModIndex { num: 5, den: 16 }],
            pulse: PulseShape::Rc,
            pulse_len: 3,
            sps: 8,
            bit_map: BitMap::Gray,
            precode: false,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "msk" => Ok(Self::msk()),
            "msk-plain" => Ok(Self {
                precode: false,
                ..Self::msk()
            }),
            "artm-like" => Ok(Self::artm_like()),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    /// Alphabet size `q`.
    pub fn order(&self) -> usize {
        1 << self.bits_per_symbol
    }

    /// Common denominator `p` of the modulation indices.
    pub fn phase_denominator(&self) -> u32 {
        self.h_set.iter().fold(1, |acc, h| {
            let g = gcd(h.num, h.den);
            lcm(acc, h.den / g)
        })
    }

    /// Numerators `k_i` with `h_i = k_i / p`.
    pub fn h_numerators(&self) -> Vec<u32> {
        let p = self.phase_denominator();
        self.h_set.iter().map(|h| h.num * (p / h.den)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits_per_symbol == 0 || self.bits_per_symbol > 4 {
            return Err(Error::InvalidCpm(format!(
                "bits per symbol must be 1..=4, got {}",
                self.bits_per_symbol
            )));
        }
        if self.h_set.is_empty() {
            return Err(Error::InvalidCpm("empty modulation index set".into()));
        }
        for h in &self.h_set {
            ModIndex::new(h.num, h.den)?;
        }
        if self.pulse_len == 0 || self.pulse_len > 4 {
            return Err(Error::InvalidCpm(format!(
                "pulse length must be 1..=4 symbols, got {}",
                self.pulse_len
            )));
        }
        if self.sps == 0 {
            return Err(Error::InvalidCpm("samples per symbol must be positive".into()));
        }
        let p = self
            .h_set
            .iter()
            .try_fold(1u64, |acc, h| {
                let g = gcd(h.num, h.den);
                let v = lcm64(acc, u64::from(h.den / g));
                (v <= u64::from(MAX_PHASE_DENOMINATOR)).then_some(v)
            });
        if p.is_none() {
            return Err(Error::InvalidCpm(format!(
                "modulation indices have no common denominator <= {MAX_PHASE_DENOMINATOR}"
            )));
        }
        Ok(())
    }

    /// Symbol index for `bits_per_symbol` bits, MSB first.
    pub fn symbol_of(&self, bits: &[u8]) -> usize {
        let v = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        match self.bit_map {
            BitMap::Natural => v,
            BitMap::Gray => gray_decode(v),
        }
    }

    /// Bit label of symbol index `m`, MSB first.
    pub fn label_of(&self, m: usize) -> usize {
        match self.bit_map {
            BitMap::Natural => m,
            BitMap::Gray => m ^ (m >> 1),
        }
    }

    pub fn bits_of(&self, m: usize) -> Vec<u8> {
        let label = self.label_of(m);
        let b = self.bits_per_symbol;
        (0..b).map(|j| ((label >> (b - 1 - j)) & 1) as u8).collect()
    }

    /// Amplitude `2m − (q − 1)` of symbol index `m`.
    pub fn amplitude(&self, m: usize) -> i64 {
        2 * m as i64 - (self.order() as i64 - 1)
    }

    /// Phase pulse `q(t)`, `t` in symbol periods.
    pub fn phase_pulse(&self, t: f64) -> f64 {
        let l = self.pulse_len as f64;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= l {
            return 0.5;
        }
        match self.pulse {
            PulseShape::Rec => t / (2.0 * l),
            PulseShape::Rc => {
                t / (2.0 * l) - (2.0 * std::f64::consts::PI * t / l).sin() / (4.0 * std::f64::consts::PI)
            }
        }
    }
}

/// Map a bit sequence to symbol indices.
pub fn bits_to_symbols(bits: &[u8], cfg: &CpmConfig) -> Result<Vec<usize>> {
    let b = cfg.bits_per_symbol;
    if !bits.len().is_multiple_of(b) {
        return Err(Error::InvalidCpm(format!(
            "{} bits do not fill whole {b}-bit symbols",
            bits.len()
        )));
    }
    Ok(bits.chunks_exact(b).map(|c| cfg.symbol_of(c)).collect())
}

/// Apply the differential precoder if `cfg.precode` is set.
pub fn precode_symbols(data: &[usize], cfg: &CpmConfig) -> Vec<usize> {
    if !cfg.precode {
        return data.to_vec();
    }
    let q = cfg.order();
    let mut prev = 0;
    data.iter()
        .map(|&u| {
            let m = (u + q - prev) % q;
            prev = u;
            m
        })
        .collect()
}

/// Inverse of [`bits_to_symbols`].
pub fn symbols_to_bits(symbols: &[usize], cfg: &CpmConfig) -> Vec<u8> {
    symbols.iter().flat_map(|&m| cfg.bits_of(m)).collect()
}

fn gray_decode(mut g: usize) -> usize {
    let mut v = 0;
    while g != 0 {
        v ^= g;
        g >>= 1;
    }
    v
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn lcm64(a: u64, b: u64) -> u64 {
    fn g(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            g(b, a % b)
        }
    }
    a / g(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_labels() {
        let cfg = CpmConfig::artm_like();
        assert_eq!(cfg.symbol_of(&[0, 0]), 0);
        assert_eq!(cfg.symbol_of(&[0, 1]), 1);
        assert_eq!(cfg.symbol_of(&[1, 1]), 2);
        assert_eq!(cfg.symbol_of(&[1, 0]), 3);
        for m in 0..4 {
            assert_eq!(cfg.symbol_of(&cfg.bits_of(m)), m);
        }
        let natural = CpmConfig {
            bit_map: BitMap::Natural,
            ..cfg
        };
        assert_eq!(natural.symbol_of(&[1, 1]), 3);
        assert_eq!(natural.bits_of(2), vec![1, 0]);
    }

    #[test]
    fn symbol_roundtrip() {
        let cfg = CpmConfig::artm_like();
        let bits = [0, 1, 1, 1, 1, 0, 0, 0];
        let syms = bits_to_symbols(&bits, &cfg).unwrap();
        assert_eq!(syms, vec![1, 2, 3, 0]);
        assert_eq!(symbols_to_bits(&syms, &cfg), bits.to_vec());
        assert!(bits_to_symbols(&bits[..3], &cfg).is_err());
    }

    #[test]
    fn phase_denominators() {
        assert_eq!(CpmConfig::msk().phase_denominator(), 2);
        let artm = CpmConfig::artm_like();
        assert_eq!(artm.phase_denominator(), 16);
        assert_eq!(artm.h_numerators(), vec![4, 5]);
        let bad = CpmConfig {
            h_set: vec!["1/61".parse().unwrap(), "1/59".parse().unwrap()],
            ..CpmConfig::msk()
        };
        assert!(bad.validate().is_err());
        assert!("0/2".parse::<ModIndex>().is_err());
        assert!("1-2".parse::<ModIndex>().is_err());
    }

    #[test]
    fn phase_pulses_end_at_half() {
        for cfg in [CpmConfig::msk(), CpmConfig::artm_like()] {
            let l = cfg.pulse_len as f64;
            assert_eq!(cfg.phase_pulse(0.0), 0.0);
            assert!((cfg.phase_pulse(l) - 0.5).abs() < 1e-15);
            assert!((cfg.phase_pulse(l - 1e-12) - 0.5).abs() < 1e-9);
            assert_eq!(cfg.phase_pulse(l + 3.0), 0.5);
        }
    }

    #[test]
    fn presets() {
        assert_eq!(CpmConfig::preset("msk").unwrap(), CpmConfig::msk());
        assert!(matches!(CpmConfig::preset("gmsk"), Err(Error::UnknownPreset(_))));
    }
}
