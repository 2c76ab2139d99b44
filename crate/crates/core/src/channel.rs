//! AWGN channel, BPSK mapping and SNR bookkeeping.
//!
//! Noise convention: `noise_var` is the variance per real dimension. A complex
//! sample therefore receives total noise power `2·noise_var`, and with symbol
//! energy `E_s` the ratio `E_s/N_0 = E_s / (2·noise_var)`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{clamp_llr, Error, Result};

/// A sample type that can be corrupted by AWGN.
pub trait NoisySample: Copy {
    fn add_noise<R: Rng + ?Sized>(self, sigma: f64, rng: &mut R) -> Self;
}

impl NoisySample for f64 {
    fn add_noise<R: Rng + ?Sized>(self, sigma: f64, rng: &mut R) -> Self {
        let n: f64 = rng.sample(StandardNormal);
        self + sigma * n
    }
}

impl NoisySample for Complex64 {
    fn add_noise<R: Rng + ?Sized>(self, sigma: f64, rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        self + Complex64::new(sigma * re, sigma * im)
    }
}

/// Add i.i.d. Gaussian noise of variance `noise_var` per real dimension.
pub fn add_awgn<S: NoisySample, R: Rng + ?Sized>(
    samples: &[S],
    noise_var: f64,
    rng: &mut R,
) -> Result<Vec<S>> {
    if !(noise_var >= 0.0) || !noise_var.is_finite() {
        return Err(Error::BadNoiseVariance {
            value: noise_var,
            requirement: "finite and nonnegative",
        });
    }
    if noise_var == 0.0 {
        return Ok(samples.to_vec());
    }
    let sigma = noise_var.sqrt();
    Ok(samples.iter().map(|&s| s.add_noise(sigma, rng)).collect())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Noise variance per real dimension for a given `E_b/N_0`.
///
/// `effective_rate` is information bits per channel symbol and
/// `symbol_energy` the energy of one channel symbol (1 for BPSK, `sps` for
/// unit-amplitude CPM sampled `sps` times per symbol).
pub fn ebn0_to_noise_var(ebn0_db: f64, effective_rate: f64, symbol_energy: f64) -> Result<f64> {
    if !(effective_rate > 0.0) {
        return Err(Error::InvalidRate(format!(
            "effective rate must be positive, got {effective_rate}"
        )));
    }
    Ok(symbol_energy / (2.0 * effective_rate * db_to_linear(ebn0_db)))
}

/// Inverse of [`ebn0_to_noise_var`].
pub fn noise_var_to_ebn0(noise_var: f64, effective_rate: f64, symbol_energy: f64) -> f64 {
    10.0 * (symbol_energy / (2.0 * effective_rate * noise_var)).log10()
}

/// An operating point expressed both per information bit and per channel
/// symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrPoint {
    pub ebn0_db: f64,
    pub esn0_db: f64,
    /// Information bits per channel symbol, `R_p · log2(q)`.
    pub effective_rate: f64,
}

impl SnrPoint {
    pub fn from_ebn0(ebn0_db: f64, effective_rate: f64) -> Self {
        Self {
            ebn0_db,
            esn0_db: ebn0_db + 10.0 * effective_rate.log10(),
            effective_rate,
        }
    }

    pub fn from_esn0(esn0_db: f64, effective_rate: f64) -> Self {
        Self {
            ebn0_db: esn0_db - 10.0 * effective_rate.log10(),
            esn0_db,
            effective_rate,
        }
    }

    pub fn noise_var(&self, symbol_energy: f64) -> Result<f64> {
        ebn0_to_noise_var(self.ebn0_db, self.effective_rate, symbol_energy)
    }
}

/// Bit 0 ↦ +1, bit 1 ↦ −1.
pub fn bpsk_modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Channel LLRs `2·rx/noise_var`, clamped.
pub fn bpsk_llr(rx: &[f64], noise_var: f64) -> Result<Vec<f64>> {
    if !(noise_var > 0.0) {
        return Err(Error::BadNoiseVariance {
            value: noise_var,
            requirement: "positive",
        });
    }
    let scale = 2.0 / noise_var;
    Ok(rx.iter().map(|&r| clamp_llr(scale * r)).collect())
}

/// Parse an SNR sweep `"start:stop:step"` (inclusive of `stop` up to rounding).
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad number {s:?} in sweep {spec:?}")))
    };
    match parts[..] {
        [single] => Ok(vec![num(single)?]),
        [a, b, c] => {
            let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
            if !(step > 0.0) || stop < start {
                return Err(Error::Config(format!("bad sweep {spec:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // Round to 1e-9 dB so printed values are clean.
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(Error::Config(format!(
            "sweep must be start:stop:step, got {spec:?}"
        ))),
    }
}
