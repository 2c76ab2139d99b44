use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cpm::{CpmConfig, MaxStar};
use crate::decoder::{DecoderConfig, DecoderVariant};
use crate::framing::{DEFAULT_ASM_BITS, DEFAULT_ASM_HEX};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    NoCpm,
    Cpm,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::NoCpm => "no-cpm",
            Mode::Cpm => "cpm",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "no-cpm" => Ok(Mode::NoCpm),
            "cpm" => Ok(Mode::Cpm),
            _ => Err(Error::Config(format!("unknown mode {s:?}"))),
        }
    }
}

/// Which SNR the sweep values denote.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrAxis {
    #[default]
    Ebn0,
    Esn0,
}

/// Everything a sweep needs. Deserialized from TOML; every field has a
/// default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Registry code name, used unless `alist` is set.
    pub code: String,
    /// Parity-check matrix file; relative paths resolve against the config file.
    pub alist: Option<PathBuf>,
    pub mode: Mode,
    /// Puncturing overheads in percent.
    pub deltas: Vec<f64>,
    /// `"start:stop:step"` in dB.
    pub snr: String,
    pub snr_axis: SnrAxis,
    pub cpm_preset: String,
    /// Explicit CPM parameters; overrides `cpm_preset`.
    pub cpm: Option<CpmConfig>,
    pub siso: MaxStar,
    pub global_iters: usize,
    /// LDPC iterations per decoder call; defaults to 50 without CPM and 10
    /// per global pass with CPM.
    pub local_iters: Option<usize>,
    pub decoder: String,
    pub seed: u64,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub asm_hex: String,
    pub asm_bits: usize,
    /// Count ASM (and tail) bits as overhead in the Eb/N0 normalization.
    pub include_asm_in_snr: bool,
    /// Draw a fresh puncturing pattern for every codeword.
    pub pattern_per_codeword: bool,
    /// Interleave the codeword before puncturing.
    pub interleave: bool,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            code: "standin-artm0-r23-n1024".into(),
            alist: None,
            mode: Mode::NoCpm,
            deltas: vec![0.0, 1.0, 5.0, 10.0, 16.7],
            snr: "0:4:0.5".into(),
            snr_axis: SnrAxis::Ebn0,
            cpm_preset: "artm-like".into(),
            cpm: None,
            siso: MaxStar::LogMap,
            global_iters: 5,
            local_iters: None,
            decoder: "sum-product".into(),
            seed: 1,
            min_frame_errors: 100,
            max_frames: 1_000_000,
            asm_hex: DEFAULT_ASM_HEX.into(),
            asm_bits: DEFAULT_ASM_BITS,
            include_asm_in_snr: false,
            pattern_per_codeword: false,
            interleave: true,
            workers: 0,
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Load a config file, resolving a relative `alist` path against it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(a) = &cfg.alist {
            if a.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.alist = Some(dir.join(a));
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn cpm_config(&self) -> Result<CpmConfig> {
        match &self.cpm {
            Some(c) => Ok(c.clone()),
            None => CpmConfig::preset(&self.cpm_preset),
        }
    }

    pub fn local_iters(&self) -> usize {
        self.local_iters.unwrap_or(match self.mode {
            Mode::NoCpm => 50,
            Mode::Cpm => 10,
        })
    }

    pub fn decoder_config(&self) -> Result<DecoderConfig> {
        Ok(DecoderConfig {
            variant: self.decoder.parse::<DecoderVariant>()?,
            max_iters: self.local_iters(),
            early_stop: true,
        })
    }

    /// Global passes actually run: always 1 without CPM.
    pub fn effective_global_iters(&self) -> usize {
        match self.mode {
            Mode::NoCpm => 1,
            Mode::Cpm => self.global_iters,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() {
            return Err(Error::Config("no puncturing overheads given".into()));
        }
        if self.deltas.iter().any(|d| !(0.0..100.0).contains(d)) {
            return Err(Error::Config("overheads must lie in [0, 100)".into()));
        }
        if self.mode == Mode::Cpm {
            if self.global_iters == 0 {
                return Err(Error::Config("global_iters must be at least 1".into()));
            }
            self.cpm_config()?.validate()?;
        }
        if self.local_iters() == 0 {
            return Err(Error::Config("local_iters must be at least 1".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be positive".into()));
        }
        self.decoder.parse::<DecoderVariant>()?;
        crate::channel::parse_sweep(&self.snr)?;
        Ok(())
    }
}
