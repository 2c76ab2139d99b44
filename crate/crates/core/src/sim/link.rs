use std::borrow::Cow;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;

use super::Mode;
use crate::channel::{add_awgn, bpsk_llr, bpsk_modulate};
use crate::code::{check_len, LdpcCode};
use crate::cpm::{modulate, siso_demodulate, CpmConfig, CpmTrellis, MaxStar};
use crate::decoder::{decode_with_state, DecoderConfig, DecoderState};
use crate::framing::{attach_asm, frame_priors, split_frame, FrameConfig};
use crate::puncture::{
    deinterleave, depuncture, interleave, puncture, punctured_count, sample_pattern,
    InterleaverPermutation, PuncturePattern, RatePair,
};
use crate::rng::{self, StreamTag};
use crate::{hard_bit, Error, Result};

/// Samples on the channel.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelFrame {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl ChannelFrame {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn with_noise<R: Rng + ?Sized>(&self, noise_var: f64, rng: &mut R) -> Result<Self> {
        Ok(match self {
            Self::Real(v) => Self::Real(add_awgn(v, noise_var, rng)?),
            Self::Complex(v) => Self::Complex(add_awgn(v, noise_var, rng)?),
        })
    }
}

/// What the transmitter knew, kept for error counting.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthRecord {
    pub info: Vec<u8>,
    pub codeword: Vec<u8>,
    /// Bits handed to the modulator (ASM, payload, tail).
    pub frame: Vec<u8>,
    pub pattern: PuncturePattern,
    pub permutation: InterleaverPermutation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RxOutcome {
    pub info_hat: Vec<u8>,
    pub codeword_hat: Vec<u8>,
    pub converged: bool,
    pub global_iters: usize,
    /// LDPC iterations summed over all global passes.
    pub local_iters: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    pub bit_errors: u64,
    pub coded_bit_errors: u64,
    pub frame_error: bool,
    pub global_iters: usize,
    pub local_iters: usize,
}

enum Modem {
    Bpsk,
    Cpm {
        trellis: Arc<CpmTrellis>,
        rule: MaxStar,
    },
}

/// A fully configured transmitter/receiver pair for one puncturing overhead.
///
/// Immutable and shareable across worker threads; trials differ only in the
/// streams selected by their trial index.
pub struct Link {
    code: Arc<LdpcCode>,
    modem: Modem,
    permutation: InterleaverPermutation,
    pattern: PuncturePattern,
    pattern_per_codeword: bool,
    frame: FrameConfig,
    decoder: DecoderConfig,
    global_iters: usize,
    rates: RatePair,
    master_seed: u64,
}

/// Parameters for [`Link::new`].
pub struct LinkParams {
    pub mode: Mode,
    pub cpm: Option<(CpmConfig, Arc<CpmTrellis>, MaxStar)>,
    pub decoder: DecoderConfig,
    pub global_iters: usize,
    pub asm: Vec<u8>,
    pub pattern_per_codeword: bool,
    pub interleave: bool,
    pub master_seed: u64,
}

impl Link {
    pub fn new(code: Arc<LdpcCode>, rates: RatePair, params: LinkParams) -> Result<Self> {
        let n = code.n();
        let n_punct = punctured_count(rates.delta_pct, n);
        let pattern = sample_pattern(
            rng::derive_seed(params.master_seed, StreamTag::Pattern, 0),
            n,
            n_punct,
        )?;
        let permutation = if params.interleave {
            crate::puncture::make_permutation(
                rng::derive_seed(params.master_seed, StreamTag::Interleaver, 0),
                n,
            )
        } else {
            InterleaverPermutation::identity(n)
        };
        let (modem, frame) = match params.mode {
            Mode::NoCpm => (Modem::Bpsk, FrameConfig::new(Vec::new(), n - n_punct)),
            Mode::Cpm => {
                let (cfg, trellis, rule) = params
                    .cpm
                    .ok_or_else(|| Error::Config("cpm mode without CPM parameters".into()))?;
                let frame =
                    FrameConfig::new(params.asm, n - n_punct).with_tail_to_multiple(cfg.bits_per_symbol);
                (Modem::Cpm { trellis, rule }, frame)
            }
        };
        Ok(Self {
            code,
            modem,
            permutation,
            pattern,
            pattern_per_codeword: params.pattern_per_codeword,
            frame,
            decoder: params.decoder,
            global_iters: params.global_iters.max(1),
            rates,
            master_seed: params.master_seed,
        })
    }

    pub fn code(&self) -> &LdpcCode {
        &self.code
    }

    pub fn rates(&self) -> RatePair {
        self.rates
    }

    pub fn frame_config(&self) -> &FrameConfig {
        &self.frame
    }

    pub fn permutation(&self) -> &InterleaverPermutation {
        &self.permutation
    }

    pub fn n_punctured(&self) -> usize {
        self.pattern.n_punctured()
    }

    /// Seed of the shared pattern (per-codeword patterns derive from the
    /// trial index instead).
    pub fn pattern_seed(&self) -> u64 {
        self.pattern.seed()
    }

    /// Energy of one channel symbol.
    pub fn symbol_energy(&self) -> f64 {
        match &self.modem {
            Modem::Bpsk => 1.0,
            Modem::Cpm { trellis, .. } => trellis.config().sps as f64,
        }
    }

    pub fn bits_per_symbol(&self) -> usize {
        match &self.modem {
            Modem::Bpsk => 1,
            Modem::Cpm { trellis, .. } => trellis.config().bits_per_symbol,
        }
    }

    /// Information bits per channel symbol: `R_p · log2(q)`, optionally
    /// scaled by the payload share of the frame.
    pub fn effective_rate(&self, include_asm: bool) -> f64 {
        let mut r = self.rates.punctured.to_f64().unwrap_or(f64::NAN) * self.bits_per_symbol() as f64;
        if include_asm {
            r *= self.frame.payload_len() as f64 / self.frame.frame_len() as f64;
        }
        r
    }

    pub fn pattern_for(&self, trial: u64) -> Result<Cow<'_, PuncturePattern>> {
        if self.pattern_per_codeword {
            Ok(Cow::Owned(sample_pattern(
                rng::derive_seed(self.master_seed, StreamTag::Pattern, trial),
                self.pattern.n(),
                self.pattern.n_punctured(),
            )?))
        } else {
            Ok(Cow::Borrowed(&self.pattern))
        }
    }

    /// Random information bits for `trial`.
    pub fn source_bits(&self, trial: u64) -> Vec<u8> {
        let mut rng = rng::stream(self.master_seed, StreamTag::Source, trial);
        (0..self.code.k()).map(|_| rng.random::<bool>() as u8).collect()
    }

    /// Encode, interleave, puncture, frame and modulate.
    pub fn transmit_frame(&self, x: &[u8], trial: u64) -> Result<(ChannelFrame, TruthRecord)> {
        check_len(self.code.k(), x.len())?;
        let codeword = self.code.encode(x)?;
        let interleaved = interleave(&codeword, &self.permutation)?;
        let pattern = self.pattern_for(trial)?;
        let payload = puncture(&interleaved, &pattern)?;
        let frame = attach_asm(&payload, &self.frame)?;
        let samples = match &self.modem {
            Modem::Bpsk => ChannelFrame::Real(bpsk_modulate(&frame)),
            Modem::Cpm { trellis, .. } => ChannelFrame::Complex(modulate(&frame, trellis.config())?),
        };
        Ok((
            samples,
            TruthRecord {
                info: x.to_vec(),
                codeword,
                frame,
                pattern: pattern.into_owned(),
                permutation: self.permutation.clone(),
            },
        ))
    }

    /// Demodulate and decode one frame.
    pub fn receive_frame(&self, rx: &ChannelFrame, noise_var: f64, trial: u64) -> Result<RxOutcome> {
        let pattern = self.pattern_for(trial)?;
        match (&self.modem, rx) {
            (Modem::Bpsk, ChannelFrame::Real(samples)) => {
                let llr = bpsk_llr(samples, noise_var)?;
                let (_, payload) = split_frame(&llr, &self.frame)?;
                let full = depuncture(payload, &pattern)?;
                let input = deinterleave(&full, &self.permutation)?;
                let mut state = DecoderState::new(&self.code);
                let res = decode_with_state(&input, &self.code, &self.decoder, &mut state)?;
                Ok(self.outcome(&res.posterior_llrs, res.converged, 1, res.iterations_used))
            }
            (Modem::Cpm { trellis, rule }, ChannelFrame::Complex(samples)) => {
                self.receive_cpm(samples, noise_var, trellis, *rule, &pattern)
            }
            _ => Err(Error::Config("channel frame does not match the link's modulation".into())),
        }
    }

    fn receive_cpm(
        &self,
        samples: &[Complex64],
        noise_var: f64,
        trellis: &CpmTrellis,
        rule: MaxStar,
        pattern: &PuncturePattern,
    ) -> Result<RxOutcome> {
        let mut state = DecoderState::new(&self.code);
        let mut priors: Option<Vec<f64>> = None;
        let mut local = 0;
        let mut last = None;
        for pass in 1..=self.global_iters {
            let siso = siso_demodulate(samples, priors.as_deref(), noise_var, trellis, rule)?;
            let (_, payload) = split_frame(&siso.extrinsic, &self.frame)?;
            let full = depuncture(payload, pattern)?;
            let input = deinterleave(&full, &self.permutation)?;
            let res = decode_with_state(&input, &self.code, &self.decoder, &mut state)?;
            local += res.iterations_used;
            let done = res.converged || pass == self.global_iters;
            if !done {
                let back = interleave(&res.extrinsic_llrs, &self.permutation)?;
                let kept = puncture(&back, pattern)?;
                priors = Some(frame_priors(&kept, &self.frame)?);
            }
            last = Some((res, pass));
            if done {
                break;
            }
        }
        let (res, passes) = last.expect("at least one global pass");
        Ok(self.outcome(&res.posterior_llrs, res.converged, passes, local))
    }

    fn outcome(&self, posterior: &[f64], converged: bool, global: usize, local: usize) -> RxOutcome {
        let codeword_hat: Vec<u8> = posterior.iter().map(|&l| hard_bit(l)).collect();
        RxOutcome {
            info_hat: self.code.extract_info(&codeword_hat),
            codeword_hat,
            converged,
            global_iters: global,
            local_iters: local,
        }
    }

    /// One complete Monte Carlo trial, determined by `(master seed, trial)`.
    pub fn run_trial(&self, trial: u64, noise_var: f64) -> Result<TrialOutcome> {
        let x = self.source_bits(trial);
        let (tx, truth) = self.transmit_frame(&x, trial)?;
        let mut noise = rng::stream(self.master_seed, StreamTag::Noise, trial);
        let rx = tx.with_noise(noise_var, &mut noise)?;
        let out = self.receive_frame(&rx, noise_var, trial)?;
        let bit_errors = count_diff(&out.info_hat, &truth.info);
        Ok(TrialOutcome {
            bit_errors,
            coded_bit_errors: count_diff(&out.codeword_hat, &truth.codeword),
            frame_error: bit_errors > 0,
            global_iters: out.global_iters,
            local_iters: out.local_iters,
        })
    }
}

fn count_diff(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}
