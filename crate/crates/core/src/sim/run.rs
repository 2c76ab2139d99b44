use std::sync::Arc;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::link::{Link, LinkParams, TrialOutcome};
use super::{Mode, SimConfig, SnrAxis};
use crate::channel::{parse_sweep, SnrPoint};
use crate::code::{build_standard_code, parse_alist};
use crate::cpm::{CpmConfig, CpmTrellis};
use crate::framing::asm_from_hex;
use crate::puncture::{rational_from_f64, RatePair};
use crate::rng::{self, StreamTag};
use crate::{Error, LdpcCode, Result};

/// Aggregate statistics for one (SNR, Δ) point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub mode: Mode,
    pub code: String,
    pub delta_pct: f64,
    pub rate_native: f64,
    pub rate_punctured: f64,
    pub n_punctured: usize,
    pub k: usize,
    pub ebn0_db: f64,
    pub esn0_db: f64,
    pub noise_var: f64,
    pub frames: u64,
    pub bit_errors: u64,
    /// Sum over frames of the squared per-frame bit error count.
    pub bit_errors_sq: u64,
    pub frame_errors: u64,
    pub coded_bit_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub coded_ber: f64,
    pub mean_global_iters: f64,
    pub max_global_iters: usize,
    pub mean_local_iters: f64,
    pub wall_clock_s: f64,
    pub seed: u64,
    pub pattern_seed: u64,
    pub interleaver_seed: u64,
}

impl BerRecord {
    /// 95% normal-approximation interval for the BER, treating frames as the
    /// independent samples (bit errors cluster within frames). With no frame
    /// errors the upper end is the rule-of-three bound `3/frames` on the FER,
    /// which also bounds the BER.
    pub fn ber_ci95(&self) -> (f64, f64) {
        if self.frames < 2 {
            return (0.0, 1.0);
        }
        if self.frame_errors == 0 {
            return (0.0, (3.0 / self.frames as f64).min(1.0));
        }
        let f = self.frames as f64;
        let k = self.k as f64;
        let mean = self.bit_errors as f64 / f;
        let var = (self.bit_errors_sq as f64 / f - mean * mean).max(0.0) * f / (f - 1.0);
        let half = 1.96 * (var / f).sqrt() / k;
        ((self.ber - half).max(0.0), (self.ber + half).min(1.0))
    }

    /// 95% normal-approximation interval for the FER.
    pub fn fer_ci95(&self) -> (f64, f64) {
        if self.frames == 0 {
            return (0.0, 1.0);
        }
        let half = 1.96 * (self.fer * (1.0 - self.fer) / self.frames as f64).sqrt();
        ((self.fer - half).max(0.0), (self.fer + half).min(1.0))
    }
}

#[derive(Default)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    bit_errors_sq: u64,
    frame_errors: u64,
    coded_bit_errors: u64,
    global_iters: u64,
    max_global_iters: usize,
    local_iters: u64,
}

impl Tally {
    fn add(&mut self, t: &TrialOutcome) {
        self.frames += 1;
        self.bit_errors += t.bit_errors;
        self.bit_errors_sq += t.bit_errors * t.bit_errors;
        self.frame_errors += t.frame_error as u64;
        self.coded_bit_errors += t.coded_bit_errors;
        self.global_iters += t.global_iters as u64;
        self.max_global_iters = self.max_global_iters.max(t.global_iters);
        self.local_iters += t.local_iters as u64;
    }
}

/// A configured sweep: the code, modem and worker pool are built once.
pub struct Simulation {
    cfg: SimConfig,
    code: Arc<LdpcCode>,
    cpm: Option<(CpmConfig, Arc<CpmTrellis>)>,
    pool: rayon::ThreadPool,
}

impl Simulation {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let code = match &cfg.alist {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| cfg.code.clone());
                LdpcCode::new(name, parse_alist(&text)?)?
            }
            None => build_standard_code(&cfg.code)?,
        };
        for &d in &cfg.deltas {
            RatePair::new(code.rate(), rational_from_f64(d)?)?;
        }
        let cpm = match cfg.mode {
            Mode::Cpm => {
                let c = cfg.cpm_config()?;
                let t = Arc::new(CpmTrellis::new(&c)?);
                Some((c, t))
            }
            Mode::NoCpm => None,
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(Self {
            cfg,
            code: Arc::new(code),
            cpm,
            pool,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn code(&self) -> &LdpcCode {
        &self.code
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// SNR values of the sweep, on the configured axis.
    pub fn snr_points(&self) -> Result<Vec<f64>> {
        parse_sweep(&self.cfg.snr)
    }

    /// Build the link for puncturing overhead `delta_pct`.
    pub fn link(&self, delta_pct: f64) -> Result<Link> {
        let rates = RatePair::new(self.code.rate(), rational_from_f64(delta_pct)?)?;
        let asm = match self.cfg.mode {
            Mode::Cpm => asm_from_hex(&self.cfg.asm_hex, self.cfg.asm_bits)?,
            Mode::NoCpm => Vec::new(),
        };
        Link::new(
            Arc::clone(&self.code),
            rates,
            LinkParams {
                mode: self.cfg.mode,
                cpm: self
                    .cpm
                    .as_ref()
                    .map(|(c, t)| (c.clone(), Arc::clone(t), self.cfg.siso)),
                decoder: self.cfg.decoder_config()?,
                global_iters: self.cfg.effective_global_iters(),
                asm,
                pattern_per_codeword: self.cfg.pattern_per_codeword,
                interleave: self.cfg.interleave,
                master_seed: self.cfg.seed,
            },
        )
    }

    /// The operating point for a sweep value on the configured axis.
    pub fn snr_point(&self, link: &Link, snr_db: f64) -> SnrPoint {
        let r = link.effective_rate(self.cfg.include_asm_in_snr);
        match self.cfg.snr_axis {
            SnrAxis::Ebn0 => SnrPoint::from_ebn0(snr_db, r),
            SnrAxis::Esn0 => SnrPoint::from_esn0(snr_db, r),
        }
    }

    /// Run trials `0, 1, 2, …` until the stop rule fires.
    ///
    /// Trials are evaluated in parallel batches but tallied strictly in index
    /// order, and the tally stops at the first trial that satisfies the stop
    /// rule. Trials past that point are discarded, so the record does not
    /// depend on the number of workers.
    pub fn run_point(&self, link: &Link, snr_db: f64) -> Result<BerRecord> {
        let start = Instant::now();
        let point = self.snr_point(link, snr_db);
        let noise_var = point.noise_var(link.symbol_energy())?;
        let batch = (self.workers() as u64 * 4).max(8);
        let mut tally = Tally::default();
        let mut next = 0u64;
        'outer: while tally.frames < self.cfg.max_frames {
            let end = (next + batch).min(self.cfg.max_frames);
            let outcomes: Vec<TrialOutcome> = self.pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map(|t| link.run_trial(t, noise_var))
                    .collect::<Result<_>>()
            })?;
            for o in &outcomes {
                tally.add(o);
                if tally.frame_errors >= self.cfg.min_frame_errors {
                    break 'outer;
                }
            }
            next = end;
        }
        Ok(self.record(link, point, noise_var, &tally, start.elapsed().as_secs_f64()))
    }

    fn record(&self, link: &Link, point: SnrPoint, noise_var: f64, t: &Tally, secs: f64) -> BerRecord {
        let rates = link.rates();
        let k = self.code.k();
        let n = self.code.n();
        let frames = t.frames.max(1) as f64;
        BerRecord {
            mode: self.cfg.mode,
            code: self.code.name().to_string(),
            delta_pct: rates.delta_pct.to_f64().unwrap_or(f64::NAN),
            rate_native: rates.native.to_f64().unwrap_or(f64::NAN),
            rate_punctured: rates.punctured.to_f64().unwrap_or(f64::NAN),
            n_punctured: link.n_punctured(),
            k,
            ebn0_db: point.ebn0_db,
            esn0_db: point.esn0_db,
            noise_var,
            frames: t.frames,
            bit_errors: t.bit_errors,
            bit_errors_sq: t.bit_errors_sq,
            frame_errors: t.frame_errors,
            coded_bit_errors: t.coded_bit_errors,
            ber: t.bit_errors as f64 / (frames * k as f64),
            fer: t.frame_errors as f64 / frames,
            coded_ber: t.coded_bit_errors as f64 / (frames * n as f64),
            mean_global_iters: t.global_iters as f64 / frames,
            max_global_iters: t.max_global_iters,
            mean_local_iters: t.local_iters as f64 / frames,
            wall_clock_s: secs,
            seed: self.cfg.seed,
            pattern_seed: link.pattern_seed(),
            interleaver_seed: rng::derive_seed(self.cfg.seed, StreamTag::Interleaver, 0),
        }
    }

    /// Every (Δ, SNR) point, Δ-major.
    pub fn run_sweep(&self) -> Result<Vec<BerRecord>> {
        self.run_sweep_with(|_| {})
    }

    /// Like [`Simulation::run_sweep`], calling `progress` after each point.
    pub fn run_sweep_with(&self, mut progress: impl FnMut(&BerRecord)) -> Result<Vec<BerRecord>> {
        let snrs = self.snr_points()?;
        let mut out = Vec::with_capacity(snrs.len() * self.cfg.deltas.len());
        for &delta in &self.cfg.deltas {
            let link = self.link(delta)?;
            for &snr in &snrs {
                let rec = self.run_point(&link, snr)?;
                progress(&rec);
                out.push(rec);
            }
        }
        Ok(out)
    }
}
