use num_complex::Complex64;
use std::f64::consts::PI;

use super::CpmConfig;
use crate::Result;

/// Decoded trellis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrellisState {
    /// Position in the modulation-index cycle.
    pub h_index: usize,
    /// Accumulated phase in units of `π/p`, in `0..2p`.
    pub phase: usize,
    /// The `L − 1` previous transmitted symbol indices, base `q`, most
    /// recent in the least significant digit. With precoding, one more
    /// least significant digit holds the previous data symbol.
    pub history: usize,
}

/// Phase trellis of a CPM scheme.
///
/// States are `(h-cycle position, phase, symbol history)`, giving
/// `H · 2p · q^(L−1)` states and `q` branches out of each. A branch waveform
/// is `e^{jπ·phase/p}` times a base waveform that depends only on
/// `(h-cycle position, history, input)`; the base waveforms are tabulated.
/// Branch inputs are data symbols; with precoding the transmitted symbol is
/// derived from the input and the previous data symbol kept in the history.
#[derive(Clone, Debug)]
pub struct CpmTrellis {
    cfg: CpmConfig,
    q: usize,
    n_h: usize,
    n_phase: usize,
    n_hist: usize,
    /// `((h * n_hist + hist) * q + m) * sps + k`
    base: Vec<Complex64>,
    /// Phase increment and next history per `(h * n_hist + hist) * q + m`.
    step: Vec<(usize, usize)>,
    /// `e^{jπθ/p}` for `θ` in `0..2p`.
    rotation: Vec<Complex64>,
}

impl CpmTrellis {
    pub fn new(cfg: &CpmConfig) -> Result<Self> {
        cfg.validate()?;
        let q = cfg.order();
        let l = cfg.pulse_len;
        let n_h = cfg.h_set.len();
        let p = cfg.phase_denominator() as usize;
        let n_phase = 2 * p;
        let n_hist = q.pow(l as u32 - 1);
        let ks = cfg.h_numerators();
        let h_of = |i: usize| f64::from(ks[i]) / p as f64;
        let sps = cfg.sps;

        let mut base = Vec::with_capacity(n_h * n_hist * q * sps);
        let mut step = Vec::with_capacity(n_h * n_hist * q);
        for hi in 0..n_h {
            for hist in 0..n_hist {
                // Symbol at lag `lag` (1 = previous) and its h-cycle position.
                let past = |lag: usize| (hist / q.pow(lag as u32 - 1)) % q;
                let h_at = |lag: usize| (hi + n_h * l - lag) % n_h;
                for m in 0..q {
                    for k in 0..sps {
                        let t = k as f64 / sps as f64;
                        let mut phase = 2.0 * PI * h_of(hi) * cfg.amplitude(m) as f64 * cfg.phase_pulse(t);
                        for lag in 1..l {
                            phase += 2.0
                                * PI
                                * h_of(h_at(lag))
                                * cfg.amplitude(past(lag)) as f64
                                * cfg.phase_pulse(lag as f64 + t);
                        }
                        base.push(Complex64::from_polar(1.0, phase));
                    }
                    // The symbol leaving the window (lag L−1, or the input when
                    // L = 1) is folded into the accumulated phase.
                    let (oldest, oldest_h) = if l == 1 {
                        (m, hi)
                    } else {
                        (past(l - 1), h_at(l - 1))
                    };
                    let inc = (ks[oldest_h] as i64 * cfg.amplitude(oldest)).rem_euclid(n_phase as i64);
                    let next_hist = if l == 1 { 0 } else { (hist * q + m) % n_hist };
                    step.push((inc as usize, next_hist));
                }
            }
        }
        let (base, step, n_hist) = if cfg.precode {
            expand_precoder(&base, &step, n_h, n_hist, q, sps)
        } else {
            (base, step, n_hist)
        };
        let rotation = (0..n_phase)
            .map(|th| Complex64::from_polar(1.0, PI * th as f64 / p as f64))
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            q,
            n_h,
            n_phase,
            n_hist,
            base,
            step,
            rotation,
        })
    }

    pub fn config(&self) -> &CpmConfig {
        &self.cfg
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn n_states(&self) -> usize {
        self.n_h * self.n_phase * self.n_hist
    }

    pub fn n_branches(&self) -> usize {
        self.n_states() * self.q
    }

    pub fn n_phase(&self) -> usize {
        self.n_phase
    }

    pub fn n_hist(&self) -> usize {
        self.n_hist
    }

    pub fn n_h(&self) -> usize {
        self.n_h
    }

    /// States sharing one h-cycle position.
    pub fn states_per_h(&self) -> usize {
        self.n_phase * self.n_hist
    }

    pub fn state_id(&self, s: TrellisState) -> usize {
        (s.h_index * self.n_phase + s.phase) * self.n_hist + s.history
    }

    pub fn state(&self, id: usize) -> TrellisState {
        TrellisState {
            h_index: id / (self.n_phase * self.n_hist),
            phase: (id / self.n_hist) % self.n_phase,
            history: id % self.n_hist,
        }
    }

    /// Zero phase, history of symbol index 0, first modulation index.
    pub fn initial_state(&self) -> usize {
        0
    }

    pub fn next_state(&self, state: usize, m: usize) -> usize {
        let s = self.state(state);
        let (inc, next_hist) = self.step[(s.h_index * self.n_hist + s.history) * self.q + m];
        self.state_id(TrellisState {
            h_index: (s.h_index + 1) % self.n_h,
            phase: (s.phase + inc) % self.n_phase,
            history: next_hist,
        })
    }

    /// The `sps` samples emitted on branch `(state, m)`.
    pub fn branch_waveform(&self, state: usize, m: usize) -> Vec<Complex64> {
        let s = self.state(state);
        let rot = self.rotation[s.phase];
        self.base_waveform(s.h_index, s.history, m)
            .iter()
            .map(|w| rot * w)
            .collect()
    }

    #[inline]
    pub(crate) fn base_waveform(&self, h_index: usize, hist: usize, m: usize) -> &[Complex64] {
        let sps = self.cfg.sps;
        let i = ((h_index * self.n_hist + hist) * self.q + m) * sps;
        &self.base[i..i + sps]
    }

    #[inline]
    pub(crate) fn step(&self, h_index: usize, hist: usize, m: usize) -> (usize, usize) {
        self.step[(h_index * self.n_hist + hist) * self.q + m]
    }

    #[inline]
    pub(crate) fn rotation(&self, phase: usize) -> Complex64 {
        self.rotation[phase]
    }
}

/// Fold the previous data symbol into the history index.
fn expand_precoder(
    base: &[Complex64],
    step: &[(usize, usize)],
    n_h: usize,
    n_hist: usize,
    q: usize,
    sps: usize,
) -> (Vec<Complex64>, Vec<(usize, usize)>, usize) {
    let n_ext = n_hist * q;
    let mut ext_base = Vec::with_capacity(n_h * n_ext * q * sps);
    let mut ext_step = Vec::with_capacity(n_h * n_ext * q);
    for hi in 0..n_h {
        for ext in 0..n_ext {
            let (hist, prev) = (ext / q, ext % q);
            for u in 0..q {
                let m = (u + q - prev) % q;
                let i = (hi * n_hist + hist) * q + m;
                ext_base.extend_from_slice(&base[i * sps..(i + 1) * sps]);
                let (inc, next_hist) = step[i];
                ext_step.push((inc, next_hist * q + u));
            }
        }
    }
    (ext_base, ext_step, n_ext)
}
