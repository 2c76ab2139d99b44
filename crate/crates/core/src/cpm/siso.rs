use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CpmTrellis;
use crate::code::check_len;
use crate::{clamp_llr, Error, Result};

/// Combining rule for the forward-backward recursions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaxStar {
    /// Exact `ln(e^a + e^b)`.
    #[default]
    LogMap,
    /// `max(a, b)`.
    MaxLog,
}

impl MaxStar {
    #[inline]
    fn combine(self, a: f64, b: f64) -> f64 {
        if a == f64::NEG_INFINITY {
            return b;
        }
        if b == f64::NEG_INFINITY {
            return a;
        }
        match self {
            Self::LogMap => a.max(b) + (-(a - b).abs()).exp().ln_1p(),
            Self::MaxLog => a.max(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SisoOutput {
    /// A posteriori bit LLRs (clamped).
    pub posterior: Vec<f64>,
    /// Posterior minus prior, clamped. This is what feeds the outer decoder.
    pub extrinsic: Vec<f64>,
}

/// Soft-in/soft-out CPM demodulation by forward-backward recursion on the
/// phase trellis.
///
/// The branch metric is `−‖r − s‖² / (2·noise_var)` plus the log prior of the
/// branch symbol; terms common to all branches of a step are dropped. `priors`
/// are per-bit LLRs over the whole frame, `None` meaning no prior information.
/// The recursion starts in the trellis' initial state and ends unterminated.
pub fn siso_demodulate(
    rx: &[Complex64],
    priors: Option<&[f64]>,
    noise_var: f64,
    trellis: &CpmTrellis,
    rule: MaxStar,
) -> Result<SisoOutput> {
    let cfg = trellis.config();
    let sps = cfg.sps;
    let b = cfg.bits_per_symbol;
    let q = trellis.order();
    if !rx.len().is_multiple_of(sps) {
        return Err(Error::LengthMismatch {
            expected: rx.len() / sps * sps,
            actual: rx.len(),
        });
    }
    if !(noise_var > 0.0) || !noise_var.is_finite() {
        return Err(Error::BadNoiseVariance {
            value: noise_var,
            requirement: "positive and finite",
        });
    }
    let n_sym = rx.len() / sps;
    let n_bits = n_sym * b;
    let zeros;
    let priors = match priors {
        Some(p) => {
            check_len(n_bits, p.len())?;
            p
        }
        None => {
            zeros = vec![0.0; n_bits];
            &zeros
        }
    };

    let n_h = trellis.n_h();
    let n_hist = trellis.n_hist();
    let n_phase = trellis.n_phase();
    let per_h = trellis.states_per_h();
    let inv_var = 1.0 / noise_var;
    let labels: Vec<Vec<u8>> = (0..q).map(|m| cfg.bits_of(m)).collect();

    // Matched correlations Σ r·conj(w) per step and (history, symbol).
    let mut corr = vec![Complex64::new(0.0, 0.0); n_sym * n_hist * q];
    for n in 0..n_sym {
        let seg = &rx[n * sps..(n + 1) * sps];
        let hi = n % n_h;
        for hist in 0..n_hist {
            for m in 0..q {
                let w = trellis.base_waveform(hi, hist, m);
                corr[(n * n_hist + hist) * q + m] =
                    seg.iter().zip(w).map(|(r, w)| r * w.conj()).sum();
            }
        }
    }
    let symbol_prior = |n: usize, m: usize| -> f64 {
        labels[m]
            .iter()
            .zip(&priors[n * b..(n + 1) * b])
            .map(|(&bit, &l)| if bit == 0 { 0.5 * l } else { -0.5 * l })
            .sum()
    };
    // Branch metric for local state (phase, hist) at step n with input m.
    let gamma = |n: usize, phase: usize, hist: usize, m: usize, pm: f64| -> f64 {
        let c = corr[(n * n_hist + hist) * q + m];
        (trellis.rotation(phase).conj() * c).re * inv_var + pm
    };

    // Forward pass; alpha[n] covers the states of h-position n mod H.
    let mut alpha = vec![f64::NEG_INFINITY; (n_sym + 1) * per_h];
    let init = trellis.state(trellis.initial_state());
    alpha[init.phase * n_hist + init.history] = 0.0;
    let mut pm = vec![0.0; q];
    for n in 0..n_sym {
        let hi = n % n_h;
        for (m, v) in pm.iter_mut().enumerate() {
            *v = symbol_prior(n, m);
        }
        let (cur, next) = alpha.split_at_mut((n + 1) * per_h);
        let cur = &cur[n * per_h..];
        let next = &mut next[..per_h];
        for phase in 0..n_phase {
            for hist in 0..n_hist {
                let a = cur[phase * n_hist + hist];
                if a == f64::NEG_INFINITY {
                    continue;
                }
                for m in 0..q {
                    let (inc, nh) = trellis.step(hi, hist, m);
                    let dst = ((phase + inc) % n_phase) * n_hist + nh;
                    next[dst] = rule.combine(next[dst], a + gamma(n, phase, hist, m, pm[m]));
                }
            }
        }
        let mx = next.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if mx.is_finite() {
            next.iter_mut().for_each(|v| *v -= mx);
        }
    }

    // Backward pass with symbol a posteriori values.
    let mut beta = vec![0.0; per_h];
    let mut beta_prev = vec![f64::NEG_INFINITY; per_h];
    let mut posterior = vec![0.0; n_bits];
    let mut app = vec![f64::NEG_INFINITY; q];
    for n in (0..n_sym).rev() {
        let hi = n % n_h;
        for (m, v) in pm.iter_mut().enumerate() {
            *v = symbol_prior(n, m);
        }
        app.fill(f64::NEG_INFINITY);
        beta_prev.fill(f64::NEG_INFINITY);
        let cur = &alpha[n * per_h..(n + 1) * per_h];
        for phase in 0..n_phase {
            for hist in 0..n_hist {
                let src = phase * n_hist + hist;
                for m in 0..q {
                    let (inc, nh) = trellis.step(hi, hist, m);
                    let dst = ((phase + inc) % n_phase) * n_hist + nh;
                    let gb = gamma(n, phase, hist, m, pm[m]) + beta[dst];
                    beta_prev[src] = rule.combine(beta_prev[src], gb);
                    if cur[src] != f64::NEG_INFINITY {
                        app[m] = rule.combine(app[m], cur[src] + gb);
                    }
                }
            }
        }
        for j in 0..b {
            let (mut zero, mut one) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for m in 0..q {
                if labels[m][j] == 0 {
                    zero = rule.combine(zero, app[m]);
                } else {
                    one = rule.combine(one, app[m]);
                }
            }
            posterior[n * b + j] = zero - one;
        }
        let mx = beta_prev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        beta_prev.iter_mut().for_each(|v| *v -= mx);
        std::mem::swap(&mut beta, &mut beta_prev);
    }

    let extrinsic = posterior
        .iter()
        .zip(priors)
        .map(|(p, l)| clamp_llr(p - l))
        .collect();
    let posterior = posterior.into_iter().map(clamp_llr).collect();
    Ok(SisoOutput {
        posterior,
        extrinsic,
    })
}
