//! Flooding belief-propagation decoding on the Tanner graph.
//!
//! Check updates use the exact pairwise box-plus (sum-product) or sign-min
//! (min-sum, optionally scaled). All messages are clamped to `±LLR_MAX`.
//! Zero input LLRs are erasures and are resolved through the checks only.

use serde::{Deserialize, Serialize};

use crate::code::{check_len, LdpcCode};
use crate::{clamp_llr, hard_bit, Error, Result};

/// Check-node update rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecoderVariant {
    SumProduct,
    MinSum,
    NormalizedMinSum { alpha: f64 },
}

impl std::fmt::Display for DecoderVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SumProduct => write!(f, "sum-product"),
            Self::MinSum => write!(f, "min-sum"),
            Self::NormalizedMinSum { alpha } => write!(f, "normalized-min-sum({alpha})"),
        }
    }
}

impl std::str::FromStr for DecoderVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum-product" | "spa" => Ok(Self::SumProduct),
            "min-sum" => Ok(Self::MinSum),
            _ => {
                let alpha = s
                    .strip_prefix("normalized-min-sum")
                    .map(|r| r.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == '='))
                    .and_then(|a| a.parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown decoder variant {s:?}")))?;
                Ok(Self::NormalizedMinSum { alpha })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub variant: DecoderVariant,
    pub max_iters: usize,
    /// Stop as soon as the hard decisions satisfy every check.
    pub early_stop: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            variant: DecoderVariant::SumProduct,
            max_iters: 50,
            early_stop: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub posterior_llrs: Vec<f64>,
    /// `posterior − input`, clamped.
    pub extrinsic_llrs: Vec<f64>,
    pub hard_bits: Vec<u8>,
    /// All checks satisfied and no bit left at exactly zero.
    pub converged: bool,
    pub iterations_used: usize,
}

/// Check-to-variable messages, kept between calls when the decoder is run
/// several times on the same frame.
#[derive(Clone, Debug)]
pub struct DecoderState {
    c2v: Vec<f64>,
    v2c: Vec<f64>,
}

impl DecoderState {
    pub fn new(code: &LdpcCode) -> Self {
        let e = code.graph().n_edges();
        Self {
            c2v: vec![0.0; e],
            v2c: vec![0.0; e],
        }
    }

    pub fn reset(&mut self) {
        self.c2v.fill(0.0);
    }
}

/// Decode from fresh state.
pub fn decode_spa(input: &[f64], code: &LdpcCode, cfg: &DecoderConfig) -> Result<DecodeResult> {
    let mut state = DecoderState::new(code);
    decode_with_state(input, code, cfg, &mut state)
}

/// Decode continuing from the check messages in `state`.
pub fn decode_with_state(
    input: &[f64],
    code: &LdpcCode,
    cfg: &DecoderConfig,
    state: &mut DecoderState,
) -> Result<DecodeResult> {
    let n = code.n();
    check_len(n, input.len())?;
    if let Some(i) = input.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteLlr(i));
    }
    let g = code.graph();
    check_len(g.n_edges(), state.c2v.len())?;

    let mut posterior = vec![0.0; n];
    let mut hard = vec![0u8; n];
    let mut scratch = Vec::with_capacity(64);
    let mut iterations = 0;
    let mut converged = false;

    for iter in 1..=cfg.max_iters {
        iterations = iter;
        for v in 0..n {
            let edges = &g.var_edges[g.var_ptr[v]..g.var_ptr[v + 1]];
            let total: f64 = input[v] + edges.iter().map(|&e| state.c2v[e]).sum::<f64>();
            for &e in edges {
                state.v2c[e] = clamp_llr(total - state.c2v[e]);
            }
        }
        for r in 0..code.h().n_rows() {
            let span = g.check_ptr[r]..g.check_ptr[r + 1];
            check_update(
                cfg.variant,
                &state.v2c[span.clone()],
                &mut state.c2v[span],
                &mut scratch,
            );
        }
        for v in 0..n {
            let edges = &g.var_edges[g.var_ptr[v]..g.var_ptr[v + 1]];
            posterior[v] = clamp_llr(input[v] + edges.iter().map(|&e| state.c2v[e]).sum::<f64>());
            hard[v] = hard_bit(posterior[v]);
        }
        converged = is_converged(code, &hard, &posterior);
        if converged && cfg.early_stop {
            break;
        }
    }
    if cfg.max_iters == 0 {
        for v in 0..n {
            posterior[v] = clamp_llr(input[v]);
            hard[v] = hard_bit(posterior[v]);
        }
        converged = is_converged(code, &hard, &posterior);
    }

    let extrinsic = posterior
        .iter()
        .zip(input)
        .map(|(p, i)| clamp_llr(p - i))
        .collect();
    Ok(DecodeResult {
        posterior_llrs: posterior,
        extrinsic_llrs: extrinsic,
        hard_bits: hard,
        converged,
        iterations_used: iterations,
    })
}

fn is_converged(code: &LdpcCode, hard: &[u8], posterior: &[f64]) -> bool {
    posterior.iter().all(|&p| p != 0.0)
        && (0..code.h().n_rows()).all(|r| code.h().row(r).iter().fold(0, |a, &c| a ^ hard[c]) == 0)
}

/// `ln(1 + e^{-x})` for `x >= 0`.
#[inline]
fn softplus_neg(x: f64) -> f64 {
    (-x).exp().ln_1p()
}

/// Exact pairwise box-plus `2·atanh(tanh(a/2)·tanh(b/2))` in a form that is
/// stable for large magnitudes.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + softplus_neg((a + b).abs()) - softplus_neg((a - b).abs())
}

fn check_update(variant: DecoderVariant, v2c: &[f64], c2v: &mut [f64], scratch: &mut Vec<f64>) {
    let d = v2c.len();
    if d == 1 {
        // A single-variable check pins that bit to 0.
        c2v[0] = crate::LLR_MAX;
        return;
    }
    match variant {
        DecoderVariant::SumProduct => {
            // Prefix box-plus in scratch, then sweep a suffix accumulator back.
            scratch.clear();
            let mut acc = v2c[0];
            scratch.push(acc);
            for &m in &v2c[1..d - 1] {
                acc = boxplus(acc, m);
                scratch.push(acc);
            }
            let mut suffix = v2c[d - 1];
            c2v[d - 1] = clamp_llr(scratch[d - 2]);
            for i in (1..d - 1).rev() {
                c2v[i] = clamp_llr(boxplus(scratch[i - 1], suffix));
                suffix = boxplus(suffix, v2c[i]);
            }
            c2v[0] = clamp_llr(suffix);
        }
        DecoderVariant::MinSum | DecoderVariant::NormalizedMinSum { .. } => {
            let alpha = match variant {
                DecoderVariant::NormalizedMinSum { alpha } => alpha,
                _ => 1.0,
            };
            let mut min1 = f64::INFINITY;
            let mut min2 = f64::INFINITY;
            let mut arg = 0;
            let mut negative = false;
            for (i, &m) in v2c.iter().enumerate() {
                let a = m.abs();
                negative ^= m < 0.0;
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    arg = i;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for (i, (&m, out)) in v2c.iter().zip(c2v.iter_mut()).enumerate() {
                let mag = if i == arg { min2 } else { min1 };
                let neg = negative ^ (m < 0.0);
                let val = alpha * mag;
                *out = clamp_llr(if neg { -val } else { val });
            }
        }
    }
}
