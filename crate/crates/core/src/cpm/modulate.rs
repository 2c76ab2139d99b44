use num_complex::Complex64;
use std::f64::consts::PI;

use super::{bits_to_symbols, precode_symbols, CpmConfig};
use crate::Result;

/// Modulate frame bits to unit-amplitude complex baseband, `sps` samples per
/// symbol.
pub fn modulate(bits: &[u8], cfg: &CpmConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let symbols = precode_symbols(&bits_to_symbols(bits, cfg)?, cfg);
    Ok(modulate_symbols(&symbols, cfg))
}

/// Modulate transmitted symbol indices (after any precoding). Sample `k` of symbol `n` is taken at
/// `t = (n + k/sps)·T`.
pub fn modulate_symbols(symbols: &[usize], cfg: &CpmConfig) -> Vec<Complex64> {
    let l = cfg.pulse_len as i64;
    let n_h = cfg.h_set.len() as i64;
    let p = i64::from(cfg.phase_denominator());
    let ks = cfg.h_numerators();
    let k_of = |i: i64| i64::from(ks[i.rem_euclid(n_h) as usize]);
    let amp = |i: i64| {
        if i < 0 {
            cfg.amplitude(0)
        } else {
            cfg.amplitude(symbols[i as usize])
        }
    };

    let sps = cfg.sps;
    let mut out = Vec::with_capacity(symbols.len() * sps);
    // Phase of all symbols that have left the pulse window, in units of π/p.
    let mut settled: i64 = 0;
    for n in 0..symbols.len() as i64 {
        for k in 0..sps {
            let t = k as f64 / sps as f64;
            let mut phase = PI * settled as f64 / p as f64;
            for lag in 0..l {
                let i = n - lag;
                phase += 2.0 * PI * (k_of(i) as f64 / p as f64) * amp(i) as f64
                    * cfg.phase_pulse(lag as f64 + t);
            }
            out.push(Complex64::from_polar(1.0, phase));
        }
        let leaving = n - l + 1;
        settled = (settled + k_of(leaving) * amp(leaving)).rem_euclid(2 * p);
    }
    out
}
