//! Independent reference implementations shared by the integration tests and
//! the acceptance runner. Nothing here calls into the crate's decoders or
//! modulators.
#![allow(dead_code)]

pub mod roundtrip;

use num_complex::Complex64;
use rcldpc::cpm::{BitMap, CpmConfig, PulseShape};
use std::f64::consts::PI;

/// Checks of the `toy-tree` code, written out independently of the registry.
pub const TOY_TREE_CHECKS: &[&[usize]] = &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6], &[1, 7, 8], &[6, 9]];

pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Bitwise MAP LLRs by enumerating every word of length `n` that satisfies
/// `checks`.
pub fn brute_force_map(checks: &[&[usize]], n: usize, llr: &[f64]) -> Vec<f64> {
    let mut zero = vec![Vec::new(); n];
    let mut one = vec![Vec::new(); n];
    for w in 0u32..(1 << n) {
        let bit = |i: usize| (w >> i) & 1;
        if checks.iter().any(|c| c.iter().map(|&i| bit(i)).sum::<u32>() % 2 == 1) {
            continue;
        }
        let metric: f64 = (0..n)
            .map(|i| if bit(i) == 0 { llr[i] / 2.0 } else { -llr[i] / 2.0 })
            .sum();
        for i in 0..n {
            if bit(i) == 0 {
                zero[i].push(metric);
            } else {
                one[i].push(metric);
            }
        }
    }
    (0..n)
        .map(|i| log_sum_exp(zero[i].clone()) - log_sum_exp(one[i].clone()))
        .collect()
}

/// Dense GF(2) rank by plain row reduction on byte rows.
pub fn dense_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] == 1 {
                for j in 0..cols {
                    m[r][j] ^= m[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

// --- CPM ---------------------------------------------------------------

fn gray_symbol(bits: &[u8], natural: bool) -> usize {
    let v = bits.iter().fold(0usize, |a, &b| a * 2 + b as usize);
    if natural {
        return v;
    }
    // Inverse Gray code, bit by bit.
    let mut out = 0;
    let mut acc = 0;
    for &b in bits {
        acc ^= b as usize;
        out = out * 2 + acc;
    }
    out
}

/// Data bits to the amplitudes `±1, ±3, …` actually transmitted, including
/// differential precoding.
pub fn amplitudes(bits: &[u8], cfg: &CpmConfig) -> Vec<i64> {
    let b = cfg.bits_per_symbol;
    let q = 1usize << b;
    let mut prev = 0;
    bits.chunks(b)
        .map(|c| {
            let u = gray_symbol(c, cfg.bit_map == BitMap::Natural);
            let m = if cfg.precode { (u + q - prev) % q } else { u };
            prev = u;
            2 * m as i64 - (q as i64 - 1)
        })
        .collect()
}

/// Frequency pulse `g(t)`, `t` in symbol periods, integrating to 1/2.
fn freq_pulse(shape: PulseShape, l: f64, t: f64) -> f64 {
    if !(0.0..l).contains(&t) {
        return 0.0;
    }
    match shape {
        PulseShape::Rec => 1.0 / (2.0 * l),
        PulseShape::Rc => (1.0 - (2.0 * PI * t / l).cos()) / (2.0 * l),
    }
}

/// `∫_0^t g` by composite Simpson over 4096 panels per symbol.
fn integrated_pulse(shape: PulseShape, l: f64, t: f64) -> f64 {
    let t = t.clamp(0.0, l);
    if t == 0.0 {
        return 0.0;
    }
    let panels = ((t * 4096.0).ceil() as usize).max(2) & !1;
    let panels = panels.max(2);
    let h = t / panels as f64;
    let mut s = freq_pulse(shape, l, 0.0) + freq_pulse(shape, l, t - 1e-15 * t);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * freq_pulse(shape, l, i as f64 * h);
    }
    s * h / 3.0
}

/// CPM baseband by numerically integrating the frequency pulse, sampled at
/// `t = (n + k/sps)·T`. The `L − 1` symbols before the frame have amplitude
/// `−(q−1)`; anything earlier is folded into a zero starting phase.
pub fn integrated_cpm(bits: &[u8], cfg: &CpmConfig) -> Vec<Complex64> {
    let a = amplitudes(bits, cfg);
    let q = 1i64 << cfg.bits_per_symbol;
    let l = cfg.pulse_len as f64;
    let n_h = cfg.h_set.len() as i64;
    let h = |i: i64| cfg.h_set[i.rem_euclid(n_h) as usize].value();
    let mut out = Vec::new();
    for n in 0..a.len() {
        for k in 0..cfg.sps {
            let t = n as f64 + k as f64 / cfg.sps as f64;
            let mut phase = 0.0;
            for i in 1 - cfg.pulse_len as i64..=n as i64 {
                let amp = if i < 0 { -(q - 1) } else { a[i as usize] };
                phase += 2.0 * PI * h(i) * amp as f64 * integrated_pulse(cfg.pulse, l, t - i as f64);
            }
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    out
}

/// Closed-form phase pulse `q(t)`.
fn phase_pulse(shape: PulseShape, l: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= l {
        0.5
    } else {
        match shape {
            PulseShape::Rec => t / (2.0 * l),
            PulseShape::Rc => t / (2.0 * l) - (2.0 * PI * t / l).sin() / (4.0 * PI),
        }
    }
}

/// CPM baseband from the closed-form phase pulse, summing every symbol.
pub fn closed_form_cpm(bits: &[u8], cfg: &CpmConfig) -> Vec<Complex64> {
    let a = amplitudes(bits, cfg);
    let q = 1i64 << cfg.bits_per_symbol;
    let l = cfg.pulse_len as f64;
    let n_h = cfg.h_set.len() as i64;
    let h = |i: i64| cfg.h_set[i.rem_euclid(n_h) as usize].value();
    let mut out = Vec::new();
    for n in 0..a.len() {
        for k in 0..cfg.sps {
            let t = n as f64 + k as f64 / cfg.sps as f64;
            let mut phase = 0.0;
            for i in 1 - cfg.pulse_len as i64..=n as i64 {
                let amp = if i < 0 { -(q - 1) } else { a[i as usize] };
                phase += 2.0 * PI * h(i) * amp as f64 * phase_pulse(cfg.pulse, l, t - i as f64);
            }
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    out
}

/// Bitwise posterior LLRs by enumerating every bit sequence of the frame.
pub fn enumerate_cpm_posteriors(
    rx: &[Complex64],
    priors: &[f64],
    noise_var: f64,
    cfg: &CpmConfig,
) -> Vec<f64> {
    let n_bits = priors.len();
    let mut zero = vec![Vec::new(); n_bits];
    let mut one = vec![Vec::new(); n_bits];
    for w in 0u32..(1 << n_bits) {
        let bits: Vec<u8> = (0..n_bits).map(|i| ((w >> (n_bits - 1 - i)) & 1) as u8).collect();
        let s = closed_form_cpm(&bits, cfg);
        let dist: f64 = rx.iter().zip(&s).map(|(r, s)| (r - s).norm_sqr()).sum();
        let mut metric = -dist / (2.0 * noise_var);
        for (i, &b) in bits.iter().enumerate() {
            metric += if b == 0 { priors[i] / 2.0 } else { -priors[i] / 2.0 };
        }
        for (i, &b) in bits.iter().enumerate() {
            if b == 0 {
                zero[i].push(metric);
            } else {
                one[i].push(metric);
            }
        }
    }
    (0..n_bits)
        .map(|i| log_sum_exp(zero[i].clone()) - log_sum_exp(one[i].clone()))
        .collect()
}

/// `Q(x)`, the Gaussian tail.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Uncoded BPSK bit errors over `n_bits` at `ebn0_db`, using the crate's
/// channel.
pub fn bpsk_errors(ebn0_db: f64, n_bits: usize, seed: u64) -> u64 {
    use rand::Rng;
    use rcldpc::channel::{add_awgn, bpsk_llr, bpsk_modulate, ebn0_to_noise_var};
    let mut rng = rcldpc::rng::seeded(seed);
    let nv = ebn0_to_noise_var(ebn0_db, 1.0, 1.0).unwrap();
    let mut errors = 0;
    let mut done = 0;
    while done < n_bits {
        let len = (n_bits - done).min(10_000);
        let bits: Vec<u8> = (0..len).map(|_| rng.random::<bool>() as u8).collect();
        let rx = add_awgn(&bpsk_modulate(&bits), nv, &mut rng).unwrap();
        let llr = bpsk_llr(&rx, nv).unwrap();
        errors += bits
            .iter()
            .zip(&llr)
            .filter(|(&b, &l)| rcldpc::hard_bit(l) != b)
            .count() as u64;
        done += len;
    }
    errors
}

/// Uncoded CPM bit errors after log-MAP demodulation, in frames of
/// `frame_bits`. The last symbols of each frame are not counted, since the
/// unterminated trellis end is weaker.
pub fn cpm_errors(cfg: &CpmConfig, ebn0_db: f64, frames: usize, frame_bits: usize, seed: u64) -> (u64, u64) {
    use rand::Rng;
    use rcldpc::channel::{add_awgn, ebn0_to_noise_var};
    use rcldpc::cpm::{modulate, siso_demodulate, CpmTrellis, MaxStar};
    let t = CpmTrellis::new(cfg).unwrap();
    let mut rng = rcldpc::rng::seeded(seed);
    let nv = ebn0_to_noise_var(ebn0_db, cfg.bits_per_symbol as f64, cfg.sps as f64).unwrap();
    let counted = frame_bits - 4 * cfg.bits_per_symbol * cfg.pulse_len;
    let (mut errors, mut total) = (0, 0);
    for _ in 0..frames {
        let bits: Vec<u8> = (0..frame_bits).map(|_| rng.random::<bool>() as u8).collect();
        let rx = add_awgn(&modulate(&bits, cfg).unwrap(), nv, &mut rng).unwrap();
        let out = siso_demodulate(&rx, None, nv, &t, MaxStar::LogMap).unwrap();
        errors += bits[..counted]
            .iter()
            .zip(&out.posterior)
            .filter(|(&b, &l)| rcldpc::hard_bit(l) != b)
            .count() as u64;
        total += counted as u64;
    }
    (errors, total)
}

/// Eb/N0 in dB at which antipodal signalling has bit error rate `p`.
pub fn antipodal_ebn0_for(p: f64) -> f64 {
    // Bisection on Q(√(2x)) = p.
    let (mut lo, mut hi) = (-10.0f64, 20.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let ber = q_function((2.0 * 10f64.powf(mid / 10.0)).sqrt());
        if ber > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn antipodal_ber(ebn0_db: f64) -> f64 {
    q_function((2.0 * 10f64.powf(ebn0_db / 10.0)).sqrt())
}
