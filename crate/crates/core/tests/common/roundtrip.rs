//! Round-trip properties, runnable from `#[test]`s and from the acceptance
//! runner with an explicit case count.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rcldpc::code::{emit_alist, parse_alist};
use rcldpc::framing::{attach_asm, split_frame, FrameConfig};
use rcldpc::puncture::{
    deinterleave, depuncture, interleave, make_permutation, parse_decimal, punctured_rate,
    rational_from_f64, required_overhead, puncture, sample_pattern, Rational,
};
use rcldpc::ParityCheckMatrix;

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn interleave_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (1usize..400, any::<u64>()).prop_flat_map(|(n, seed)| {
        (Just(seed), prop::collection::vec(any::<u32>(), n))
    });
    run(cases, strat, |(seed, v)| {
        let p = make_permutation(seed, v.len());
        let mut sorted = p.forward().to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..v.len()).collect::<Vec<_>>());
        let w = interleave(&v, &p).unwrap();
        prop_assert_eq!(&deinterleave(&w, &p).unwrap(), &v);
        prop_assert_eq!(&interleave(&deinterleave(&v, &p).unwrap(), &p).unwrap(), &v);
        Ok(())
    })
}

pub fn puncture_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (2usize..400, any::<u64>())
        .prop_flat_map(|(n, seed)| {
            (
                Just(seed),
                0..n,
                prop::collection::vec(-50.0f64..50.0, n),
            )
        });
    run(cases, strat, |(seed, n_punct, v)| {
        let p = sample_pattern(seed, v.len(), n_punct).unwrap();
        prop_assert_eq!(p.n_punctured(), n_punct);
        let short = puncture(&v, &p).unwrap();
        prop_assert_eq!(short.len(), v.len() - n_punct);
        let back = depuncture(&short, &p).unwrap();
        for (i, (&a, &b)) in back.iter().zip(&v).enumerate() {
            if p.is_punctured(i) {
                prop_assert!(a == 0.0 && a.is_sign_positive());
            } else {
                prop_assert_eq!(a, b);
            }
        }
        prop_assert_eq!(puncture(&back, &p).unwrap(), short);
        Ok(())
    })
}

pub fn asm_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (
        prop::collection::vec(0u8..2, 0..96),
        prop::collection::vec(0u8..2, 0..400),
        1usize..5,
    );
    run(cases, strat, |(asm, payload, multiple)| {
        let cfg = FrameConfig::new(asm.clone(), payload.len()).with_tail_to_multiple(multiple);
        let frame = attach_asm(&payload, &cfg).unwrap();
        prop_assert_eq!(frame.len() % multiple, 0);
        prop_assert_eq!(frame.len(), cfg.frame_len());
        prop_assert!(frame[asm.len() + payload.len()..].iter().all(|&b| b == 0));
        let llr: Vec<f64> = frame.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
        let (a, p) = split_frame(&llr, &cfg).unwrap();
        let hard = |v: &[f64]| v.iter().map(|&l| rcldpc::hard_bit(l)).collect::<Vec<_>>();
        prop_assert_eq!(hard(a), asm);
        prop_assert_eq!(hard(p), payload);
        Ok(())
    })
}

pub fn alist_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (1usize..24, 1usize..40).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.2), n), m)
    });
    run(cases, strat, |dense| {
        let rows: Vec<Vec<u8>> = dense
            .iter()
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect();
        let h = ParityCheckMatrix::from_dense(&rows).unwrap();
        let text = emit_alist(&h);
        let back = parse_alist(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(emit_alist(&back), text);
        Ok(())
    })
}

pub fn rate_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (2i128..2000)
        .prop_flat_map(|b| (1i128..b, Just(b)))
        .prop_flat_map(|(a, b)| {
            // Δ in thousandths of a percent, keeping R_p ≤ 1.
            let max = (100_000 * (b - a)) / b;
            (Just(a), Just(b), 0..=max)
        });
    run(cases, strat, |(a, b, milli)| {
        let native = Rational::new(a, b);
        let delta = Rational::new(milli, 1000);
        let rp = punctured_rate(native, delta).unwrap();
        prop_assert!(rp >= native && rp <= Rational::from_integer(1));
        prop_assert_eq!(required_overhead(native, rp).unwrap(), delta);
        let text = format!("{}.{:03}", milli / 1000, milli % 1000);
        prop_assert_eq!(parse_decimal(&text).unwrap(), delta);
        let f = milli as f64 / 1000.0;
        prop_assert_eq!(rational_from_f64(f).unwrap(), delta);
        Ok(())
    })
}

/// Every round-trip property, by name.
pub const ALL: &[(&str, fn(u32) -> Result<(), String>)] = &[
    ("interleave/deinterleave", interleave_roundtrip),
    ("puncture/depuncture", puncture_roundtrip),
    ("attach/split ASM", asm_roundtrip),
    ("alist emit/parse", alist_roundtrip),
    ("rate round-trip", rate_roundtrip),
];
