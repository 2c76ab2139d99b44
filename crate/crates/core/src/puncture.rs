//! Interleaving, random puncturing, depuncturing and rate arithmetic.
//!
//! Puncturing removes `N_φ` positions of the (interleaved) codeword before
//! transmission; depuncturing puts zero LLRs back at those positions so the
//! decoder sees them as erasures. The rate after puncturing is
//! `R_p = R / (1 - Δ/100)` with `Δ = 100·N_φ/N`.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::code::check_len;
use crate::{rng, Error, Result};

pub type Rational = Ratio<i128>;

/// Seeded bijection on `0..n`, applied as `out[forward[i]] = v[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleaverPermutation {
    seed: u64,
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl InterleaverPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            seed: 0,
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.forward.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }
}

/// Fisher-Yates shuffle of the identity driven by the seeded generator.
pub fn make_permutation(seed: u64, n: usize) -> InterleaverPermutation {
    let mut rng = rng::seeded(seed);
    let mut forward: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        forward.swap(i, j);
    }
    let mut inverse = vec![0; n];
    for (i, &f) in forward.iter().enumerate() {
        inverse[f] = i;
    }
    InterleaverPermutation {
        seed,
        forward,
        inverse,
    }
}

pub fn interleave<T: Copy + Default>(v: &[T], perm: &InterleaverPermutation) -> Result<Vec<T>> {
    check_len(perm.n(), v.len())?;
    let mut out = vec![T::default(); v.len()];
    for (x, &f) in v.iter().zip(&perm.forward) {
        out[f] = *x;
    }
    Ok(out)
}

pub fn deinterleave<T: Copy>(v: &[T], perm: &InterleaverPermutation) -> Result<Vec<T>> {
    check_len(perm.n(), v.len())?;
    Ok(perm.forward.iter().map(|&f| v[f]).collect())
}

/// Sorted set of punctured positions in a length-`n` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturePattern {
    n: usize,
    seed: u64,
    punctured: Vec<usize>,
    mask: Vec<bool>,
}

impl PuncturePattern {
    /// Pattern that punctures nothing.
    pub fn none(n: usize) -> Self {
        Self {
            n,
            seed: 0,
            punctured: Vec::new(),
            mask: vec![false; n],
        }
    }

    /// Pattern from an explicit index set.
    pub fn from_indices(n: usize, mut punctured: Vec<usize>) -> Result<Self> {
        punctured.sort_unstable();
        punctured.dedup();
        if punctured.len() >= n.max(1) {
            return Err(Error::TooManyPunctured {
                n_punct: punctured.len(),
                n,
            });
        }
        if let Some(&bad) = punctured.iter().find(|&&i| i >= n) {
            return Err(Error::PositionOutOfBounds {
                row: 0,
                col: bad,
                rows: 1,
                cols: n,
            });
        }
        let mut mask = vec![false; n];
        for &i in &punctured {
            mask[i] = true;
        }
        Ok(Self {
            n,
            seed: 0,
            punctured,
            mask,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn indices(&self) -> &[usize] {
        &self.punctured
    }

    pub fn n_punctured(&self) -> usize {
        self.punctured.len()
    }

    /// Length of the punctured sequence.
    pub fn n_kept(&self) -> usize {
        self.n - self.punctured.len()
    }

    pub fn is_punctured(&self, i: usize) -> bool {
        self.mask[i]
    }
}

/// Uniform `n_punct`-subset of `0..n` by a partial Fisher-Yates shuffle.
pub fn sample_pattern(seed: u64, n: usize, n_punct: usize) -> Result<PuncturePattern> {
    if n_punct >= n.max(1) {
        return Err(Error::TooManyPunctured { n_punct, n });
    }
    let mut rng = rng::seeded(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..n_punct {
        let j = rng.random_range(i as u64..n as u64) as usize;
        idx.swap(i, j);
    }
    idx.truncate(n_punct);
    let mut p = PuncturePattern::from_indices(n, idx)?;
    p.seed = seed;
    Ok(p)
}

/// Drop punctured positions, keeping the survivors in order.
pub fn puncture<T: Copy>(v: &[T], p: &PuncturePattern) -> Result<Vec<T>> {
    check_len(p.n, v.len())?;
    Ok(v.iter()
        .zip(&p.mask)
        .filter(|(_, &m)| !m)
        .map(|(x, _)| *x)
        .collect())
}

/// Re-expand to length `n`, writing exactly `0.0` at punctured positions.
pub fn depuncture(llr: &[f64], p: &PuncturePattern) -> Result<Vec<f64>> {
    check_len(p.n_kept(), llr.len())?;
    let mut kept = llr.iter();
    Ok(p.mask
        .iter()
        .map(|&m| if m { 0.0 } else { *kept.next().unwrap() })
        .collect())
}

/// Exact rational from a decimal string such as `"16.7"` or `"5"`.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Config(format!("not a decimal number: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 30
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i128 = digits.parse().map_err(|_| bad())?;
    let r = Rational::new(num, 10i128.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

/// Exact rational for a finite `f64`, via its shortest decimal representation.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Config(format!("non-finite value {x}")));
    }
    parse_decimal(&format!("{x}"))
}

/// `R_p = R / (1 - Δ/100)`.
pub fn punctured_rate(native: Rational, delta_pct: Rational) -> Result<Rational> {
    if native <= Rational::zero() || native > Rational::one() {
        return Err(Error::InvalidRate(format!("native rate {native} not in (0, 1]")));
    }
    if delta_pct < Rational::zero() || delta_pct >= Rational::from_integer(100) {
        return Err(Error::RateAboveOne {
            delta_pct: delta_pct.to_f64().unwrap_or(f64::NAN),
        });
    }
    let rp = native / (Rational::one() - delta_pct / Rational::from_integer(100));
    if rp > Rational::one() {
        return Err(Error::RateAboveOne {
            delta_pct: delta_pct.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(rp)
}

/// `Δ = (1 - R/R_p)·100`, in percent.
pub fn required_overhead(native: Rational, target: Rational) -> Result<Rational> {
    if native <= Rational::zero() || target > Rational::one() {
        return Err(Error::InvalidRate(format!(
            "need 0 < R <= R_p <= 1, got R={native}, R_p={target}"
        )));
    }
    if target < native {
        return Err(Error::TargetBelowNative {
            native: native.to_f64().unwrap_or(f64::NAN),
            target: target.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((Rational::one() - native / target) * Rational::from_integer(100))
}

/// `N_φ = round(Δ/100 · N)`, ties to even.
pub fn punctured_count(delta_pct: Rational, n: usize) -> usize {
    let exact = delta_pct * Rational::from_integer(n as i128) / Rational::from_integer(100);
    let floor = exact.floor();
    let frac = exact - floor;
    let half = Rational::new(1, 2);
    let base = floor.to_integer();
    let rounded = if frac > half || (frac == half && base % 2 != 0) {
        base + 1
    } else {
        base
    };
    rounded.max(0) as usize
}

/// Native rate, overhead and punctured rate, kept together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatePair {
    pub native: Rational,
    pub delta_pct: Rational,
    pub punctured: Rational,
}

impl RatePair {
    pub fn new(native: Rational, delta_pct: Rational) -> Result<Self> {
        Ok(Self {
            native,
            delta_pct,
            punctured: punctured_rate(native, delta_pct)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn permutation_basics() {
        assert_eq!(make_permutation(3, 1).forward(), &[0]);
        assert_eq!(make_permutation(11, 50), make_permutation(11, 50));
        assert_ne!(make_permutation(11, 50), make_permutation(12, 50));
    }

    #[test]
    fn golden_permutation() {
        // Recorded from the first run of ChaCha8(seed=7) Fisher-Yates.
        assert_eq!(make_permutation(7, 8).forward(), GOLDEN_SEED7_N8);
    }

    const GOLDEN_SEED7_N8: &[usize] = &[5, 0, 6, 2, 3, 4, 7, 1];

    #[test]
    fn interleave_one_hot() {
        let p = make_permutation(5, 10);
        let mut v = vec![0u8; 10];
        v[3] = 1;
        let out = interleave(&v, &p).unwrap();
        assert_eq!(out.iter().position(|&x| x == 1), Some(p.forward()[3]));
        let id = InterleaverPermutation::identity(10);
        assert_eq!(interleave(&v, &id).unwrap(), v);
        assert!(matches!(
            interleave(&v[..9], &p),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn puncture_depuncture_examples() {
        let p = PuncturePattern::from_indices(4, vec![3, 1]).unwrap();
        assert_eq!(puncture(&['a', 'b', 'c', 'd'], &p).unwrap(), vec!['a', 'c']);
        assert_eq!(
            depuncture(&[1.5, -2.0], &p).unwrap(),
            vec![1.5, 0.0, -2.0, 0.0]
        );
        let none = PuncturePattern::none(4);
        assert_eq!(puncture(&[1, 2, 3, 4], &none).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(depuncture(&[1.0, 2.0, 3.0, 4.0], &none).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(depuncture(&[1.0], &p).is_err());
    }

    #[test]
    fn sample_pattern_cases() {
        assert_eq!(sample_pattern(1, 10, 0).unwrap().n_punctured(), 0);
        let p = sample_pattern(1, 1024, punctured_count(r(167, 10), 1024)).unwrap();
        assert_eq!(p.n_punctured(), 171);
        assert!(p.indices().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p, sample_pattern(1, 1024, 171).unwrap());
        assert!(matches!(
            sample_pattern(1, 10, 10),
            Err(Error::TooManyPunctured { .. })
        ));
    }

    #[test]
    fn rounding_ties_to_even() {
        assert_eq!(punctured_count(r(167, 10), 1024), 171);
        assert_eq!(punctured_count(r(5, 1), 1024), 51); // 51.2
        assert_eq!(punctured_count(r(10, 1), 1024), 102); // 102.4
        assert_eq!(punctured_count(r(1, 1), 1024), 10); // 10.24
        assert_eq!(punctured_count(r(25, 1), 10), 2); // 2.5 -> 2
        assert_eq!(punctured_count(r(35, 1), 10), 4); // 3.5 -> 4
        assert_eq!(punctured_count(r(0, 1), 1024), 0);
    }

    #[test]
    fn rate_examples() {
        let two_thirds = r(2, 3);
        let at = |d: Rational| punctured_rate(two_thirds, d).unwrap().to_f64().unwrap();
        assert!((at(r(5, 1)) - 0.7018).abs() < 1e-4);
        assert!((at(r(10, 1)) - 0.7407).abs() < 1e-4);
        assert!((at(r(1, 1)) - 0.6734).abs() < 1e-4);
        assert_eq!(punctured_rate(two_thirds, r(0, 1)).unwrap(), two_thirds);
        assert!(matches!(
            punctured_rate(two_thirds, r(40, 1)),
            Err(Error::RateAboveOne { .. })
        ));

        let delta = required_overhead(two_thirds, r(4, 5)).unwrap();
        assert_eq!(delta, r(50, 3));
        assert_eq!(required_overhead(two_thirds, two_thirds).unwrap(), r(0, 1));
        assert_eq!(punctured_rate(two_thirds, delta).unwrap(), r(4, 5));
        assert!(matches!(
            required_overhead(r(4, 5), two_thirds),
            Err(Error::TargetBelowNative { .. })
        ));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("16.7").unwrap(), r(167, 10));
        assert_eq!(parse_decimal("5").unwrap(), r(5, 1));
        assert_eq!(parse_decimal("-0.25").unwrap(), r(-1, 4));
        assert_eq!(rational_from_f64(16.7).unwrap(), r(167, 10));
        assert!(parse_decimal("1e3").is_err());
        assert!(parse_decimal(".").is_err());
    }
}
