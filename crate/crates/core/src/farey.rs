// SPDX-License-Identifier: MIT OR Apache-2.0

//! Reduced fractions of bounded denominator in `(0, 1/2]` and the split of
//! fraction pairs into near and far by an exact `1/A` threshold.

use std::cmp::Ordering;
use std::fmt;

use num::rational::Rational64;
use num::traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{map_range, Execution};

/// Reduced fraction `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FareyFraction {
    pub num: u64,
    pub den: u64,
}

impl FareyFraction {
    pub fn value(&self) -> Rational64 {
        Rational64::new_raw(self.num as i64, self.den as i64)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for FareyFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for FareyFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Sorted reduced fractions `j/ℓ` with `1 < ℓ <= Q` and `0 < j/ℓ <= 1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareySequence {
    order: u64,
    fractions: Vec<FareyFraction>,
}

impl FareySequence {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn fractions(&self) -> &[FareyFraction] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }
}

/// Iterator over the full Farey sequence of order `Q` on `[0, 1]`, by the
/// next-term recurrence.
pub struct FareyIter {
    order: u64,
    cur: (u64, u64),
    next: Option<(u64, u64)>,
    done: bool,
}

impl Iterator for FareyIter {
    type Item = FareyFraction;

    fn next(&mut self) -> Option<FareyFraction> {
        if self.done {
            return None;
        }
        let (a, b) = self.cur;
        match self.next {
            Some((c, d)) => {
                let k = (self.order + b) / d;
                self.cur = (c, d);
                self.next = if c == d { None } else { Some((k * c - a, k * d - b)) };
            }
            None => self.done = true,
        }
        Some(FareyFraction { num: a, den: b })
    }
}

/// Full Farey sequence of order `q` on `[0, 1]`, endpoints included.
pub fn farey_full(q: u64) -> Result<FareyIter> {
    if q == 0 {
        return Err(Error::domain("Farey order must be at least 1"));
    }
    Ok(FareyIter {
        order: q,
        cur: (0, 1),
        next: Some((1, q)),
        done: false,
    })
}

pub fn farey_enumerate(q: u64) -> Result<FareySequence> {
    if q < 2 {
        return Err(Error::domain(format!("Farey order must be at least 2, got {q}")));
    }
    let half = FareyFraction { num: 1, den: 2 };
    let fractions = farey_full(q)?.skip(1).take_while(|fr| *fr <= half).collect();
    Ok(FareySequence { order: q, fractions })
}

/// Smallest gap between consecutive fractions.
pub fn min_gap(seq: &FareySequence) -> Result<Rational64> {
    seq.fractions()
        .windows(2)
        .map(|w| w[1].value() - w[0].value())
        .min()
        .ok_or_else(|| Error::domain("min_gap needs at least two fractions"))
}

/// Smallest `A` for which sorted-index spacing `λ_n - λ_m >= (n - m)/A`
/// follows from the minimal gap.
pub fn admissible_spacing(seq: &FareySequence) -> Result<Rational64> {
    Ok(min_gap(seq)?.recip())
}

/// Exact test of `num/den <= 1/A` for a binary64 `A > 0` (`A = ∞` allowed).
#[derive(Clone, Copy, Debug)]
pub struct SpacingThreshold {
    a: f64,
    mantissa: u128,
    exponent: i32,
}

impl SpacingThreshold {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_nan() || a <= 0.0 {
            return Err(Error::domain(format!("spacing parameter A must be positive, got {a}")));
        }
        let (mantissa, exponent, _) = Float::integer_decode(a);
        Ok(SpacingThreshold {
            a,
            mantissa: mantissa as u128,
            exponent: exponent as i32,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `num/den <= 1/A`, i.e. `num * A <= den`. Requires `den > 0` and
    /// `num, den < 2^64`.
    pub fn is_near(&self, num: u64, den: u64) -> bool {
        if num == 0 {
            return true;
        }
        if self.a.is_infinite() {
            return false;
        }
        let lhs = num as u128 * self.mantissa; // < 2^117
        let den = den as u128;
        if self.exponent >= 0 {
            let shift = self.exponent as u32;
            if shift >= lhs.leading_zeros() {
                return false;
            }
            (lhs << shift) <= den
        } else {
            let shift = self.exponent.unsigned_abs();
            if shift >= den.leading_zeros() {
                return true;
            }
            lhs <= den << shift
        }
    }
}

/// Which separation a pair of fractions is keyed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKey {
    /// `δ = λ - μ` for `λ > μ`.
    Difference,
    /// `σ = ‖λ + μ‖`, distance to the nearest integer.
    WrappedSum,
}

impl PairKey {
    /// Key of the pair `(hi, lo)` as an unreduced `(num, den)`.
    pub fn of(self, hi: FareyFraction, lo: FareyFraction) -> (u64, u64) {
        let den = hi.den * lo.den;
        match self {
            PairKey::Difference => (hi.num * lo.den - lo.num * hi.den, den),
            PairKey::WrappedSum => {
                let s = (hi.num * lo.den + lo.num * hi.den) % den;
                (s.min(den - s), den)
            }
        }
    }
}

/// Index pairs `(i, k)` into `(left, right)` with `left[i] > right[k]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairPartition {
    pub near: Vec<(usize, usize)>,
    pub far: Vec<(usize, usize)>,
}

/// Splits every pair with `left[i] > right[k]` into NEAR (key `<= 1/A`) and
/// FAR (key `> 1/A`). Pairs of equal fractions belong to the diagonal and
/// are never listed.
pub fn spaced_pair_partition(
    left: &FareySequence,
    right: &FareySequence,
    a: f64,
    key: PairKey,
) -> Result<PairPartition> {
    spaced_pair_partition_with(left, right, a, key, Execution::default())
}

pub fn spaced_pair_partition_with(
    left: &FareySequence,
    right: &FareySequence,
    a: f64,
    key: PairKey,
    exec: Execution,
) -> Result<PairPartition> {
    let threshold = SpacingThreshold::new(a)?;
    let (lf, rf) = (left.fractions(), right.fractions());
    let rows = map_range(exec, 0..lf.len(), |i| {
        let mut near = Vec::new();
        let mut far = Vec::new();
        for (k, &lo) in rf.iter().enumerate() {
            if lf[i] <= lo {
                continue;
            }
            let (num, den) = key.of(lf[i], lo);
            if threshold.is_near(num, den) {
                near.push((i, k));
            } else {
                far.push((i, k));
            }
        }
        (near, far)
    });
    let mut out = PairPartition::default();
    for (near, far) in rows {
        out.near.extend(near);
        out.far.extend(far);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::integer::gcd;
    use num::BigRational;
    use proptest::prelude::*;

    fn fr(num: u64, den: u64) -> FareyFraction {
        FareyFraction { num, den }
    }

    #[test]
    fn small_orders() {
        assert_eq!(farey_enumerate(2).unwrap().fractions(), &[fr(1, 2)]);
        assert_eq!(
            farey_enumerate(5).unwrap().fractions(),
            &[fr(1, 5), fr(1, 4), fr(1, 3), fr(2, 5), fr(1, 2)]
        );
        assert!(farey_enumerate(1).is_err());
        let full: Vec<_> = farey_full(3).unwrap().collect();
        assert_eq!(full, vec![fr(0, 1), fr(1, 3), fr(1, 2), fr(2, 3), fr(1, 1)]);
        assert_eq!(farey_full(1).unwrap().count(), 2);
    }

    #[test]
    fn matches_brute_force_enumeration() {
        for q in 2..=100u64 {
            let mut brute: Vec<FareyFraction> = (2..=q)
                .flat_map(|l| (1..=l / 2).filter(move |&j| gcd(j, l) == 1).map(move |j| fr(j, l)))
                .collect();
            brute.sort();
            assert_eq!(farey_enumerate(q).unwrap().fractions(), &brute[..], "q = {q}");
        }
    }

    #[test]
    fn gaps() {
        let s5 = farey_enumerate(5).unwrap();
        assert_eq!(min_gap(&s5).unwrap(), Rational64::new(1, 20));
        assert_eq!(admissible_spacing(&s5).unwrap(), Rational64::from_integer(20));
        assert!(min_gap(&farey_enumerate(2).unwrap()).is_err());
        for q in 3..=300u64 {
            let s = farey_enumerate(q).unwrap();
            assert!(min_gap(&s).unwrap() >= Rational64::new(1, (q * q) as i64));
        }
    }

    #[test]
    fn partition_examples() {
        let s5 = farey_enumerate(5).unwrap();
        let idx = |f: FareyFraction| s5.fractions().iter().position(|&g| g == f).unwrap();
        let p = spaced_pair_partition(&s5, &s5, 10.0, PairKey::Difference).unwrap();
        assert!(p.near.contains(&(idx(fr(1, 4)), idx(fr(1, 5)))));
        assert!(p.far.contains(&(idx(fr(1, 2)), idx(fr(1, 5)))));
        assert_eq!(p.near.len() + p.far.len(), 10);

        // A tiny: 1/A above every key, nothing is far
        let p = spaced_pair_partition(&s5, &s5, 1e-3, PairKey::Difference).unwrap();
        assert!(p.far.is_empty());
        // A huge: 1/A below the smallest positive key, nothing is near
        let p = spaced_pair_partition(&s5, &s5, 1e9, PairKey::Difference).unwrap();
        assert!(p.near.is_empty());
        let p = spaced_pair_partition(&s5, &s5, f64::INFINITY, PairKey::Difference).unwrap();
        assert_eq!(p.far.len(), 10);

        assert_eq!(PairKey::WrappedSum.of(fr(1, 2), fr(1, 2)).0, 0);
        assert_eq!(PairKey::WrappedSum.of(fr(1, 2), fr(2, 5)), (1, 10));
        assert!(spaced_pair_partition(&s5, &s5, 0.0, PairKey::Difference).is_err());
    }

    #[test]
    fn tie_goes_to_near() {
        // δ(1/4, 1/5) = 1/20 exactly
        let t = SpacingThreshold::new(20.0).unwrap();
        assert!(t.is_near(1, 20));
        assert!(!t.is_near(1, 19));
        assert!(SpacingThreshold::new(f64::NAN).is_err());
    }

    #[test]
    fn partition_modes_agree() {
        let s = farey_enumerate(30).unwrap();
        let a = spaced_pair_partition_with(&s, &s, 77.5, PairKey::WrappedSum, Execution::Sequential).unwrap();
        let b = spaced_pair_partition_with(&s, &s, 77.5, PairKey::WrappedSum, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let n = s.len();
        assert_eq!(a.near.len() + a.far.len(), n * (n - 1) / 2);
    }

    proptest! {
        #[test]
        fn threshold_is_exact(num in 0u64..1_000_000, den in 1u64..1_000_000, a in 1e-8f64..1e12) {
            let t = SpacingThreshold::new(a).unwrap();
            let exact_a = BigRational::from_float(a).unwrap();
            let lhs = BigRational::from_integer(num.into()) * exact_a;
            let expected = lhs <= BigRational::from_integer(den.into());
            prop_assert_eq!(t.is_near(num, den), expected);
        }
    }
}
