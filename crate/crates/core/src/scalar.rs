// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exact rational used for every oracle-grade computation.
pub type Rational = BigRational;

/// Below this length a reduction is summed left to right.
const PAIRWISE_BLOCK: usize = 64;

/// Number field the sweeps are generic over: exact [`Rational`] or `f64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Running sums `out[k] = items[0] + ... + items[k-1]`, with `out[0] = 0`.
    fn prefix_sums<I: IntoIterator<Item = Self>>(items: I) -> Vec<Self> {
        let iter = items.into_iter();
        let mut out = Vec::with_capacity(iter.size_hint().0 + 1);
        let mut acc = Self::zero();
        out.push(acc.clone());
        for v in iter {
            acc = acc + v;
            out.push(acc.clone());
        }
        out
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    // Neumaier-compensated scan; the stored value is the rounded compensated sum.
    fn prefix_sums<I: IntoIterator<Item = Self>>(items: I) -> Vec<Self> {
        let iter = items.into_iter();
        let mut out = Vec::with_capacity(iter.size_hint().0 + 1);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        out.push(0.0);
        for v in iter {
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
            out.push(sum + comp);
        }
        out
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 rounds correctly even for huge numerators and denominators.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

/// Pairwise (tree) summation with a fixed split, so the rounding pattern
/// depends only on the length of the slice.
pub fn pairwise_sum<S: Scalar>(items: &[S]) -> S {
    if items.len() <= PAIRWISE_BLOCK {
        return items.iter().cloned().fold(S::zero(), |a, b| a + b);
    }
    let mid = items.len() / 2;
    pairwise_sum(&items[..mid]) + pairwise_sum(&items[mid..])
}
