// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fejér-weighted short sums around a center `x` and their expected value.
//!
//! The weighted sum `sum_{|n-x| <= h} (1 - |n-x|/h) f(n)` splits into an
//! ascending ramp on `[x-h, x]` and a descending ramp on `[x+1, x+h]`. Each
//! ramp is an affine combination of `sum f(n)` and `sum n f(n)` over its
//! interval, so two prefix tables give every center in O(1).
//!
//! Windows reaching below `n = 1` are clamped: those terms contribute zero.

use crate::arith::FunctionTable;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Triangular window of even half-width `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FejerWindow {
    h: usize,
}

impl FejerWindow {
    pub fn new(h: usize) -> Result<Self> {
        if h == 0 || !h.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "half-width h must be a positive even integer, got {h}"
            )));
        }
        Ok(FejerWindow { h })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// `1 - |s|/h` inside the window, 0 outside.
    pub fn weight<S: Scalar>(&self, s: i64) -> S {
        let h = self.h as i64;
        if s.abs() >= h {
            S::zero()
        } else {
            S::ratio(h - s.abs(), h)
        }
    }
}

/// `p0[n] = sum_{m <= n} f(m)` and `p1[n] = sum_{m <= n} m f(m)`, `n = 0..=max_n`.
#[derive(Clone, Debug)]
pub struct PrefixSums<S> {
    p0: Vec<S>,
    p1: Vec<S>,
}

impl<S: Scalar> PrefixSums<S> {
    pub fn new(f: &FunctionTable<S>) -> Self {
        let p0 = S::prefix_sums(f.values().iter().cloned());
        let p1 = S::prefix_sums(
            f.values()
                .iter()
                .enumerate()
                .map(|(k, v)| S::from_i64(k as i64 + 1) * v.clone()),
        );
        PrefixSums { p0, p1 }
    }

    pub fn max_n(&self) -> usize {
        self.p0.len() - 1
    }

    pub fn p0(&self) -> &[S] {
        &self.p0
    }

    pub fn p1(&self) -> &[S] {
        &self.p1
    }

    /// Triangular-weighted sum of `f` around `x`.
    pub fn fejer_short_sum(&self, x: usize, w: FejerWindow) -> Result<S> {
        let h = w.h();
        check_center(x, h, self.max_n())?;
        let (p0, p1) = (&self.p0, &self.p1);
        let start = x as i64 - h as i64;
        let lo = start.max(1) as usize;

        // ascending ramp: weight (n - start)/h on [lo, x]
        let s0 = p0[x].clone() - p0[lo - 1].clone();
        let s1 = p1[x].clone() - p1[lo - 1].clone();
        let left = s1 - S::from_i64(start) * s0;

        // descending ramp: weight (x + h - n)/h on [x+1, x+h]
        let end = x + h;
        let t0 = p0[end].clone() - p0[x].clone();
        let t1 = p1[end].clone() - p1[x].clone();
        let right = S::from_i64(end as i64) * t0 - t1;

        Ok((left + right) / S::from_i64(h as i64))
    }
}

fn check_center(x: usize, h: usize, max_n: usize) -> Result<()> {
    if x == 0 {
        return Err(Error::domain("center x must be at least 1"));
    }
    if x + h > max_n {
        return Err(Error::range(format!(
            "window around x = {x} with h = {h} needs the table up to {}, have {max_n}",
            x + h
        )));
    }
    Ok(())
}

/// One-shot [`PrefixSums::fejer_short_sum`]; builds the prefix tables each call.
pub fn fejer_short_sum<S: Scalar>(f: &FunctionTable<S>, x: usize, w: FejerWindow) -> Result<S> {
    check_center(x, w.h(), f.max_n())?;
    PrefixSums::new(f).fejer_short_sum(x, w)
}

/// The literal double average `(1/h) sum_{m <= h} sum_{0 <= |n-x| < m} f(n)`.
pub fn averaged_double_sum<S: Scalar>(f: &FunctionTable<S>, x: usize, w: FejerWindow) -> Result<S> {
    let h = w.h();
    check_center(x, h, f.max_n())?;
    let mut total = S::zero();
    for m in 1..=h {
        let lo = (x as i64 - m as i64 + 1).max(1) as usize;
        for n in lo..=x + m - 1 {
            total = total + f.at(n).clone();
        }
    }
    Ok(total / S::from_i64(h as i64))
}

/// `sum_{d <= n} g(d)/d` for `n = 0..=max_n`.
#[derive(Clone, Debug)]
pub struct HarmonicPrefix<S> {
    sums: Vec<S>,
}

impl<S: Scalar> HarmonicPrefix<S> {
    pub fn new(g: &FunctionTable<S>) -> Self {
        let sums = S::prefix_sums(
            g.values()
                .iter()
                .enumerate()
                .map(|(k, v)| v.clone() / S::from_i64(k as i64 + 1)),
        );
        HarmonicPrefix { sums }
    }

    pub fn upto(&self, n: usize) -> &S {
        &self.sums[n]
    }

    pub fn max_n(&self) -> usize {
        self.sums.len() - 1
    }
}

/// Expected value `M(x, h) = h * sum_{d <= x+h} g(d)/d` (untruncated).
pub fn mean_value<S: Scalar>(g: &FunctionTable<S>, x: usize, w: FejerWindow) -> Result<S> {
    let end = x + w.h();
    if g.max_n() < end {
        return Err(Error::range(format!(
            "mean value needs g on [1, {end}], have [1, {}]",
            g.max_n()
        )));
    }
    let mut total = S::zero();
    for d in 1..=end {
        let v = g.at(d);
        if !v.is_zero() {
            total = total + v.clone() / S::from_i64(d as i64);
        }
    }
    Ok(S::from_i64(w.h() as i64) * total)
}

/// Weighted count of positive multiples of `q` in the window around `x`.
pub fn window_multiple_weight<S: Scalar>(q: usize, x: usize, w: FejerWindow) -> S {
    let h = w.h();
    let lo = x.saturating_sub(h).max(1);
    let first = lo.div_ceil(q) * q;
    let mut total = S::zero();
    let mut n = first;
    while n <= x + h {
        total = total + w.weight::<S>(n as i64 - x as i64);
        n += q;
    }
    total
}

/// `h q χ̃_q(x)`, which is always an integer.
pub fn chi_tilde_numerator(q: usize, x: usize, w: FejerWindow) -> i64 {
    let h = w.h() as i64;
    let lo = x.saturating_sub(w.h()).max(1);
    let mut n = lo.div_ceil(q) * q;
    let mut count = 0i64;
    while n <= x + w.h() {
        count += h - (n as i64 - x as i64).abs();
        n += q;
    }
    q as i64 * count - h * h
}

/// `χ̃_q(x)`: weighted count of multiples of `q` near `x`, minus `h/q`.
pub fn chi_tilde_direct<S: Scalar>(q: usize, x: usize, w: FejerWindow) -> Result<S> {
    if q == 0 {
        return Err(Error::domain("modulus q must be at least 1"));
    }
    if x == 0 {
        return Err(Error::domain("center x must be at least 1"));
    }
    Ok(window_multiple_weight::<S>(q, x, w) - S::ratio(w.h() as i64, q as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{dirichlet_convolve_unit, sieve_divisor_count, GSpec};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn win(h: usize) -> FejerWindow {
        FejerWindow::new(h).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::ratio(p, d)
    }

    #[test]
    fn window_rejects_odd_and_zero() {
        assert!(FejerWindow::new(3).is_err());
        assert!(FejerWindow::new(0).is_err());
        let w = win(4);
        assert_eq!(w.weight::<Rational>(0), q(1, 1));
        assert_eq!(w.weight::<Rational>(4), q(0, 1));
        assert_eq!(w.weight::<Rational>(-4), q(0, 1));
        assert_eq!(w.weight::<Rational>(-1), q(3, 4));
    }

    #[test]
    fn constant_function_gives_h() {
        let one = GSpec::Unit.table::<Rational>(100).unwrap();
        for h in [2, 4, 10] {
            for x in h + 1..=100 - h {
                assert_eq!(fejer_short_sum(&one, x, win(h)).unwrap(), Rational::from_i64(h as i64));
            }
        }
        // f = δ₁ * 1 is the constant 1, and M = h for g = δ₁
        let delta = GSpec::Delta1.table::<Rational>(100).unwrap();
        let f = dirichlet_convolve_unit(&delta, 100).unwrap();
        assert_eq!(
            fejer_short_sum(&f, 50, win(6)).unwrap(),
            mean_value(&delta, 50, win(6)).unwrap()
        );
    }

    #[test]
    fn divisor_function_nine_term_hand_sum() {
        let d = sieve_divisor_count::<Rational>(30).unwrap();
        // d(8..=16) = 4,3,4,2,6,2,4,4,5 ; weights 0,1/4,1/2,3/4,1,3/4,1/2,1/4,0
        let hand = q(0, 1) * q(4, 1)
            + q(1, 4) * q(3, 1)
            + q(1, 2) * q(4, 1)
            + q(3, 4) * q(2, 1)
            + q(6, 1)
            + q(3, 4) * q(2, 1)
            + q(1, 2) * q(4, 1)
            + q(1, 4) * q(4, 1)
            + q(0, 1) * q(5, 1);
        assert_eq!(fejer_short_sum(&d, 12, win(4)).unwrap(), hand);
        assert_eq!(averaged_double_sum(&d, 12, win(4)).unwrap(), hand);
    }

    #[test]
    fn double_sum_with_h_two() {
        let f = GSpec::Random(5).table::<Rational>(20).unwrap();
        let x = 7;
        let expect = f.at(x).clone() + (f.at(x - 1).clone() + f.at(x + 1).clone()) / Rational::from_i64(2);
        assert_eq!(averaged_double_sum(&f, x, win(2)).unwrap(), expect);
    }

    #[test]
    fn range_errors() {
        let f = GSpec::Unit.table::<f64>(10).unwrap();
        assert!(matches!(fejer_short_sum(&f, 9, win(2)), Err(Error::Range(_))));
        assert!(matches!(averaged_double_sum(&f, 9, win(2)), Err(Error::Range(_))));
        assert!(matches!(mean_value(&f, 9, win(2)), Err(Error::Range(_))));
        assert!(chi_tilde_direct::<f64>(0, 5, win(2)).is_err());
    }

    #[test]
    fn mean_value_examples() {
        let delta = GSpec::Delta1.table::<Rational>(20).unwrap();
        assert_eq!(mean_value(&delta, 10, win(4)).unwrap(), Rational::from_i64(4));
        let g = FunctionTable::from_fn(20, |n| Rational::from_i64((n <= 4) as i64)).unwrap();
        assert_eq!(mean_value(&g, 2, win(2)).unwrap(), q(25, 6));
        let mu = crate::arith::sieve_mobius::<Rational>(100).unwrap();
        for cap in [1usize, 10, 37, 100] {
            let cut = crate::arith::restrict(&mu, cap);
            let brute = (1..=cap).fold(Rational::from_i64(0), |acc, d| {
                acc + mu.at(d).clone() / Rational::from_i64(d as i64)
            });
            assert_eq!(mean_value(&cut, 96, win(4)).unwrap(), brute * Rational::from_i64(4));
        }
    }

    #[test]
    fn chi_tilde_examples() {
        for x in 3..60 {
            assert_eq!(chi_tilde_direct::<Rational>(1, x, win(2)).unwrap(), q(0, 1));
            for h in [2, 4, 8] {
                if x > h {
                    assert_eq!(chi_tilde_direct::<Rational>(2, x, win(h)).unwrap(), q(0, 1));
                }
            }
        }
        assert_eq!(chi_tilde_direct::<Rational>(3, 9, win(2)).unwrap(), q(1, 3));
        assert_eq!(chi_tilde_direct::<Rational>(3, 10, win(2)).unwrap(), q(-1, 6));
    }

    #[test]
    fn chi_tilde_numerator_is_scaled_value() {
        for qq in 1..=25usize {
            for h in [2usize, 6, 10] {
                for x in 1..80 {
                    let exact = chi_tilde_direct::<Rational>(qq, x, win(h)).unwrap();
                    let scaled = Rational::from_i64(chi_tilde_numerator(qq, x, win(h)));
                    assert_eq!(exact * Rational::from_i64((h * qq) as i64), scaled);
                }
            }
        }
    }

    #[test]
    fn chi_tilde_is_periodic() {
        for qq in 1..=30usize {
            for h in [2usize, 4, 6, 12] {
                for x in h + 1..h + 40 {
                    assert_eq!(
                        chi_tilde_direct::<Rational>(qq, x, win(h)).unwrap(),
                        chi_tilde_direct::<Rational>(qq, x + qq, win(h)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn expansion_bridge_is_exact() {
        // f = g*1 with supp g in [1, Q], Q <= x: short sum minus mean is sum_q g(q) χ̃_q(x)
        let cap = 9;
        let g = crate::arith::restrict(&GSpec::Random(11).table::<Rational>(80).unwrap(), cap);
        let f = dirichlet_convolve_unit(&g, 80).unwrap();
        let pre = PrefixSums::new(&f);
        for h in [2usize, 4, 6] {
            for x in (h + 1).max(cap)..=80 - h {
                let lhs = pre.fejer_short_sum(x, win(h)).unwrap() - mean_value(&g, x, win(h)).unwrap();
                let rhs = (1..=cap).fold(Rational::from_i64(0), |acc, qq| {
                    acc + g.at(qq).clone() * chi_tilde_direct::<Rational>(qq, x, win(h)).unwrap()
                });
                assert_eq!(lhs, rhs, "x = {x}, h = {h}");
            }
        }
    }

    #[test]
    fn float_and_exact_agree() {
        let f = GSpec::Random(1).table::<Rational>(300).unwrap();
        let ff = f.to_float();
        let (pe, pf) = (PrefixSums::new(&f), PrefixSums::new(&ff));
        for x in 1..=290 {
            let e = pe.fejer_short_sum(x, win(10)).unwrap().to_f64();
            let v = pf.fejer_short_sum(x, win(10)).unwrap();
            assert!((e - v).abs() < 1e-12 * (1.0 + e.abs()));
        }
    }

    fn small_table(max_n: usize) -> impl Strategy<Value = FunctionTable<Rational>> {
        prop::collection::vec((-20i64..=20, 1i64..=9), max_n).prop_map(|v| {
            FunctionTable::from_values(v.into_iter().map(|(p, d)| Rational::ratio(p, d)).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn two_forms_identity(f in small_table(80), half in 1usize..=8, x in 1usize..=64) {
            let w = win(2 * half);
            prop_assume!(x + w.h() <= 80);
            prop_assert_eq!(fejer_short_sum(&f, x, w).unwrap(), averaged_double_sum(&f, x, w).unwrap());
        }

        #[test]
        fn linearity(f in small_table(60), g in small_table(60), a in -5i64..5, b in -5i64..5, x in 1usize..=50) {
            let w = win(6);
            prop_assume!(x + 6 <= 60);
            let (a, b) = (Rational::from_i64(a), Rational::from_i64(b));
            let combo = FunctionTable::from_fn(60, |n| a.clone() * f.at(n).clone() + b.clone() * g.at(n).clone()).unwrap();
            let lhs = fejer_short_sum(&combo, x, w).unwrap();
            let rhs = a * fejer_short_sum(&f, x, w).unwrap() + b * fejer_short_sum(&g, x, w).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
