// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fejér-kernel Fourier coefficients, the finite Fourier expansion of
//! `χ̃_q`, and Ramanujan coefficients of `f = g * 1`.
//!
//! For even `h` the weighted multiple count expands as
//!
//! ```text
//! χ̃_q(x) = sum_{ℓ | q, ℓ > 1} (ℓ/q) sum*_{j <= ℓ/2} c̃_{j,ℓ} cos(2π x j / ℓ)
//! c̃_{j,q} = (1/q) F̃_h(j/q),   F̃_h(β) = (2/h) sin²(π h β) / sin²(π β)
//! ```
//!
//! where `sum*` runs over `j` coprime to `ℓ`. Arguments of the form `j/q` are
//! reduced modulo `q` in integers before any trigonometry, so `F̃_h(j/q)` is
//! exactly zero whenever `q | jh`.

use std::f64::consts::PI;

use num::integer::gcd;
use serde::Serialize;

use crate::arith::FunctionTable;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Rational, Scalar};
use crate::short_sums::{chi_tilde_numerator, FejerWindow};

/// `F̃_h(β)` for real, non-integer `β`.
pub fn fejer_kernel_value(beta: f64, w: FejerWindow) -> Result<f64> {
    if !beta.is_finite() || beta.fract() == 0.0 {
        return Err(Error::domain(format!(
            "Fejér kernel argument must be a non-integer real, got {beta}"
        )));
    }
    let h = w.h() as f64;
    if (h * beta).fract() == 0.0 {
        return Ok(0.0);
    }
    let top = (PI * h * beta).sin().powi(2);
    if top == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 / h * top / (PI * beta).sin().powi(2))
}

/// `F̃_h(j/q)` with the argument reduced exactly; `q` must not divide `j`.
pub fn fejer_kernel_at(j: u64, q: u64, w: FejerWindow) -> f64 {
    debug_assert!(q > 0 && !j.is_multiple_of(q));
    let h = w.h() as u64;
    let top_class = ((h as u128 * j as u128) % q as u128) as u64;
    if top_class == 0 {
        return 0.0;
    }
    let top = sin_pi_frac(top_class, q).powi(2);
    let bottom = sin_pi_frac(j % q, q).powi(2);
    2.0 / h as f64 * top / bottom
}

/// `sin(π k / q)` for `0 <= k < 2q`.
fn sin_pi_frac(k: u64, q: u64) -> f64 {
    // fold into [0, 1/2] so the argument handed to sin stays small
    let (k, sign) = if k >= q { (k - q, -1.0) } else { (k, 1.0) };
    let k = k.min(q - k);
    sign * (PI * k as f64 / q as f64).sin()
}

/// `cos(2π k / q)`.
pub(crate) fn cos_two_pi_frac(k: u64, q: u64) -> f64 {
    let k = k % q;
    let k = k.min(q - k);
    (2.0 * PI * k as f64 / q as f64).cos()
}

/// A Fourier coefficient `c̃_{j,q}` of `χ̃_q`, with `1 <= j <= q/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FejerCoefficient {
    pub j: u64,
    pub q: u64,
    pub value: f64,
}

pub fn fejer_coefficient(j: u64, q: u64, w: FejerWindow) -> Result<FejerCoefficient> {
    if j == 0 || 2 * j > q {
        return Err(Error::domain(format!(
            "coefficient index needs 1 <= j <= q/2, got j = {j}, q = {q}"
        )));
    }
    Ok(FejerCoefficient {
        j,
        q,
        value: fejer_kernel_at(j, q, w) / q as f64,
    })
}

/// `χ̃_q(x)` from the divisor-flipped expansion over reduced fractions.
pub fn chi_tilde_expansion(q: u64, x: u64, w: FejerWindow) -> f64 {
    let mut terms = Vec::new();
    for ell in (2..=q).filter(|ell| q.is_multiple_of(*ell)) {
        let scale = ell as f64 / q as f64;
        for j in (1..=ell / 2).filter(|&j| gcd(j, ell) == 1) {
            let c = fejer_kernel_at(j, ell, w) / ell as f64;
            let phase = (x as u128 * j as u128 % ell as u128) as u64;
            terms.push(scale * c * cos_two_pi_frac(phase, ell));
        }
    }
    pairwise_sum(&terms)
}

/// `sum c̃_{j,q}^2` over `1 <= j < q`, optionally only over `j` coprime to `q`.
pub fn coefficient_square_sum(q: u64, w: FejerWindow, reduced_only: bool) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain(format!("square sum needs q >= 2, got {q}")));
    }
    let terms: Vec<f64> = (1..q)
        .filter(|&j| !reduced_only || gcd(j, q) == 1)
        .map(|j| (fejer_kernel_at(j, q, w) / q as f64).powi(2))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `(1/q) sum_{one period} χ̃_q(x)^2`, from exact integer window counts.
pub fn chi_tilde_mean_square(q: u64, w: FejerWindow) -> Result<f64> {
    if q == 0 {
        return Err(Error::domain("modulus q must be at least 1"));
    }
    let h = w.h();
    let total: i128 = (h + 1..=h + q as usize)
        .map(|x| (chi_tilde_numerator(q as usize, x, w) as i128).pow(2))
        .sum();
    // χ̃ = numerator / (h q)
    let scale = (h as i128).pow(2) * (q as i128).pow(3);
    Ok(Rational::new(total.into(), scale.into()).to_f64())
}

/// Both sides of Parseval for `χ̃_q`:
/// `(1/q) sum_{one period} χ̃_q(x)^2` from direct window counts, and
/// `(1/4) sum_{1 <= j < q} c̃_{j,q}^2`.
pub fn parseval_sides(q: u64, w: FejerWindow) -> Result<(f64, f64)> {
    let lhs = chi_tilde_mean_square(q, w)?;
    let rhs = coefficient_square_sum(q, w, false)? / 4.0;
    Ok((lhs, rhs))
}

/// `R_ℓ(g * 1) = sum_{m <= Q, ℓ | m} g(m)/m` for `g` supported on `[1, Q]`.
pub fn ramanujan_coefficient<S: Scalar>(g: &FunctionTable<S>, ell: usize, q_max: usize) -> Result<S> {
    if ell == 0 {
        return Err(Error::domain("Ramanujan coefficient index must be at least 1"));
    }
    check_support(g, q_max)?;
    let top = q_max.min(g.max_n());
    let terms: Vec<S> = (ell..=top)
        .step_by(ell)
        .filter(|&m| !g.at(m).is_zero())
        .map(|m| g.at(m).clone() / S::from_i64(m as i64))
        .collect();
    Ok(pairwise_sum(&terms))
}

fn check_support<S: Scalar>(g: &FunctionTable<S>, q_max: usize) -> Result<()> {
    let top = g.support_max();
    if top > q_max {
        return Err(Error::Precondition(format!(
            "g must vanish beyond Q = {q_max}, but g({top}) != 0"
        )));
    }
    Ok(())
}

/// `R_ℓ(g * 1)` for every `1 <= ℓ <= Q`.
#[derive(Clone, Debug)]
pub struct RamanujanTable<S> {
    q_max: usize,
    values: Vec<S>,
}

impl<S: Scalar> RamanujanTable<S> {
    pub fn new(g: &FunctionTable<S>, q_max: usize) -> Result<Self> {
        check_support(g, q_max)?;
        let top = q_max.min(g.max_n());
        // one pass over the support, pushing g(m)/m onto every divisor of m
        let mut buckets: Vec<Vec<S>> = vec![Vec::new(); q_max];
        for m in 1..=top {
            let v = g.at(m);
            if v.is_zero() {
                continue;
            }
            let term = v.clone() / S::from_i64(m as i64);
            for ell in (1..=m).filter(|ell| m % ell == 0) {
                buckets[ell - 1].push(term.clone());
            }
        }
        let values = buckets.iter().map(|b| pairwise_sum(b)).collect();
        Ok(RamanujanTable { q_max, values })
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// `R_ℓ`; zero for `ℓ > Q`.
    pub fn get(&self, ell: usize) -> S {
        match ell {
            0 => S::zero(),
            _ => self.values.get(ell - 1).cloned().unwrap_or_else(S::zero),
        }
    }
}
