// SPDX-License-Identifier: MIT OR Apache-2.0

//! Invariant suites behind `msi verify` and the acceptance tests.
//!
//! Every property reports how many instances it checked and its worst
//! error. For exact properties the error is the largest absolute mismatch
//! (0 when all hold). For bound properties it is the largest observed
//! fraction of the allowed bound, so a pass means `max_error <= 1`.

use std::fmt;
use std::str::FromStr;

use num::{BigRational, Rational64, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{dirichlet_convolve_unit, sieve_divisor_count, FunctionTable, GSpec, SupportCutoff};
use crate::error::{Error, Result};
use crate::farey::{farey_enumerate, farey_full, min_gap, spaced_pair_partition_with, PairKey};
use crate::integral::{
    default_spacing, even_floor, exp_sum_closed_form, far_part_bound_check_with, majorant_compare_with,
    selberg_integral, selberg_integral_decomposed_with, selberg_integral_naive, DecompositionOptions, IntegralConfig,
    MajorantReport,
};
use crate::par::{map_range, map_slice, Execution};
use crate::scalar::{Rational, Scalar};
use crate::short_sums::{averaged_double_sum, chi_tilde_direct, mean_value, FejerWindow, PrefixSums};
use crate::spectral::{
    chi_tilde_expansion, chi_tilde_mean_square, coefficient_square_sum, fejer_coefficient, ramanujan_coefficient,
};

/// `C` in `sum_j c̃²_{j,q} <= C min(1, h/q)`: twice the brute-force maximum
/// over `q <= 2000`, even `h <= 200` (see `examples/calibrate.rs`).
pub const SQUARE_SUM_CONSTANT: f64 = 5.992;

/// `C_far` in `|far parts| <= C_far A h`: twice the maximum over the
/// reconstruction grid with `A` in `{N, N ln N}`.
pub const FAR_PART_CONSTANT: f64 = 0.3648;

/// Allowed growth `(N/N0)^0.2` of the majorant ratio; a desk-scale stand-in
/// for an arbitrary `N^ε`.
pub const GROWTH_EXPONENT: f64 = 0.2;

pub const EXPANSION_TOLERANCE: f64 = 1e-9;
pub const PARSEVAL_TOLERANCE: f64 = 1e-9;
pub const SCALING_TOLERANCE: f64 = 1e-12;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;
pub const RECONSTRUCTION_TOLERANCE_LARGE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub instances: u64,
    pub max_error: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub properties: Vec<PropertyResult>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Spectral,
    Farey,
    Decomposition,
    Lemma,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Spectral,
        Suite::Farey,
        Suite::Decomposition,
        Suite::Lemma,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Spectral => "spectral",
            Suite::Farey => "farey",
            Suite::Decomposition => "decomposition",
            Suite::Lemma => "lemma",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// Grid sizes: `Full` is the acceptance scale, `Quick` a smoke run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scale {
    Quick,
    #[default]
    Full,
}

impl Scale {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    instances: u64,
    max_error: f64,
    failures: u64,
}

impl Tally {
    fn record(&mut self, error: f64, ok: bool) {
        self.instances += 1;
        if error.is_nan() || error > self.max_error {
            self.max_error = error;
        }
        if !ok {
            self.failures += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        if other.max_error.is_nan() || other.max_error > self.max_error {
            self.max_error = other.max_error;
        }
        self.failures += other.failures;
        self
    }

    fn finish(self, property: &str) -> PropertyResult {
        PropertyResult {
            property: property.to_string(),
            instances: self.instances,
            max_error: self.max_error,
            pass: self.failures == 0 && self.instances > 0,
        }
    }
}

fn merge_all(parts: impl IntoIterator<Item = Tally>) -> Tally {
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

fn exact_gap(a: &Rational, b: &Rational) -> f64 {
    Signed::abs(&(a - b)).to_f64()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

fn even_hs(h_max: usize) -> Vec<usize> {
    (2..=h_max).step_by(2).collect()
}

fn window(h: usize) -> FejerWindow {
    FejerWindow::new(h).expect("even h")
}

fn random_rational_table(rng: &mut ChaCha8Rng, max_n: usize, support: usize) -> FunctionTable<Rational> {
    FunctionTable::from_fn(max_n, |n| {
        if n > support {
            return Rational::zero();
        }
        Rational::ratio(rng.gen_range(-60..=60), rng.gen_range(1..=12))
    })
    .expect("max_n >= 1")
}

pub fn run_suite(suite: Suite, scale: Scale, exec: Execution) -> Result<SuiteReport> {
    let properties = match suite {
        Suite::Identities => identities_suite(scale, exec)?,
        Suite::Spectral => spectral_suite(scale, exec)?,
        Suite::Farey => farey_suite(scale, exec)?,
        Suite::Decomposition => decomposition_suite(scale, exec)?,
        Suite::Lemma => lemma_suite(scale, exec)?,
    };
    Ok(SuiteReport {
        suite,
        pass: properties.iter().all(|p| p.pass),
        properties,
    })
}

pub fn identities_suite(scale: Scale, exec: Execution) -> Result<Vec<PropertyResult>> {
    Ok(vec![
        two_forms_identity(scale.pick(120, 500), scale.pick(8, 20), exec)?,
        linearity(scale.pick(80, 200), scale.pick(8, 20), 7)?,
        expansion_bridge(scale.pick(10, 30), scale.pick(8, 16), 11)?,
        periodicity(scale.pick(40, 200), scale.pick(16, 64))?,
    ])
}

pub fn spectral_suite(scale: Scale, exec: Execution) -> Result<Vec<PropertyResult>> {
    Ok(vec![
        expansion_identity(scale.pick(40, 200), scale.pick(16, 64), exec)?,
        coefficient_nonnegativity(scale.pick(100, 500), scale.pick(20, 64), exec)?,
        coefficient_scaling(scale.pick(120, 500), exec)?,
        parseval(scale.pick(200, 2000), scale.pick(40, 200), exec)?,
        square_sum_bound(scale.pick(200, 2000), scale.pick(40, 200), SQUARE_SUM_CONSTANT, exec)?,
        ramanujan_triangle(100, 13)?,
    ])
}

pub fn farey_suite(scale: Scale, exec: Execution) -> Result<Vec<PropertyResult>> {
    let q_max = scale.pick(80, 300);
    Ok(vec![
        farey_unimodularity(q_max, exec)?,
        farey_gap_law(q_max, exec)?,
        farey_partition_exhaustive(scale.pick(12, 30), exec)?,
        farey_min_gap(q_max, exec)?,
        farey_sorted_spacing(q_max, exec)?,
    ])
}

pub fn decomposition_suite(scale: Scale, exec: Execution) -> Result<Vec<PropertyResult>> {
    let grid = reconstruction_grid(scale);
    let (recon, nonneg) = reconstruction(&grid, RECONSTRUCTION_TOLERANCE, exec)?;
    let random = random_reconstruction_configs(scale.pick(10, 50), 2024)?;
    let (recon_large, nonneg_large) = reconstruction(&random, RECONSTRUCTION_TOLERANCE_LARGE, exec)?;
    let mut recon_large = recon_large;
    recon_large.property = "reconstruction_random".into();
    let mut nonneg = nonneg;
    nonneg.instances += nonneg_large.instances;
    nonneg.pass &= nonneg_large.pass;
    Ok(vec![
        recon,
        recon_large,
        nonneg,
        homogeneity(scale.pick(16, 40))?,
        ramanujan_form(scale.pick(16, 40))?,
        taylor_positivity(scale, exec)?,
        near_diagonal_positivity(scale, exec)?,
        power_cutoff_path(scale.pick(40, 100), exec)?,
    ])
}

pub fn lemma_suite(scale: Scale, exec: Execution) -> Result<Vec<PropertyResult>> {
    Ok(vec![
        far_part_bound(&reconstruction_grid(scale), FAR_PART_CONSTANT, exec)?,
        exp_sum_bound(1000, 10_000, 99)?,
        exp_sum_literal(scale.pick(200, 1000), 2_000, 100)?,
    ])
}

// identities

/// Triangular form against the literal double average, exactly, for every
/// valid center and even `h <= h_max`, on three tables of length `max_n`.
pub fn two_forms_identity(max_n: usize, h_max: usize, exec: Execution) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_rational_table(&mut rng, max_n, 10);
    let tables = vec![
        sieve_divisor_count::<Rational>(max_n)?,
        random_rational_table(&mut rng, max_n, max_n),
        dirichlet_convolve_unit(&g, max_n)?,
    ];
    let mut tally = Tally::default();
    for f in &tables {
        let prefix = PrefixSums::new(f);
        for h in even_hs(h_max).into_iter().filter(|&h| h < max_n) {
            let w = window(h);
            let rows = map_range(exec, 1..max_n - h + 1, |x| -> Result<Tally> {
                let a = prefix.fejer_short_sum(x, w)?;
                let b = averaged_double_sum(f, x, w)?;
                let mut t = Tally::default();
                t.record(exact_gap(&a, &b), a == b);
                Ok(t)
            });
            tally = tally.merge(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?));
        }
    }
    Ok(tally.finish("two_forms_identity"))
}

pub fn linearity(max_n: usize, h_max: usize, seed: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..10 {
        let f = random_rational_table(&mut rng, max_n, max_n);
        let g = random_rational_table(&mut rng, max_n, max_n);
        let alpha = Rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7));
        let beta = Rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7));
        let combo = FunctionTable::from_fn(max_n, |n| alpha.clone() * f.at(n) + beta.clone() * g.at(n))?;
        let (pf, pg, pc) = (PrefixSums::new(&f), PrefixSums::new(&g), PrefixSums::new(&combo));
        for h in even_hs(h_max) {
            let w = window(h);
            for x in (1..=max_n - h).step_by(3) {
                let lhs = pc.fejer_short_sum(x, w)?;
                let rhs = alpha.clone() * pf.fejer_short_sum(x, w)? + beta.clone() * pg.fejer_short_sum(x, w)?;
                tally.record(exact_gap(&lhs, &rhs), lhs == rhs);
            }
        }
    }
    Ok(tally.finish("linearity"))
}

/// `S_f(x) - M(x) = sum_q g(q) χ̃_q(x)` exactly for `x >= Q`, `x > h`.
pub fn expansion_bridge(q_max: usize, h_max: usize, seed: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for q in 1..=q_max {
        let len = 4 * q_max + 2 * h_max + 2;
        let g = random_rational_table(&mut rng, len, q);
        let f = dirichlet_convolve_unit(&g, len)?;
        let prefix = PrefixSums::new(&f);
        for h in even_hs(h_max) {
            let w = window(h);
            for x in q.max(h + 1)..=q.max(h + 1) + 2 * q_max {
                let lhs = prefix.fejer_short_sum(x, w)? - mean_value(&g, x, w)?;
                let mut rhs = Rational::zero();
                for d in 1..=q {
                    rhs += g.at(d) * chi_tilde_direct::<Rational>(d, x, w)?;
                }
                tally.record(exact_gap(&lhs, &rhs), lhs == rhs);
            }
        }
    }
    Ok(tally.finish("expansion_bridge"))
}

pub fn periodicity(q_max: usize, h_max: usize) -> Result<PropertyResult> {
    let mut tally = Tally::default();
    for q in 1..=q_max {
        for h in even_hs(h_max) {
            let w = window(h);
            for x in h + 1..=h + q {
                let a = chi_tilde_direct::<Rational>(q, x, w)?;
                let b = chi_tilde_direct::<Rational>(q, x + q, w)?;
                tally.record(exact_gap(&a, &b), a == b);
            }
        }
    }
    Ok(tally.finish("periodicity"))
}

// spectral

/// Expansion against direct window counts, error scaled by `1 + h`.
pub fn expansion_identity(q_max: u64, h_max: usize, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 1..q_max as usize + 1, |q| -> Result<Tally> {
        let mut t = Tally::default();
        for h in even_hs(h_max) {
            let w = window(h);
            for x in h + 1..=h + 2 * q {
                let direct = chi_tilde_direct::<f64>(q, x, w)?;
                let expanded = chi_tilde_expansion(q as u64, x as u64, w);
                let err = (direct - expanded).abs() / (1.0 + h as f64);
                t.record(err, err <= EXPANSION_TOLERANCE);
            }
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("expansion_identity"))
}

pub fn coefficient_nonnegativity(q_max: u64, h_max: usize, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 2..q_max as usize + 1, |q| -> Result<Tally> {
        let q = q as u64;
        let mut t = Tally::default();
        for h in even_hs(h_max) {
            for j in 1..=q / 2 {
                let c = fejer_coefficient(j, q, window(h))?.value;
                t.record((-c).max(0.0), c >= 0.0);
            }
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("coefficient_nonnegativity"))
}

/// `c̃_{dj, dq} = c̃_{j,q} / d` for `d q <= dq_max`.
pub fn coefficient_scaling(dq_max: u64, exec: Execution) -> Result<PropertyResult> {
    let hs = [2usize, 4, 10, 36, 64];
    let rows = map_range(exec, 2..dq_max as usize + 1, |q| -> Result<Tally> {
        let q = q as u64;
        let mut t = Tally::default();
        for &h in &hs {
            let w = window(h);
            for j in 1..=q / 2 {
                let base = fejer_coefficient(j, q, w)?.value;
                for d in 2..=dq_max / q {
                    let scaled = fejer_coefficient(d * j, d * q, w)?.value;
                    let err = relative_gap(scaled, base / d as f64);
                    t.record(err, err <= SCALING_TOLERANCE);
                }
            }
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("coefficient_scaling"))
}

/// Mean square of `χ̃_q` over a period against `(1/4) sum c̃²`.
pub fn parseval(q_max: u64, h_max: usize, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 2..q_max as usize + 1, |q| -> Result<Tally> {
        let q = q as u64;
        let mut t = Tally::default();
        for h in even_hs(h_max) {
            let w = window(h);
            let lhs = chi_tilde_mean_square(q, w)?;
            let rhs = coefficient_square_sum(q, w, false)? / 4.0;
            let err = relative_gap(lhs, rhs);
            t.record(err, err <= PARSEVAL_TOLERANCE);
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("parseval"))
}

/// `sum_j c̃²_{j,q} <= C min(1, h/q)`; the error is the fraction of the bound used.
pub fn square_sum_bound(q_max: u64, h_max: usize, c: f64, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 2..q_max as usize + 1, |q| -> Result<Tally> {
        let q = q as u64;
        let mut t = Tally::default();
        for h in even_hs(h_max) {
            let sum = coefficient_square_sum(q, window(h), false)?;
            let bound = c * (h as f64 / q as f64).min(1.0);
            let used = sum / bound;
            t.record(used, sum <= bound);
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("square_sum_bound"))
}

/// Largest `sum_j c̃²_{j,q} / min(1, h/q)` with the sum taken from the
/// brute-force mean square of `χ̃_q` (Parseval), not from the coefficients.
pub fn square_sum_calibration(q_max: u64, h_max: usize, exec: Execution) -> Result<f64> {
    let rows = map_range(exec, 2..q_max as usize + 1, |q| -> Result<f64> {
        let q = q as u64;
        let mut worst = 0f64;
        for h in even_hs(h_max) {
            let sum = 4.0 * chi_tilde_mean_square(q, window(h))?;
            worst = worst.max(sum / (h as f64 / q as f64).min(1.0));
        }
        Ok(worst)
    });
    Ok(rows
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `|R_ℓ(g*1)| <= R_ℓ(G*1)` for random `|g| <= G`, exactly.
pub fn ramanujan_triangle(trials: usize, seed: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = 40;
    let mut tally = Tally::default();
    for _ in 0..trials {
        let g = random_rational_table(&mut rng, q, q);
        let big = FunctionTable::from_fn(q, |n| Signed::abs(g.at(n)) + Rational::ratio(rng.gen_range(0..=5), 3))?;
        for ell in 1..=q {
            let r = Signed::abs(&ramanujan_coefficient(&g, ell, q)?);
            let rb = ramanujan_coefficient(&big, ell, q)?;
            let excess = if r > rb { (r.clone() - rb.clone()).to_f64() } else { 0.0 };
            tally.record(excess, r <= rb);
        }
    }
    Ok(tally.finish("ramanujan_triangle"))
}

// farey

/// `b c - a d = 1` for consecutive `a/b < c/d` of the full sequence.
pub fn farey_unimodularity(q_max: u64, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 1..q_max as usize + 1, |q| -> Result<Tally> {
        let mut t = Tally::default();
        let terms: Vec<_> = farey_full(q as u64)?.collect();
        for pair in terms.windows(2) {
            let (a, b, c, d) = (
                pair[0].num as i128,
                pair[0].den as i128,
                pair[1].num as i128,
                pair[1].den as i128,
            );
            let det = b * c - a * d;
            t.record((det - 1).abs() as f64, det == 1);
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("farey_unimodularity"))
}

/// Consecutive gap equals `1/(b d)`.
pub fn farey_gap_law(q_max: u64, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 1..q_max as usize + 1, |q| -> Result<Tally> {
        let mut t = Tally::default();
        let terms: Vec<_> = farey_full(q as u64)?.collect();
        for pair in terms.windows(2) {
            let gap = pair[1].value() - pair[0].value();
            let law = Rational64::new(1, (pair[0].den * pair[1].den) as i64);
            let err = Signed::abs(&(gap - law));
            t.record(*err.numer() as f64 / *err.denom() as f64, gap == law);
        }
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("farey_gap_law"))
}

/// NEAR and FAR cover every pair with `λ > μ` exactly once, and NEAR
/// matches `key <= 1/A` decided in exact rationals.
pub fn farey_partition_exhaustive(q_max: u64, exec: Execution) -> Result<PropertyResult> {
    let mut tally = Tally::default();
    let spacings = [1.0, 3.5, 10.0, 77.0, 1e3, 1e6, f64::INFINITY];
    for q in 2..=q_max {
        let seq = farey_enumerate(q)?;
        let fr = seq.fractions();
        for key in [PairKey::Difference, PairKey::WrappedSum] {
            for &a in &spacings {
                let part = spaced_pair_partition_with(&seq, &seq, a, key, exec)?;
                let mut seen = vec![0u8; fr.len() * fr.len()];
                let mut ok = true;
                for (list, near) in [(&part.near, true), (&part.far, false)] {
                    for &(i, k) in list {
                        seen[i * fr.len() + k] += 1;
                        let (num, den) = key.of(fr[i], fr[k]);
                        let expect = if a.is_infinite() {
                            num == 0
                        } else {
                            let inv = BigRational::from_float(a).expect("finite").recip();
                            BigRational::new(num.into(), den.into()) <= inv
                        };
                        ok &= expect == near;
                    }
                }
                for i in 0..fr.len() {
                    for k in 0..fr.len() {
                        let want = (fr[i] > fr[k]) as u8;
                        ok &= seen[i * fr.len() + k] == want;
                    }
                }
                tally.record(if ok { 0.0 } else { 1.0 }, ok);
            }
        }
    }
    Ok(tally.finish("farey_partition_exhaustive"))
}

pub fn farey_min_gap(q_max: u64, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 3..q_max as usize + 1, |q| -> Result<Tally> {
        let mut t = Tally::default();
        let gap = min_gap(&farey_enumerate(q as u64)?)?;
        let floor = Rational64::new(1, (q * q) as i64);
        let short = if gap < floor { floor - gap } else { Rational64::zero() };
        t.record(*short.numer() as f64 / *short.denom() as f64, gap >= floor);
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("farey_min_gap"))
}

/// `v[n] - v[m] >= (n - m) * min_gap` for every `n > m`. Rewritten as
/// `v[n] - n g >= max_{m < n} (v[m] - m g)`, which checks all pairs in one pass.
pub fn farey_sorted_spacing(q_max: u64, exec: Execution) -> Result<PropertyResult> {
    let rows = map_range(exec, 3..q_max as usize + 1, |q| -> Result<Tally> {
        let mut t = Tally::default();
        let seq = farey_enumerate(q as u64)?;
        let gap = min_gap(&seq)?;
        let shifted: Vec<Rational64> = seq
            .fractions()
            .iter()
            .enumerate()
            .map(|(n, fr)| fr.value() - gap * Rational64::from_integer(n as i64))
            .collect();
        let mut best = shifted[0];
        let mut ok = true;
        for &s in &shifted[1..] {
            ok &= s >= best;
            best = best.max(s);
        }
        t.record(if ok { 0.0 } else { 1.0 }, ok);
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("farey_sorted_spacing"))
}

// decomposition

const GRID_PRESETS: [GSpec; 4] = [GSpec::Mobius, GSpec::MobiusSquared, GSpec::Unit, GSpec::Random(7)];

/// Fixed-cutoff configs with `N <= 200`, `Q <= 12`, even `h <= 8`, `4h <= N`.
pub fn reconstruction_grid(scale: Scale) -> Vec<IntegralConfig> {
    let n_step = scale.pick(23, 1);
    let mut grid = Vec::new();
    for g in GRID_PRESETS {
        for h in [2, 4, 6, 8] {
            for n in (4 * h..=200).step_by(n_step) {
                for q in (1..=12).filter(|&q| q <= n + h) {
                    grid.push(IntegralConfig::new(n, h, SupportCutoff::Fixed(q), g).expect("grid config"));
                }
            }
        }
    }
    grid
}

/// Seeded fixed-cutoff configs beyond the exhaustive grid.
pub fn random_reconstruction_configs(count: usize, seed: u64) -> Result<Vec<IntegralConfig>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(201..=3000);
            let h = 2 * rng.gen_range(1..=(n / 8).min(20));
            let q = rng.gen_range(13..=48);
            let g = match rng.gen_range(0..4) {
                0 => GSpec::Mobius,
                1 => GSpec::MobiusSquared,
                2 => GSpec::Unit,
                _ => GSpec::Random(rng.gen()),
            };
            IntegralConfig::new(n, h, SupportCutoff::Fixed(q), g)
        })
        .collect()
}

fn sequential_options() -> DecompositionOptions {
    DecompositionOptions {
        exec: Execution::Sequential,
        ..DecompositionOptions::default()
    }
}

/// Decomposition total against the direct sweep, `|gap| <= tol (1 + direct)`,
/// plus nonnegativity of `direct` and of the diagonal on the same configs.
pub fn reconstruction(
    configs: &[IntegralConfig],
    tol: f64,
    exec: Execution,
) -> Result<(PropertyResult, PropertyResult)> {
    let opts = sequential_options();
    let rows = map_slice(exec, configs, |cfg| -> Result<(Tally, Tally)> {
        let report = selberg_integral_decomposed_with(cfg, &opts)?;
        let mut recon = Tally::default();
        let err = report.abs_gap / (1.0 + report.direct.abs());
        recon.record(err, err <= tol);
        let mut nonneg = Tally::default();
        let worst = (-report.direct).max(-report.diagonal).max(0.0);
        nonneg.record(worst, report.direct >= 0.0 && report.diagonal >= 0.0);
        Ok((recon, nonneg))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let recon = merge_all(rows.iter().map(|r| r.0)).finish("reconstruction");
    let nonneg = merge_all(rows.iter().map(|r| r.1)).finish("nonnegativity");
    Ok((recon, nonneg))
}

/// `J(c g) = c² J(g)` exactly.
pub fn homogeneity(n_max: usize) -> Result<PropertyResult> {
    let mut tally = Tally::default();
    let scalars = [
        Rational::ratio(2, 1),
        Rational::ratio(-3, 1),
        Rational::ratio(1, 2),
        Rational::ratio(-5, 7),
    ];
    for g_spec in GRID_PRESETS {
        for n in (8..=n_max).step_by(4) {
            for q in [3, 5, 8] {
                let cutoff = SupportCutoff::Fixed(q);
                let w = window(2);
                let g = g_spec.table::<Rational>(q)?;
                let base: Rational = selberg_integral(&g, n, w, cutoff, Execution::Sequential)?;
                for c in &scalars {
                    let scaled: Rational = selberg_integral(&g.scaled(c), n, w, cutoff, Execution::Sequential)?;
                    let want = c.clone() * c.clone() * base.clone();
                    tally.record(exact_gap(&scaled, &want), scaled == want);
                }
            }
        }
    }
    Ok(tally.finish("homogeneity"))
}

/// Direct integral against `sum_x (sum_{q <= Q} g(q) χ̃_q(x))²`, exactly.
pub fn ramanujan_form(n_max: usize) -> Result<PropertyResult> {
    let mut tally = Tally::default();
    for g_spec in GRID_PRESETS {
        for n in (8..=n_max).step_by(4) {
            for h in [2, 4, 6, 8].into_iter().filter(|h| 4 * h <= n) {
                for q in [2, 6, 12].into_iter().filter(|&q| q <= n + h) {
                    let w = window(h);
                    let g = g_spec.table::<Rational>(q)?;
                    let direct: Rational = selberg_integral(&g, n, w, SupportCutoff::Fixed(q), Execution::Sequential)?;
                    let mut form = Rational::zero();
                    for x in n + 1..=2 * n {
                        let mut inner = Rational::zero();
                        for d in 1..=q {
                            inner += g.at(d) * chi_tilde_direct::<Rational>(d, x, w)?;
                        }
                        form += inner.clone() * inner;
                    }
                    tally.record(exact_gap(&direct, &form), direct == form);
                }
            }
        }
    }
    Ok(tally.finish("ramanujan_form"))
}

/// With `A = 8N`, each NEAR key `κ` has `N κ <= 1/8`, and the literal sum
/// `sum_{x ∼ N} cos(2π κ x)` must be positive.
pub fn taylor_positivity(scale: Scale, exec: Execution) -> Result<PropertyResult> {
    let ns: Vec<u64> = scale.pick(vec![8, 32], vec![8, 16, 32, 64, 128]);
    let qs: Vec<u64> = scale.pick(vec![12, 24], vec![10, 20, 30, 40]);
    let mut tally = Tally::default();
    for &n in &ns {
        for &q in &qs {
            let seq = farey_enumerate(q)?;
            let fr = seq.fractions();
            for key in [PairKey::Difference, PairKey::WrappedSum] {
                let part = spaced_pair_partition_with(&seq, &seq, 8.0 * n as f64, key, exec)?;
                let rows = map_slice(exec, &part.near, |&(i, k)| {
                    let (num, den) = key.of(fr[i], fr[k]);
                    let kappa = num as f64 / den as f64;
                    let terms: Vec<f64> = (n + 1..=2 * n)
                        .map(|x| (2.0 * std::f64::consts::PI * kappa * x as f64).cos())
                        .collect();
                    let sum = crate::pairwise_sum(&terms);
                    let mut t = Tally::default();
                    t.record((-sum).max(0.0), sum > 0.0 && n as f64 * kappa <= 0.125);
                    t
                });
                tally = tally.merge(merge_all(rows));
            }
        }
    }
    Ok(tally.finish("taylor_positivity"))
}

/// With `A = 8N`, `near_delta + near_sigma + diagonal >= 0`.
pub fn near_diagonal_positivity(scale: Scale, exec: Execution) -> Result<PropertyResult> {
    let mut configs = Vec::new();
    for g in GRID_PRESETS {
        for h in [2, 4, 6, 8] {
            for n in (4 * h..=200).step_by(scale.pick(17, 1)) {
                for q in [12, 20, 30, 40].into_iter().filter(|&q| q <= n + h) {
                    configs.push(IntegralConfig::new(n, h, SupportCutoff::Fixed(q), g)?.with_spacing(8.0 * n as f64)?);
                }
            }
        }
    }
    let opts = sequential_options();
    let rows = map_slice(exec, &configs, |cfg| -> Result<Tally> {
        let r = selberg_integral_decomposed_with(cfg, &opts)?;
        let sum = r.near_delta + r.near_sigma + r.diagonal;
        let mut t = Tally::default();
        t.record((-sum).max(0.0), sum >= -1e-9 * (1.0 + r.diagonal));
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("near_diagonal_positivity"))
}

/// Power cutoff `θ = 1/2`: the sweep against the per-center term-by-term
/// reference, exactly, for `N <= n_max`.
pub fn power_cutoff_path(n_max: usize, exec: Execution) -> Result<PropertyResult> {
    let cutoff = SupportCutoff::Power(0.5);
    let mut configs = Vec::new();
    for g in GRID_PRESETS {
        for n in 8..=n_max {
            for h in [2, 4, 6, 8].into_iter().filter(|h| 4 * h <= n) {
                configs.push((g, n, h));
            }
        }
    }
    let rows = map_slice(exec, &configs, |&(g_spec, n, h)| -> Result<Tally> {
        let w = window(h);
        let g = g_spec.table::<Rational>(2 * n + h)?;
        let sweep: Rational = selberg_integral(&g, n, w, cutoff, Execution::Sequential)?;
        let naive: Rational = selberg_integral_naive(&g, n, w, cutoff)?;
        let mut t = Tally::default();
        t.record(exact_gap(&sweep, &naive), sweep == naive);
        Ok(t)
    });
    Ok(merge_all(rows.into_iter().collect::<Result<Vec<_>>>()?).finish("power_cutoff_path"))
}

// far part and exponential sums

fn far_ratios(configs: &[IntegralConfig], exec: Execution) -> Result<Vec<f64>> {
    let opts = sequential_options();
    let rows = map_slice(exec, configs, |cfg| -> Result<Vec<f64>> {
        let n = cfg.n as f64;
        [n, default_spacing(cfg.n)]
            .into_iter()
            .map(|a| Ok(far_part_bound_check_with(&cfg.clone().with_spacing(a)?, &opts)?.ratio_to_ah))
            .collect()
    });
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Largest `|far parts| / (A h)` over `configs` with `A` in `{N, N ln N}`.
pub fn far_part_calibration(configs: &[IntegralConfig], exec: Execution) -> Result<f64> {
    Ok(far_ratios(configs, exec)?.into_iter().fold(0.0, f64::max))
}

/// `|far parts| <= C_far A h` with `A` in `{N, N ln N}`; the error is the
/// fraction of the bound used.
pub fn far_part_bound(configs: &[IntegralConfig], c_far: f64, exec: Execution) -> Result<PropertyResult> {
    let mut tally = Tally::default();
    for ratio in far_ratios(configs, exec)? {
        tally.record(ratio / c_far, ratio <= c_far);
    }
    Ok(tally.finish("far_part_bound"))
}

fn distance_to_integers(alpha: f64) -> f64 {
    let r = alpha - alpha.floor();
    r.min(1.0 - r)
}

/// `|sum_{x ∼ N} e(αx)| <= min(N, 1/(2‖α‖))` via the closed form, for seeded
/// random `α` and `N <= n_max`.
pub fn exp_sum_bound(trials: usize, n_max: u64, seed: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..trials {
        let alpha: f64 = rng.gen_range(-4.0..4.0);
        let n = rng.gen_range(1..=n_max);
        let value = exp_sum_closed_form(alpha, n).norm();
        let norm = distance_to_integers(alpha);
        let bound = if norm == 0.0 {
            n as f64
        } else {
            (n as f64).min(0.5 / norm)
        };
        // closed-form rounding only
        let slack = 1e-9 * bound;
        tally.record(value / bound, value <= bound + slack);
    }
    Ok(tally.finish("exp_sum_bound"))
}

/// Closed form against the literal term-by-term sum.
pub fn exp_sum_literal(trials: usize, n_max: u64, seed: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..trials {
        let alpha: f64 = rng.gen_range(-2.0..2.0);
        let n = rng.gen_range(1..=n_max);
        let closed = exp_sum_closed_form(alpha, n);
        let (mut re, mut im) = (0.0, 0.0);
        for x in n + 1..=2 * n {
            let t = 2.0 * std::f64::consts::PI * (alpha * x as f64).rem_euclid(1.0);
            re += t.cos();
            im += t.sin();
        }
        let err = ((closed.re - re).powi(2) + (closed.im - im).powi(2)).sqrt() / (1.0 + n as f64);
        tally.record(err, err <= 1e-9);
    }
    Ok(tally.finish("exp_sum_literal"))
}

/// Majorant ratio for `g = μ` cut at `Q = ⌊N^0.3⌋` against `G = μ²`, with
/// `h = even⌊N^0.4⌋`, at `N = 2^k` for each `k`.
pub fn growth_rows(exponents: &[u32], exec: Execution) -> Result<Vec<MajorantReport>> {
    exponents
        .iter()
        .map(|&k| {
            let n = 1usize << k;
            let q = SupportCutoff::power_bound(0.3, n);
            let h = even_floor((n as f64).powf(0.4));
            let cfg = IntegralConfig::new(n, h, SupportCutoff::Fixed(q), GSpec::Mobius)?;
            majorant_compare_with(&cfg, GSpec::MobiusSquared, exec)
        })
        .collect()
}

/// `ratio(N) <= ratio(N0) (N/N0)^0.2` against the first row; the error is
/// the fraction of the allowance used.
pub fn growth_check(rows: &[MajorantReport]) -> PropertyResult {
    let mut tally = Tally::default();
    if let Some(first) = rows.first() {
        for row in rows {
            let allowed = first.ratio * (row.n as f64 / first.n as f64).powf(GROWTH_EXPONENT);
            tally.record(row.ratio / allowed, row.ratio <= allowed);
        }
    }
    tally.finish("majorant_growth")
}
