// SPDX-License-Identifier: MIT OR Apache-2.0

//! The modified Selberg integral, computed by a direct sweep over the
//! centers `x ∈ (N, 2N]` and by its spectral decomposition.
//!
//! For `f = g * 1` with `supp g ⊂ [1, Q]`, `Q <= N + h`, the deviation of the
//! short sum from its mean is
//!
//! ```text
//! S(x) = sum_{λ = j/ℓ} R_ℓ(f) F̃_h(λ) cos(2π λ x)
//! ```
//!
//! over the reduced fractions `λ ∈ (0, 1/2]` with `ℓ <= Q`. Squaring and
//! summing over `x` gives the diagonal `sum a_λ² sum_x cos²(2πλx)` plus, for
//! each pair `λ > μ`, the term `a_λ a_μ (C(δ) + C(σ))` with `δ = λ - μ`,
//! `σ = ‖λ + μ‖` and `C(α) = sum_x cos(2π α x)`. Each off-diagonal term
//! carries the product once; the factor 2 of `2 cos A cos B` is absorbed by
//! the two cosines.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::integer::gcd;
use num::Zero;
use serde::Serialize;

use crate::arith::{dirichlet_convolve_unit, restrict, FloatTable, FunctionTable, GSpec, SupportCutoff};
use crate::error::{Error, Result};
use crate::farey::{farey_enumerate, PairKey, SpacingThreshold};
use crate::par::{map_range, Execution};
use crate::scalar::{pairwise_sum, Scalar};
use crate::short_sums::{window_multiple_weight, FejerWindow, HarmonicPrefix, PrefixSums};
use crate::spectral::{coefficient_square_sum, fejer_kernel_at, RamanujanTable};

/// Decomposition refuses more oriented fraction pairs than this unless forced.
pub const DEFAULT_PAIR_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralConfig {
    pub n: usize,
    pub window: FejerWindow,
    pub cutoff: SupportCutoff,
    /// Spacing parameter `A`; `N ln N` when unset.
    pub spacing: Option<f64>,
    pub g: GSpec,
}

impl IntegralConfig {
    pub fn new(n: usize, h: usize, cutoff: SupportCutoff, g: GSpec) -> Result<Self> {
        let cfg = IntegralConfig {
            n,
            window: FejerWindow::new(h)?,
            cutoff,
            spacing: None,
            g,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_spacing(mut self, a: f64) -> Result<Self> {
        SpacingThreshold::new(a)?;
        self.spacing = Some(a);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.h();
        if self.n == 0 || 4 * h > self.n {
            return Err(Error::domain(format!("need h <= N/4, got N = {}, h = {h}", self.n)));
        }
        self.cutoff.validate()?;
        if let SupportCutoff::Fixed(q) = self.cutoff {
            if q > self.n + h {
                return Err(Error::domain(format!(
                    "need Q <= N + h, got Q = {q}, N + h = {}",
                    self.n + h
                )));
            }
        }
        if let Some(a) = self.spacing {
            SpacingThreshold::new(a)?;
        }
        Ok(())
    }

    pub fn h(&self) -> usize {
        self.window.h()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing.unwrap_or_else(|| default_spacing(self.n))
    }

    /// Largest support bound used by any center, `Q(2N + h)` in power mode.
    pub fn support_bound(&self) -> usize {
        self.cutoff.bound(2 * self.n, self.h())
    }

    /// Table length `2N + h` the sweep reads.
    pub fn table_len(&self) -> usize {
        2 * self.n + self.h()
    }

    fn fixed_q(&self) -> Result<usize> {
        match self.cutoff {
            SupportCutoff::Fixed(q) => Ok(q),
            SupportCutoff::Power(_) => Err(Error::Precondition(
                "the spectral decomposition needs a fixed support cutoff".into(),
            )),
        }
    }
}

/// `A = N ln N`.
pub fn default_spacing(n: usize) -> f64 {
    let n = n as f64;
    n * n.ln()
}

/// Deviations `S(x) - M(x, h)` for `x = N+1 ..= 2N`.
pub fn deviations<S: Scalar>(
    g: &FunctionTable<S>,
    n: usize,
    w: FejerWindow,
    cutoff: SupportCutoff,
    exec: Execution,
) -> Result<Vec<S>> {
    cutoff.validate()?;
    let h = w.h();
    let len = 2 * n + h;
    let top = cutoff.bound(2 * n, h).min(len);
    if g.max_n() < top {
        return Err(Error::range(format!(
            "g is tabulated on [1, {}] but the cutoff reaches {top}",
            g.max_n()
        )));
    }
    let g_full = restrict(&g.resized(len)?, top);
    let base_q = cutoff.bound(n + 1, h).min(top);
    let f_base = dirichlet_convolve_unit(&restrict(&g_full, base_q), len)?;
    let prefix = PrefixSums::new(&f_base);
    let harmonic = HarmonicPrefix::new(&g_full);
    let hh = S::from_i64(h as i64);

    let dev = |x: usize| -> Result<S> {
        let cut = cutoff.bound(x, h).min(top);
        let mut short = prefix.fejer_short_sum(x, w)?;
        // power mode: divisors admitted after the first center
        for q in base_q + 1..=cut {
            let gq = g_full.at(q);
            if !gq.is_zero() {
                short = short + gq.clone() * window_multiple_weight::<S>(q, x, w);
            }
        }
        Ok(short - hh.clone() * harmonic.upto(cut.min(x + h)).clone())
    };
    map_range(exec, n + 1..2 * n + 1, dev).into_iter().collect()
}

/// Direct sweep of the integral for an explicit `g`.
pub fn selberg_integral<S: Scalar>(
    g: &FunctionTable<S>,
    n: usize,
    w: FejerWindow,
    cutoff: SupportCutoff,
    exec: Execution,
) -> Result<S> {
    let squares: Vec<S> = deviations(g, n, w, cutoff, exec)?
        .into_iter()
        .map(|d| d.clone() * d)
        .collect();
    Ok(pairwise_sum(&squares))
}

/// Reference O(N h) sweep: every short sum and every mean evaluated term by term.
pub fn selberg_integral_naive<S: Scalar>(
    g: &FunctionTable<S>,
    n: usize,
    w: FejerWindow,
    cutoff: SupportCutoff,
) -> Result<S> {
    cutoff.validate()?;
    let h = w.h();
    let len = 2 * n + h;
    let g_full = g.resized(len)?;
    let mut squares = Vec::with_capacity(n);
    for x in n + 1..=2 * n {
        let cut = restrict(&g_full, cutoff.bound(x, h));
        let mut dev = S::zero();
        for q in 1..=cut.support_max() {
            let gq = cut.at(q);
            if gq.is_zero() {
                continue;
            }
            dev = dev + gq.clone() * window_multiple_weight::<S>(q, x, w);
            if q <= x + h {
                dev = dev - S::from_i64(h as i64) * gq.clone() / S::from_i64(q as i64);
            }
        }
        squares.push(dev.clone() * dev);
    }
    Ok(pairwise_sum(&squares))
}

pub fn selberg_integral_direct(cfg: &IntegralConfig) -> Result<f64> {
    selberg_integral_direct_with(cfg, Execution::default())
}

pub fn selberg_integral_direct_with<S: Scalar>(cfg: &IntegralConfig, exec: Execution) -> Result<S> {
    cfg.validate()?;
    let g = cfg.g.table::<S>(cfg.support_bound().min(cfg.table_len()))?;
    selberg_integral(&g, cfg.n, cfg.window, cfg.cutoff, exec)
}

/// `sum_{x=N+1}^{2N} e(αx)` by the geometric closed form.
pub fn exp_sum_closed_form(alpha: f64, n: u64) -> Complex64 {
    let r = alpha - alpha.floor();
    if r == 0.0 || n == 0 {
        return Complex64::new(n as f64, 0.0);
    }
    let nf = n as f64;
    let phase = (r * (3.0 * nf + 1.0)).rem_euclid(2.0);
    let ratio = (PI * (r * nf).rem_euclid(2.0)).sin() / (PI * r).sin();
    Complex64::from_polar(ratio, PI * phase)
}

/// `sum_{x=N+1}^{2N} e(p x / q)` with every phase reduced exactly.
pub fn exp_sum_rational(p: u64, q: u64, n: u64) -> Complex64 {
    debug_assert!(q > 0);
    let p = p % q;
    if p == 0 {
        return Complex64::new(n as f64, 0.0);
    }
    let two_q = 2 * q as u128;
    let phase = (p as u128 * (3 * n as u128 + 1)) % two_q;
    let top = (p as u128 * n as u128) % two_q;
    let angle = |k: u128| PI * k as f64 / q as f64;
    let ratio = angle(top).sin() / angle(p as u128).sin();
    Complex64::from_polar(ratio, angle(phase))
}

fn cos_sum(p: u64, q: u64, n: u64) -> f64 {
    exp_sum_rational(p, q, n).re
}

/// `sum_{x ∼ N} cos²(2π j x / ℓ)`.
fn cos_squared_sum(j: u64, ell: u64, n: u64) -> f64 {
    (n as f64 + cos_sum(2 * j, ell, n)) / 2.0
}

/// Reduced fractions in `(0, 1/2]` with denominator `<= Q`, each with its
/// amplitude `a = R_ℓ F̃_h(j/ℓ)`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub fractions: Vec<crate::farey::FareyFraction>,
    pub amplitudes: Vec<f64>,
}

impl Spectrum {
    pub fn new(g: &FloatTable, q: usize, w: FejerWindow) -> Result<Self> {
        if q < 2 {
            return Ok(Spectrum {
                fractions: Vec::new(),
                amplitudes: Vec::new(),
            });
        }
        let g_cut = restrict(&g.resized(q)?, q);
        let r = RamanujanTable::new(&g_cut, q)?;
        let seq = farey_enumerate(q as u64)?;
        let fractions = seq.fractions().to_vec();
        let amplitudes = fractions
            .iter()
            .map(|fr| r.get(fr.den as usize) * fejer_kernel_at(fr.num, fr.den, w))
            .collect();
        Ok(Spectrum { fractions, amplitudes })
    }

    pub fn for_config(cfg: &IntegralConfig) -> Result<Self> {
        let q = cfg.fixed_q()?;
        let g = cfg.g.table::<f64>(q)?;
        Spectrum::new(&g, q, cfg.window)
    }

    /// Oriented pairs `λ > μ`.
    pub fn pair_count(&self) -> u64 {
        let k = self.fractions.len() as u64;
        k * k.saturating_sub(1) / 2
    }

    /// `S(x)` evaluated from the expansion.
    pub fn evaluate(&self, x: u64) -> f64 {
        let terms: Vec<f64> = self
            .fractions
            .iter()
            .zip(&self.amplitudes)
            .map(|(fr, a)| {
                a * crate::spectral::cos_two_pi_frac((x as u128 * fr.num as u128 % fr.den as u128) as u64, fr.den)
            })
            .collect();
        pairwise_sum(&terms)
    }
}

pub fn diagonal_term(cfg: &IntegralConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(diagonal_of(&Spectrum::for_config(cfg)?, cfg.n as u64))
}

fn diagonal_of(spec: &Spectrum, n: u64) -> f64 {
    let terms: Vec<f64> = spec
        .fractions
        .iter()
        .zip(&spec.amplitudes)
        .map(|(fr, a)| a * a * cos_squared_sum(fr.num, fr.den, n))
        .collect();
    pairwise_sum(&terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub diagonal: f64,
    pub near_delta: f64,
    pub near_sigma: f64,
    pub far_delta: f64,
    pub far_sigma: f64,
    pub total: f64,
    pub direct: f64,
    pub abs_gap: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct DecompositionOptions {
    pub pair_budget: u64,
    pub force: bool,
    pub exec: Execution,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions {
            pair_budget: DEFAULT_PAIR_BUDGET,
            force: false,
            exec: Execution::default(),
        }
    }
}

/// Off-diagonal sums split by the spacing threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct OffDiagonal {
    near_delta: f64,
    near_sigma: f64,
    far_delta: f64,
    far_sigma: f64,
}

fn off_diagonal(spec: &Spectrum, n: u64, threshold: SpacingThreshold, exec: Execution) -> OffDiagonal {
    let fr = &spec.fractions;
    let amp = &spec.amplitudes;
    let rows: Vec<[f64; 4]> = map_range(exec, 0..fr.len(), |i| {
        let mut parts: [Vec<f64>; 4] = Default::default();
        if amp[i] != 0.0 {
            for k in 0..i {
                if amp[k] == 0.0 {
                    continue;
                }
                let coeff = amp[i] * amp[k];
                let (dn, dd) = PairKey::Difference.of(fr[i], fr[k]);
                let (sn, sd) = PairKey::WrappedSum.of(fr[i], fr[k]);
                let d_slot = if threshold.is_near(dn, dd) { 0 } else { 2 };
                let s_slot = if threshold.is_near(sn, sd) { 1 } else { 3 };
                parts[d_slot].push(coeff * cos_sum(dn, dd, n));
                parts[s_slot].push(coeff * cos_sum(sn, sd, n));
            }
        }
        parts.each_ref().map(|p| pairwise_sum(p))
    });
    let column = |c: usize| pairwise_sum(&rows.iter().map(|r| r[c]).collect::<Vec<_>>());
    OffDiagonal {
        near_delta: column(0),
        near_sigma: column(1),
        far_delta: column(2),
        far_sigma: column(3),
    }
}

fn check_budget(spec: &Spectrum, opts: &DecompositionOptions) -> Result<()> {
    let pairs = spec.pair_count();
    if pairs > opts.pair_budget && !opts.force {
        return Err(Error::Resource(format!(
            "{pairs} fraction pairs exceed the budget of {}",
            opts.pair_budget
        )));
    }
    Ok(())
}

pub fn selberg_integral_decomposed(cfg: &IntegralConfig) -> Result<DecompositionReport> {
    selberg_integral_decomposed_with(cfg, &DecompositionOptions::default())
}

pub fn selberg_integral_decomposed_with(
    cfg: &IntegralConfig,
    opts: &DecompositionOptions,
) -> Result<DecompositionReport> {
    cfg.validate()?;
    let spec = Spectrum::for_config(cfg)?;
    check_budget(&spec, opts)?;
    let threshold = SpacingThreshold::new(cfg.spacing())?;
    let n = cfg.n as u64;
    let diagonal = diagonal_of(&spec, n);
    let off = off_diagonal(&spec, n, threshold, opts.exec);
    let total = pairwise_sum(&[diagonal, off.near_delta, off.near_sigma, off.far_delta, off.far_sigma]);
    let direct: f64 = selberg_integral_direct_with(cfg, opts.exec)?;
    Ok(DecompositionReport {
        diagonal,
        near_delta: off.near_delta,
        near_sigma: off.near_sigma,
        far_delta: off.far_delta,
        far_sigma: off.far_sigma,
        total,
        direct,
        abs_gap: (total - direct).abs(),
    })
}

/// Size of the far (well-spaced) part against the `A h` scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FarPartReport {
    pub spacing: f64,
    pub far_delta: f64,
    pub far_sigma: f64,
    pub far_abs: f64,
    pub a_h: f64,
    pub ratio_to_ah: f64,
    /// `A * sum_{1<ℓ<=Q} sum*_{j<ℓ} c̃²_{j,ℓ} * H_K`, `H_K` the harmonic number
    /// of the count `K` of reduced fractions in `(0, 1)`.
    pub large_sieve_majorant: f64,
}

pub fn far_part_bound_check(cfg: &IntegralConfig) -> Result<FarPartReport> {
    far_part_bound_check_with(cfg, &DecompositionOptions::default())
}

pub fn far_part_bound_check_with(cfg: &IntegralConfig, opts: &DecompositionOptions) -> Result<FarPartReport> {
    cfg.validate()?;
    let q = cfg.fixed_q()?;
    let spec = Spectrum::for_config(cfg)?;
    check_budget(&spec, opts)?;
    let a = cfg.spacing();
    let threshold = SpacingThreshold::new(a)?;
    let off = off_diagonal(&spec, cfg.n as u64, threshold, opts.exec);
    let far_abs = off.far_delta.abs() + off.far_sigma.abs();
    let a_h = a * cfg.h() as f64;

    let mut squares = Vec::new();
    let mut count = 0u64;
    for ell in 2..=q as u64 {
        squares.push(coefficient_square_sum(ell, cfg.window, true)?);
        count += (1..ell).filter(|&j| gcd(j, ell) == 1).count() as u64;
    }
    let harmonic: f64 = (1..=count.max(1)).map(|k| 1.0 / k as f64).sum();
    Ok(FarPartReport {
        spacing: a,
        far_delta: off.far_delta,
        far_sigma: off.far_sigma,
        far_abs,
        a_h,
        ratio_to_ah: far_abs / a_h,
        large_sieve_majorant: a * pairwise_sum(&squares) * harmonic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorantReport {
    pub n: usize,
    pub h: usize,
    pub q: usize,
    pub g: String,
    #[serde(rename = "G")]
    pub big_g: String,
    pub j_f: f64,
    #[serde(rename = "j_F")]
    pub j_big_f: f64,
    pub n_h: f64,
    pub ratio: f64,
}

/// Checks `|g(n)| <= G(n)` wherever both are nonzero, exactly.
pub fn check_majorant(g: GSpec, big_g: GSpec, upto: usize) -> Result<()> {
    let small = g.ratios(upto)?;
    let big = big_g.ratios(upto)?;
    for (k, (a, b)) in small.iter().zip(&big).enumerate() {
        if !a.is_zero() && !b.is_zero() && num::abs(*a) > *b {
            return Err(Error::Precondition(format!(
                "|g({n})| = {} exceeds G({n}) = {b}",
                num::abs(*a),
                n = k + 1
            )));
        }
    }
    Ok(())
}

pub fn majorant_compare(cfg: &IntegralConfig, big_g: GSpec) -> Result<MajorantReport> {
    majorant_compare_with(cfg, big_g, Execution::default())
}

pub fn majorant_compare_with(cfg: &IntegralConfig, big_g: GSpec, exec: Execution) -> Result<MajorantReport> {
    cfg.validate()?;
    let bound = cfg.support_bound().min(cfg.table_len());
    check_majorant(cfg.g, big_g, bound)?;
    let j_f: f64 = selberg_integral_direct_with(cfg, exec)?;
    let big_cfg = IntegralConfig {
        g: big_g,
        ..cfg.clone()
    };
    let j_big_f: f64 = selberg_integral_direct_with(&big_cfg, exec)?;
    let n_h = (cfg.n * cfg.h()) as f64;
    Ok(MajorantReport {
        n: cfg.n,
        h: cfg.h(),
        q: bound,
        g: cfg.g.to_string(),
        big_g: big_g.to_string(),
        j_f,
        j_big_f,
        n_h,
        ratio: j_f / (j_big_f + n_h),
    })
}

/// Largest even integer `<= v`, at least 2.
pub fn even_floor(v: f64) -> usize {
    let k = v.floor().max(0.0) as usize;
    (k - k % 2).max(2)
}
