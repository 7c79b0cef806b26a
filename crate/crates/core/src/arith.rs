// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sieved arithmetic functions, convolution with the unit function and
//! Möbius inversion.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num::rational::Rational64;
use num::{BigInt, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Values of an arithmetic function on `[1, max_n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTable<S = Rational> {
    // values[k] holds the value at n = k + 1
    values: Vec<S>,
}

pub type ExactTable = FunctionTable<Rational>;
pub type FloatTable = FunctionTable<f64>;

impl<S: Scalar> FunctionTable<S> {
    pub fn from_values(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("function table needs max_n >= 1"));
        }
        Ok(FunctionTable { values })
    }

    pub fn from_fn(max_n: usize, mut f: impl FnMut(usize) -> S) -> Result<Self> {
        check_max_n(max_n)?;
        Ok(FunctionTable {
            values: (1..=max_n).map(&mut f).collect(),
        })
    }

    pub fn zeros(max_n: usize) -> Result<Self> {
        Self::from_fn(max_n, |_| S::zero())
    }

    pub fn max_n(&self) -> usize {
        self.values.len()
    }

    /// Value at `n`; panics unless `1 <= n <= max_n`.
    pub fn at(&self, n: usize) -> &S {
        &self.values[n - 1]
    }

    /// Value at `n`, or `None` outside `[1, max_n]`.
    pub fn get(&self, n: usize) -> Option<&S> {
        n.checked_sub(1).and_then(|k| self.values.get(k))
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Binary64 image of every value.
    pub fn float_view(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64).collect()
    }

    pub fn to_float(&self) -> FloatTable {
        FunctionTable {
            values: self.float_view(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FunctionTable<T> {
        FunctionTable {
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, c: &S) -> Self {
        self.map(|v| c.clone() * v.clone())
    }

    /// Same function on `[1, max_n]`, truncated or padded with zeros.
    pub fn resized(&self, max_n: usize) -> Result<Self> {
        check_max_n(max_n)?;
        let mut values = self.values.clone();
        values.resize(max_n, S::zero());
        Ok(FunctionTable { values })
    }

    /// Largest `n` with a nonzero value, or 0 for the zero function.
    pub fn support_max(&self) -> usize {
        self.values.iter().rposition(|v| !v.is_zero()).map_or(0, |k| k + 1)
    }

    pub fn is_zero_beyond(&self, q: usize) -> bool {
        self.support_max() <= q
    }
}

fn check_max_n(max_n: usize) -> Result<()> {
    if max_n == 0 {
        Err(Error::domain("max_n must be at least 1"))
    } else {
        Ok(())
    }
}

/// Least prime factor of every `n <= max_n` (0 at indices 0 and 1).
pub fn least_prime_factors(max_n: usize) -> Vec<u32> {
    let mut lpf = vec![0u32; max_n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=max_n {
        if lpf[i] == 0 {
            lpf[i] = i as u32;
            primes.push(i as u32);
        }
        let li = lpf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > li || m > max_n {
                break;
            }
            lpf[m] = p;
        }
    }
    lpf
}

/// μ(n) for `1 <= n <= max_n` as small integers, indexed from 0 (= n = 1).
pub fn mobius_values(max_n: usize) -> Result<Vec<i8>> {
    check_max_n(max_n)?;
    let lpf = least_prime_factors(max_n);
    let mut mu = vec![0i8; max_n + 1];
    mu[1] = 1;
    for n in 2..=max_n {
        let p = lpf[n] as usize;
        let m = n / p;
        mu[n] = if m.is_multiple_of(p) { 0 } else { -mu[m] };
    }
    mu.remove(0);
    Ok(mu)
}

pub fn sieve_mobius<S: Scalar>(max_n: usize) -> Result<FunctionTable<S>> {
    let mu = mobius_values(max_n)?;
    FunctionTable::from_values(mu.into_iter().map(|v| S::from_i64(v as i64)).collect())
}

/// d(n) by the harmonic double loop.
pub fn sieve_divisor_count<S: Scalar>(max_n: usize) -> Result<FunctionTable<S>> {
    check_max_n(max_n)?;
    let mut d = vec![0u32; max_n];
    for q in 1..=max_n {
        for m in (q..=max_n).step_by(q) {
            d[m - 1] += 1;
        }
    }
    FunctionTable::from_values(d.into_iter().map(|v| S::from_i64(v as i64)).collect())
}

/// `f(n) = sum_{q | n} g(q)` for `n <= max_n`.
///
/// Zero values of `g` are skipped, so restricted `g` costs
/// `O(max_n * sum_{q in supp g} 1/q)`.
pub fn dirichlet_convolve_unit<S: Scalar>(g: &FunctionTable<S>, max_n: usize) -> Result<FunctionTable<S>> {
    check_max_n(max_n)?;
    if g.max_n() < max_n {
        return Err(Error::range(format!(
            "g is tabulated on [1, {}] but the convolution needs [1, {max_n}]",
            g.max_n()
        )));
    }
    let mut f = vec![S::zero(); max_n];
    for q in 1..=max_n {
        let gq = g.at(q);
        if gq.is_zero() {
            continue;
        }
        for m in (q..=max_n).step_by(q) {
            f[m - 1] = f[m - 1].clone() + gq.clone();
        }
    }
    FunctionTable::from_values(f)
}

/// `g(n) = sum_{q | n} μ(q) f(n/q)`, the inverse of [`dirichlet_convolve_unit`].
pub fn mobius_invert<S: Scalar>(f: &FunctionTable<S>) -> Result<FunctionTable<S>> {
    let max_n = f.max_n();
    let mu = mobius_values(max_n)?;
    let mut g = vec![S::zero(); max_n];
    for q in 1..=max_n {
        let sign = mu[q - 1];
        if sign == 0 {
            continue;
        }
        for m in 1..=max_n / q {
            let v = f.at(m).clone();
            let slot = &mut g[q * m - 1];
            *slot = if sign > 0 { slot.clone() + v } else { slot.clone() - v };
        }
    }
    FunctionTable::from_values(g)
}

/// Probe of essential boundedness: `max_n |f(n)| / n^eps`.
///
/// A finite table cannot witness `f(n) << n^eps` for every `eps`; this is a
/// report, not a test.
pub fn essential_bound_probe<S: Scalar>(f: &FunctionTable<S>, eps: f64) -> f64 {
    f.values()
        .iter()
        .enumerate()
        .map(|(k, v)| v.to_f64().abs() / ((k + 1) as f64).powf(eps))
        .fold(0.0, f64::max)
}

/// Support restriction `supp(g) ⊂ [1, Q]`, either fixed or growing with `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SupportCutoff {
    Fixed(usize),
    /// `Q(y) = floor(y^θ)`, applied at `y = x + h`.
    Power(f64),
}

impl SupportCutoff {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SupportCutoff::Fixed(0) => Err(Error::domain("fixed cutoff needs Q >= 1")),
            SupportCutoff::Power(theta) if !(theta > 0.0 && theta <= 1.0) => {
                Err(Error::domain(format!("power cutoff needs θ in (0, 1], got {theta}")))
            }
            _ => Ok(()),
        }
    }

    /// `Q(y)` for the power mode, clamped to `[1, y]`.
    pub fn power_bound(theta: f64, y: usize) -> usize {
        // the nudge keeps exact powers (e.g. 100^(1/2)) from flooring one low
        let q = ((y as f64).powf(theta) + 1e-9).floor() as usize;
        q.clamp(1, y.max(1))
    }

    /// Support bound in effect for the short sum centered at `x`.
    pub fn bound(&self, x: usize, h: usize) -> usize {
        match *self {
            SupportCutoff::Fixed(q) => q,
            SupportCutoff::Power(theta) => Self::power_bound(theta, x + h),
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, SupportCutoff::Fixed(_))
    }
}

impl fmt::Display for SupportCutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportCutoff::Fixed(q) => write!(f, "fixed:{q}"),
            SupportCutoff::Power(theta) => write!(f, "power:{theta}"),
        }
    }
}

impl FromStr for SupportCutoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = match s.split_once(':') {
            Some(("fixed", q)) => q.parse().map(SupportCutoff::Fixed).ok(),
            Some(("power", t)) => t.parse().map(SupportCutoff::Power).ok(),
            _ => None,
        }
        .ok_or_else(|| Error::Parse(format!("bad cutoff {s:?}; expected fixed:Q or power:THETA")))?;
        parsed.validate()?;
        Ok(parsed)
    }
}

/// `g` with every value outside the cutoff's support zeroed.
pub fn apply_cutoff<S: Scalar>(
    g: &FunctionTable<S>,
    cutoff: SupportCutoff,
    x: usize,
    h: usize,
) -> Result<FunctionTable<S>> {
    cutoff.validate()?;
    if x == 0 {
        return Err(Error::domain("x must be at least 1"));
    }
    let q = cutoff.bound(x, h);
    Ok(restrict(g, q))
}

pub(crate) fn restrict<S: Scalar>(g: &FunctionTable<S>, q: usize) -> FunctionTable<S> {
    let values = g
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| if k < q { v.clone() } else { S::zero() })
        .collect();
    FunctionTable { values }
}

/// Built-in choices of `g` (before any support cutoff).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GSpec {
    /// Indicator of `{1}`.
    Delta1,
    Unit,
    Mobius,
    MobiusSquared,
    /// Seeded values `k/1000`, `k` uniform in `[-1000, 1000]`.
    Random(u64),
}

impl GSpec {
    /// Exact values on `[1, max_n]`.
    pub fn ratios(&self, max_n: usize) -> Result<Vec<Rational64>> {
        check_max_n(max_n)?;
        let ints = |v: Vec<i8>| v.into_iter().map(|m| Rational64::from_integer(m as i64)).collect();
        Ok(match *self {
            GSpec::Delta1 => (1..=max_n).map(|n| Rational64::from_integer((n == 1) as i64)).collect(),
            GSpec::Unit => vec![Rational64::from_integer(1); max_n],
            GSpec::Mobius => ints(mobius_values(max_n)?),
            GSpec::MobiusSquared => ints(mobius_values(max_n)?.into_iter().map(|m| m * m).collect()),
            GSpec::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..max_n)
                    .map(|_| Rational64::new(rng.gen_range(-1000..=1000), 1000))
                    .collect()
            }
        })
    }

    pub fn table<S: Scalar>(&self, max_n: usize) -> Result<FunctionTable<S>> {
        let values = self
            .ratios(max_n)?
            .into_iter()
            .map(|r| S::ratio(*r.numer(), *r.denom()))
            .collect();
        FunctionTable::from_values(values)
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpec::Delta1 => f.write_str("delta1"),
            GSpec::Unit => f.write_str("unit"),
            GSpec::Mobius => f.write_str("mobius"),
            GSpec::MobiusSquared => f.write_str("mobius-squared"),
            GSpec::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for GSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta1" => Ok(GSpec::Delta1),
            "unit" => Ok(GSpec::Unit),
            "mobius" => Ok(GSpec::Mobius),
            "mobius-squared" => Ok(GSpec::MobiusSquared),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(GSpec::Random)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "unknown g preset {s:?}; expected delta1, unit, mobius, mobius-squared or random:SEED"
                    ))
                }),
        }
    }
}

/// Writes `n,value` rows, values as `p/q` (or `p` for integers).
pub fn write_csv<W: Write>(table: &ExactTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "value"])?;
    for (k, v) in table.values().iter().enumerate() {
        w.write_record([(k + 1).to_string(), v.to_string()])?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<csv output>".into(),
        source,
    })?;
    Ok(())
}

/// Reads an `n,value` table. Rows must cover `n = 1, 2, ...` in order.
pub fn read_csv<R: Read>(input: R) -> Result<ExactTable> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "value"] {
        return Err(Error::Parse(format!("expected header n,value, got {headers:?}")));
    }
    let mut values = Vec::new();
    for (k, record) in r.records().enumerate() {
        let record = record?;
        let n: usize = record[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {:?}", &record[0])))?;
        if n != k + 1 {
            return Err(Error::Parse(format!("row {} has n = {n}", k + 1)));
        }
        values.push(parse_exact(record[1].trim())?);
    }
    FunctionTable::from_values(values)
}

/// Parses `p/q`, an integer, or a plain decimal like `-0.125` exactly.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational value {s:?}"));
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{frac_part}", int_part.trim_start_matches(['-', '+']));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num::pow(BigInt::from(10), frac_part.len());
        let r = Rational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    let r: Rational = s.parse().map_err(|_| bad())?;
    if r.denom().is_negative() {
        return Err(bad());
    }
    Ok(r)
}
