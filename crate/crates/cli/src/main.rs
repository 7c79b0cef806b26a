// SPDX-License-Identifier: MIT OR Apache-2.0

//! `msi`: sieves, integrals, invariant suites and majorant sweeps.
//!
//! Exit codes: 0 success, 1 property failure or I/O error, 2 usage or
//! invalid input, 3 resource budget exceeded.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use msi_core::arith::{dirichlet_convolve_unit, sieve_divisor_count, sieve_mobius, write_csv, GSpec, SupportCutoff};
use msi_core::farey::farey_enumerate;
use msi_core::integral::{
    even_floor, far_part_bound_check_with, majorant_compare_with, selberg_integral_decomposed_with,
    selberg_integral_direct_with, DecompositionOptions, DecompositionReport, FarPartReport, IntegralConfig,
    DEFAULT_PAIR_BUDGET,
};
use msi_core::verify::{run_suite, Scale, Suite};
use msi_core::{Error, Execution};

#[derive(Parser, Debug)]
#[command(name = "msi", version, about = "Modified Selberg integral experiments")]
struct Cli {
    /// Run everything on the calling thread
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate an arithmetic function as CSV (n,value)
    Sieve(SieveArgs),
    /// Direct and (optionally) spectral evaluation of the integral
    Integral(IntegralArgs),
    /// Run an invariant suite
    Verify(VerifyArgs),
    /// Majorant ratios over a list of N, one CSV row each
    Sweep(SweepArgs),
    /// Reduced fractions in (0, 1/2] with denominator at most Q
    Farey(FareyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SieveKind {
    Mobius,
    Divisor,
    /// The preset chosen with --g, cut at --q
    G,
    /// g * 1 for the preset chosen with --g, cut at --q
    F,
}

#[derive(clap::Args, Debug)]
struct SieveArgs {
    #[arg(long, value_enum)]
    kind: SieveKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "mobius")]
    g: String,
    /// Support cutoff for g (defaults to N)
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct IntegralArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: usize,
    /// Fixed support cutoff
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value = "mobius")]
    g: String,
    /// `fixed:Q` or `power:THETA`; overrides --q
    #[arg(long)]
    cutoff: Option<String>,
    /// Spacing parameter A (default N ln N)
    #[arg(long)]
    a: Option<f64>,
    /// Also run the spectral decomposition (fixed cutoff only)
    #[arg(long)]
    decompose: bool,
    /// Ignore the fraction-pair budget
    #[arg(long)]
    force: bool,
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    pair_budget: u64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    /// Smaller grids for a smoke run
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args, Debug)]
struct SweepArgs {
    /// Comma-separated N values
    #[arg(long, value_delimiter = ',', required = true)]
    n_values: Vec<usize>,
    /// `power:X` gives even⌊N^X⌋, `fixed:K` a constant even h
    #[arg(long, default_value = "power:0.4")]
    h_rule: String,
    /// `power:X` gives ⌊N^X⌋, `fixed:K` a constant Q
    #[arg(long, default_value = "power:0.3")]
    q_rule: String,
    #[arg(long, default_value = "mobius")]
    g: String,
    #[arg(long = "big-g", default_value = "mobius-squared")]
    big_g: String,
    /// CSV destination (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct FareyArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    csv: bool,
}

/// A failed property, as opposed to an error.
#[derive(Debug)]
struct PropertyFailure;

impl std::fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("one or more properties failed")
    }
}

impl std::error::Error for PropertyFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<PropertyFailure>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Resource(_)) => 3,
        Some(Error::Io { .. }) | Some(Error::Csv(_)) => 1,
        Some(_) => 2,
        None if err.downcast_ref::<io::Error>().is_some() => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err.downcast_ref::<PropertyFailure>().is_none() {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Sieve(args) => sieve(args),
        Command::Integral(args) => integral(args, exec),
        Command::Verify(args) => verify(args, exec),
        Command::Sweep(args) => sweep(args, exec),
        Command::Farey(args) => farey(args),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("MSI_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("MSI_THREADS must be a positive integer, got '{raw}'")))?;
    if threads == 0 {
        bail!(Error::Parse("MSI_THREADS must be a positive integer, got '0'".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> anyhow::Result<T> {
    Ok(s.parse::<T>()?)
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let file = File::create(p).map_err(|source| Error::Io {
                path: p.display().to_string(),
                source,
            })?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sieve(args: SieveArgs) -> anyhow::Result<()> {
    let g_spec: GSpec = parse(&args.g)?;
    let q = args.q.unwrap_or(args.n).min(args.n);
    let table = match args.kind {
        SieveKind::Mobius => sieve_mobius(args.n)?,
        SieveKind::Divisor => sieve_divisor_count(args.n)?,
        SieveKind::G | SieveKind::F => {
            let full = g_spec.table(args.n)?;
            let cut = msi_core::arith::apply_cutoff(&full, SupportCutoff::Fixed(q), 1, 0)?;
            match args.kind {
                SieveKind::G => cut,
                _ => dirichlet_convolve_unit(&cut, args.n)?,
            }
        }
    };
    let mut out = output(args.out.as_ref())?;
    write_csv(&table, &mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct IntegralJson {
    #[serde(rename = "N")]
    n: usize,
    h: usize,
    #[serde(rename = "Q")]
    q: usize,
    cutoff: String,
    g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct: Option<f64>,
    #[serde(flatten)]
    decomposition: Option<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    far_part: Option<FarPartReport>,
}

fn integral(args: IntegralArgs, exec: Execution) -> anyhow::Result<()> {
    let cutoff = match (&args.cutoff, args.q) {
        (Some(c), _) => parse::<SupportCutoff>(c)?,
        (None, Some(q)) => SupportCutoff::Fixed(q),
        (None, None) => bail!(Error::Parse("give --q or --cutoff".into())),
    };
    let mut cfg = IntegralConfig::new(args.n, args.h, cutoff, parse(&args.g)?)?;
    if let Some(a) = args.a {
        cfg = cfg.with_spacing(a)?;
    }
    let opts = DecompositionOptions {
        pair_budget: args.pair_budget,
        force: args.force,
        exec,
    };
    let (direct, decomposition, far_part) = if args.decompose {
        let report = selberg_integral_decomposed_with(&cfg, &opts)?;
        let far = far_part_bound_check_with(&cfg, &opts)?;
        (report.direct, Some(report), Some(far))
    } else {
        (selberg_integral_direct_with::<f64>(&cfg, exec)?, None, None)
    };
    let q = cfg.support_bound().min(cfg.table_len());

    let mut out = io::stdout().lock();
    if args.json {
        let doc = IntegralJson {
            n: cfg.n,
            h: cfg.h(),
            q,
            cutoff: cfg.cutoff.to_string(),
            g: cfg.g.to_string(),
            direct: decomposition.is_none().then_some(direct),
            decomposition,
            far_part,
        };
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
    } else if args.csv {
        writeln!(out, "N,h,Q,g,j_direct,j_total,diagonal,near,far,gap")?;
        let fields = match decomposition {
            Some(r) => format!(
                "{},{},{},{},{}",
                r.total,
                r.diagonal,
                r.near_delta + r.near_sigma,
                r.far_delta + r.far_sigma,
                r.abs_gap
            ),
            None => ",,,,".to_string(),
        };
        writeln!(out, "{},{},{},{},{},{}", cfg.n, cfg.h(), q, cfg.g, direct, fields)?;
    } else {
        writeln!(
            out,
            "N = {}, h = {}, cutoff = {}, g = {}",
            cfg.n,
            cfg.h(),
            cfg.cutoff,
            cfg.g
        )?;
        writeln!(out, "direct      {direct:.12e}")?;
        if let (Some(r), Some(f)) = (decomposition, far_part) {
            writeln!(out, "diagonal    {:.12e}", r.diagonal)?;
            writeln!(out, "near delta  {:.12e}", r.near_delta)?;
            writeln!(out, "near sigma  {:.12e}", r.near_sigma)?;
            writeln!(out, "far delta   {:.12e}", r.far_delta)?;
            writeln!(out, "far sigma   {:.12e}", r.far_sigma)?;
            writeln!(out, "total       {:.12e}", r.total)?;
            writeln!(out, "gap         {:.3e}", r.abs_gap)?;
            writeln!(out, "A = {:.6}, |far|/(A h) = {:.6e}", f.spacing, f.ratio_to_ah)?;
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs, exec: Execution) -> anyhow::Result<()> {
    let suite: Suite = parse(&args.suite)?;
    let scale = if args.quick { Scale::Quick } else { Scale::Full };
    let report = run_suite(suite, scale, exec)?;
    let mut out = io::stdout().lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        for p in &report.properties {
            writeln!(
                out,
                "{:<28} {} instances={} max_error={:.3e}",
                p.property,
                if p.pass { "pass" } else { "FAIL" },
                p.instances,
                p.max_error
            )?;
        }
        writeln!(
            out,
            "suite {}: {}",
            report.suite,
            if report.pass { "pass" } else { "FAIL" }
        )?;
    }
    out.flush()?;
    if report.pass {
        Ok(())
    } else {
        Err(PropertyFailure.into())
    }
}

/// `power:X` or `fixed:K`.
#[derive(Clone, Copy, Debug)]
enum Rule {
    Power(f64),
    Fixed(usize),
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("rule must be 'power:X' or 'fixed:K', got '{s}'"));
        match s.split_once(':') {
            Some(("power", x)) => {
                let x: f64 = x.parse().map_err(|_| bad())?;
                if !(x > 0.0 && x < 1.0) {
                    return Err(Error::Parse(format!("power exponent must lie in (0, 1), got {x}")));
                }
                Ok(Rule::Power(x))
            }
            Some(("fixed", k)) => Ok(Rule::Fixed(k.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

fn sweep(args: SweepArgs, exec: Execution) -> anyhow::Result<()> {
    let h_rule: Rule = parse(&args.h_rule)?;
    let q_rule: Rule = parse(&args.q_rule)?;
    let g: GSpec = parse(&args.g)?;
    let big_g: GSpec = parse(&args.big_g)?;
    let configs = args
        .n_values
        .iter()
        .map(|&n| {
            let h = match h_rule {
                Rule::Power(x) => even_floor((n as f64).powf(x)),
                Rule::Fixed(k) => k,
            };
            let q = match q_rule {
                Rule::Power(x) => SupportCutoff::power_bound(x, n),
                Rule::Fixed(k) => k,
            };
            Ok(IntegralConfig::new(n, h, SupportCutoff::Fixed(q), g)?)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let mut writer = csv::WriterBuilder::new().from_writer(output(args.out.as_ref())?);
    for cfg in &configs {
        writer.serialize(majorant_compare_with(cfg, big_g, exec)?)?;
    }
    writer.flush().map_err(|source| Error::Io {
        path: args.out.as_ref().map_or("<stdout>".into(), |p| p.display().to_string()),
        source,
    })?;
    Ok(())
}

fn farey(args: FareyArgs) -> anyhow::Result<()> {
    let seq = farey_enumerate(args.q)?;
    let mut out = BufWriter::new(io::stdout().lock());
    if args.csv {
        writeln!(out, "num,den,value")?;
        for fr in seq.fractions() {
            writeln!(out, "{},{},{}", fr.num, fr.den, fr.to_f64())?;
        }
    } else {
        let items: Vec<String> = seq.fractions().iter().map(|fr| fr.to_string()).collect();
        writeln!(out, "{}", items.join(" "))?;
    }
    out.flush()?;
    Ok(())
}
