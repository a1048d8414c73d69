//! Command-line driver.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid usage,
//! 3 resource cap exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use borsuk_core::arith::{ratio_string, to_decimal, ExactInt, MAX_DECIMAL_DIGITS};
use borsuk_core::bounds::{
    counterexample_range, plan_cover, q_exact_digits, spectrum_analytic, verify_chain, ChainConfig,
    ChainReport, SpectrumEntry,
};
use borsuk_core::construction::{enumerate_points, make_params, Params};
use borsuk_core::oracle::{run_suite, spectrum_bruteforce, Caps, Suite, DEFAULT_SEARCH_BUDGET};
use borsuk_core::{Error, VerificationReport};
use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::json;
use crate::pointset::{read_pointset, write_pointset, FormatError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "borsuk",
    version,
    about = "Exact bounds and brute-force checks for the cross-set Borsuk counterexamples"
)]
pub struct CliConfig {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Fractional digits for decimal renderings (at most 50).
    #[arg(long, global = true, default_value_t = 2)]
    pub digits: u32,

    /// Largest k for point enumeration and export.
    #[arg(long, global = true)]
    pub cap_enum: Option<u64>,

    /// Largest k for pairwise suites.
    #[arg(long, global = true)]
    pub cap_pairwise: Option<u64>,

    /// Largest k for the affine rank suite.
    #[arg(long, global = true)]
    pub cap_rank: Option<u64>,

    /// Largest k for exact conflict-free family search.
    #[arg(long, global = true)]
    pub cap_exact: Option<u64>,

    /// Node budget for the conflict-free family search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived sizes m, |W| and d for one k.
    Params { k: u64 },
    /// The covering lower bound q, four ways, with its analytic bounds.
    Q { k: u64 },
    /// Dimensions certified as counterexamples by one k.
    Range { k: u64 },
    /// Smallest prime power k whose range covers a target dimension.
    Plan { dim: u64 },
    /// Check that the certified ranges chain without gaps.
    Chain {
        #[arg(long, default_value_t = 4096)]
        max_k: u64,
        #[arg(long, default_value_t = 2015)]
        start_dim: u64,
        /// Bridge prime powers between 16 and 32, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "17")]
        bridges: Vec<u64>,
    },
    /// Distance spectrum of K by counting, optionally cross-checked.
    Spectrum {
        k: u64,
        #[arg(long)]
        brute: bool,
    },
    /// Run a verification suite: identities, diameter, fw, rank, cover, spectrum.
    Verify { suite: String, k: u64 },
    /// Write the point set for k in kk-pointset v1 format.
    Export {
        k: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read back and validate a kk-pointset v1 file.
    Import { path: PathBuf },
}

impl CliConfig {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            enumeration: self.cap_enum.unwrap_or(d.enumeration),
            pairwise: self.cap_pairwise.unwrap_or(d.pairwise),
            rank: self.cap_rank.unwrap_or(d.rank),
            exact_search: self.cap_exact.unwrap_or(d.exact_search),
        }
    }
}

/// A command outcome that is not a plain success.
enum Failure {
    Usage(String),
    Cap(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::Invariant { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io(e) => Failure::Usage(e.to_string()),
            FormatError::Core(e) => e.into(),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match dispatch(&config, out) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Cap(m) => (EXIT_CAP, m),
                Failure::Verification(m) => (EXIT_FAILED, m),
            };
            let _ = writeln!(err, "borsuk: {msg}");
            code
        }
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> Outcome {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    )?;
    Ok(())
}

fn dispatch(config: &CliConfig, out: &mut dyn Write) -> Outcome {
    if config.digits > MAX_DECIMAL_DIGITS {
        return Err(Failure::Usage(format!(
            "--digits must be at most {MAX_DECIMAL_DIGITS}"
        )));
    }
    let caps = config.caps();
    match &config.command {
        Command::Params { k } => params(config, out, &make_params(*k)?),
        Command::Q { k } => q(config, out, *k),
        Command::Range { k } => range(config, out, *k),
        Command::Plan { dim } => plan(config, out, *dim),
        Command::Chain {
            max_k,
            start_dim,
            bridges,
        } => chain(
            config,
            out,
            &ChainConfig {
                k_max: *max_k,
                start_dim: *start_dim,
                bridges: bridges.clone(),
            },
        ),
        Command::Spectrum { k, brute } => spectrum(config, out, *k, *brute, &caps),
        Command::Verify { suite, k } => {
            let suite: Suite = suite.parse()?;
            let start = Instant::now();
            let mut report = run_suite(suite, *k, &caps, config.budget)?;
            report.elapsed = Some(start.elapsed());
            verification(config, out, &report)
        }
        Command::Export { k, out: path } => {
            // Refuse before touching the filesystem.
            let _ = enumerate_points(&make_params(*k)?, caps.enumeration)?;
            let mut file = BufWriter::new(File::create(path)?);
            let n = write_pointset(&mut file, *k, caps.enumeration)?;
            if config.json {
                emit(out, &json::import_summary(*k, n as usize))
            } else {
                writeln!(out, "wrote {n} points for k={k} to {}", path.display())?;
                Ok(())
            }
        }
        Command::Import { path } => {
            let set = read_pointset(BufReader::new(File::open(path)?))?;
            if config.json {
                emit(out, &json::import_summary(set.params.k, set.points.len()))
            } else {
                writeln!(
                    out,
                    "validated {} points for k={} (m={}, w={})",
                    set.points.len(),
                    set.params.k,
                    set.params.m,
                    set.params.w_size
                )?;
                Ok(())
            }
        }
    }
}

fn params(config: &CliConfig, out: &mut dyn Write, p: &Params) -> Outcome {
    if config.json {
        return emit(out, &json::params(p));
    }
    writeln!(out, "k   = {}", p.k)?;
    writeln!(out, "m   = {}", p.m)?;
    writeln!(out, "|W| = {}", p.w_size)?;
    writeln!(out, "d   = {}", p.d)?;
    match p.prime_power {
        Some(w) => writeln!(out, "prime power: {}^{}", w.base, w.exponent)?,
        None => writeln!(out, "prime power: no")?,
    }
    Ok(())
}

fn q(config: &CliConfig, out: &mut dyn Write, k: u64) -> Outcome {
    let report = q_exact_digits(k, config.digits)?;
    if config.json {
        return emit(out, &json::q_report(&report));
    }
    let d = make_params(k)?.d;
    writeln!(out, "{:>6}  {:>10}  {:>14}", "k", "d", "q")?;
    writeln!(out, "{:>6}  {:>10}  {:>14}", k, d, report.decimal)?;
    writeln!(out, "q exact = {}", ratio_string(&report.q))?;
    writeln!(
        out,
        "2(3/2)^k = {} <= q <= 2(2-1/(k+1))^k = {}",
        to_decimal(&report.lower, config.digits)?,
        to_decimal(&report.upper, config.digits)?
    )?;
    for w in &report.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

fn range(config: &CliConfig, out: &mut dyn Write, k: u64) -> Outcome {
    let report = counterexample_range(k)?;
    if config.json {
        return emit(out, &json::range_report(&report, config.digits));
    }
    writeln!(
        out,
        "k={}, d={}, q ≈ {}",
        k,
        report.d,
        to_decimal(&report.q, config.digits)?
    )?;
    match (report.d_low, &report.d_high) {
        (Some(lo), Some(hi)) => writeln!(out, "  counterexample for {lo} <= d <= {hi}")?,
        _ => writeln!(out, "  not verified as counterexample")?,
    }
    if report.prime_power.is_none() {
        writeln!(
            out,
            "  warning: k is not a prime power; the bound does not apply"
        )?;
    }
    Ok(())
}

fn plan(config: &CliConfig, out: &mut dyn Write, dim: u64) -> Outcome {
    let plan = plan_cover(dim)?;
    if config.json {
        return emit(out, &json::cover_plan(&plan));
    }
    match (plan.chosen_k, &plan.range) {
        (Some(k), Some((lo, hi))) => {
            writeln!(out, "dimension {dim}: k={k} certifies {lo} <= d <= {hi}")?
        }
        _ => writeln!(out, "dimension {dim}: no prime power certifies it")?,
    }
    Ok(())
}

fn chain(config: &CliConfig, out: &mut dyn Write, chain: &ChainConfig) -> Outcome {
    let start = Instant::now();
    let report = verify_chain(chain)?;
    if config.json {
        emit(out, &json::chain_report(&report))?;
    } else {
        print_chain(out, &report, start.elapsed())?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification(
            report.failure.unwrap_or_else(|| "chain failed".into()),
        ))
    }
}

fn print_chain(
    out: &mut dyn Write,
    report: &ChainReport,
    elapsed: Duration,
) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>6}  {:>10}  {:>24}  {:>8}  {:>10}  certificate",
        "k", "d", "reach", "next k", "next d"
    )?;
    for l in &report.links {
        writeln!(
            out,
            "{:>6}  {:>10}  {:>24}  {:>8}  {:>10}  {}{}",
            l.k,
            l.d_low,
            abbreviate(&l.reach),
            l.next_k,
            l.next_d,
            l.certificate,
            if l.passed { "" } else { "  GAP" }
        )?;
    }
    let ratios_ok = report.ratio_checks.iter().all(|c| c.passed);
    writeln!(
        out,
        "covered {}..={} without gaps: {}; growth ratio monotone at all tested doublings: {}",
        report.config.start_dim,
        report.through_dim,
        if report.passed { "yes" } else { "no" },
        if ratios_ok { "yes" } else { "no" }
    )?;
    if let Some(f) = &report.failure {
        writeln!(out, "failure: {f}")?;
    }
    writeln!(out, "elapsed: {:.3} s", elapsed.as_secs_f64())
}

// Keeps the chain table readable once the reach runs to hundreds of digits.
fn abbreviate(x: &ExactInt) -> String {
    let s = x.to_string();
    if s.len() <= 24 {
        s
    } else {
        format!("{}...({} digits)", &s[..8], s.len())
    }
}

fn spectrum(config: &CliConfig, out: &mut dyn Write, k: u64, brute: bool, caps: &Caps) -> Outcome {
    let entries = spectrum_analytic(k)?;
    let census = if brute {
        let census = spectrum_bruteforce(k, caps)?;
        let matches = spectrum_matches(&entries, &census);
        Some((census, matches))
    } else {
        None
    };
    if config.json {
        emit(
            out,
            &json::spectrum(k, &entries, census.as_ref().map(|(c, m)| (c, *m))),
        )?;
    } else {
        writeln!(out, "{:>8}  {:>8}  pairs", "p", "dist^2")?;
        for e in &entries {
            writeln!(
                out,
                "{:>8}  {:>8}  {}",
                format!("{}/{}", e.p, e.p_complement(k)),
                e.dist_sq,
                e.count
            )?;
        }
        if let Some((_, matches)) = &census {
            writeln!(
                out,
                "brute-force census {}",
                if *matches { "agrees" } else { "DISAGREES" }
            )?;
        }
    }
    match census {
        Some((_, false)) => Err(Failure::Verification(format!(
            "spectrum for k={k}: counting and brute force disagree"
        ))),
        _ => Ok(()),
    }
}

fn spectrum_matches(entries: &[SpectrumEntry], census: &BTreeMap<u64, u64>) -> bool {
    entries.len() == census.len()
        && entries
            .iter()
            .all(|e| census.get(&e.dist_sq).map(|&c| ExactInt::from(c)) == Some(e.count.clone()))
}

fn verification(config: &CliConfig, out: &mut dyn Write, report: &VerificationReport) -> Outcome {
    if config.json {
        emit(out, &json::verification(report))?;
    } else {
        writeln!(
            out,
            "suite {}: {}",
            report.suite,
            if report.passed { "PASS" } else { "FAIL" }
        )?;
        for (name, value) in &report.params {
            writeln!(out, "  {name} = {value}")?;
        }
        for (name, value) in &report.counters {
            writeln!(out, "  {name}: {value}")?;
        }
        const SHOWN: usize = 8;
        for w in report.witnesses.iter().take(SHOWN) {
            writeln!(out, "  witness: {w}")?;
        }
        if report.witnesses.len() > SHOWN {
            writeln!(
                out,
                "  ... {} more witnesses (use --json for all)",
                report.witnesses.len() - SHOWN
            )?;
        }
        if let Some(t) = report.elapsed {
            writeln!(out, "  elapsed: {:.3} s", t.as_secs_f64())?;
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "suite {} failed: {}",
            report.suite,
            report.witnesses.last().map(String::as_str).unwrap_or("")
        )))
    }
}
