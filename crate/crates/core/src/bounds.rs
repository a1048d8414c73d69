//! The covering lower bound `q`, the dimensions it certifies, and the
//! distance spectrum of `K`.
//!
//! `q = C(4k, 2k) / (2 C(4k-1, k-1))` is the least number of parts of
//! smaller diameter that can cover `K`. Whenever `q > d + 1` the point set
//! refutes Borsuk's conjecture in every dimension `D` with `d <= D < q - 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{
    binomial, greatest_integer_below, is_prime_power, ratio_pow, to_decimal, ExactInt, ExactRatio,
    PrimePowerWitness,
};
use crate::construction::make_params;
use crate::error::{Error, Result};

/// Non-fatal conditions attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// `k` is not a prime power, so the forbidden-intersection bound behind
    /// `q` does not apply.
    NotPrimePower,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NotPrimePower => {
                f.write_str("k is not a prime power; q is not a proven bound")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QReport {
    pub k: u64,
    pub q: ExactRatio,
    /// `q` by four independent routes, in order: binomial ratio,
    /// `2 C(3k,k) / C(2k,k)`, `C(3k,k) / C(2k-1,k-1)`, and the ratio of
    /// products `(2k+1)..=3k` over `k..=2k-1`.
    pub formula_values: [ExactRatio; 4],
    /// `2 (3/2)^k`.
    pub lower: ExactRatio,
    /// `2 (2 - 1/(k+1))^k`.
    pub upper: ExactRatio,
    pub digits: u32,
    pub decimal: String,
    pub prime_power: Option<PrimePowerWitness>,
    pub warnings: Vec<Warning>,
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    if k > u32::MAX as u64 / 4 {
        return Err(Error::Overflow("k too large for exact evaluation"));
    }
    Ok(())
}

fn falling_product(from: u64, to_inclusive: u64) -> ExactInt {
    (from..=to_inclusive).fold(ExactInt::one(), |acc, i| acc * i)
}

/// `q` from the ratio of products; the cheapest of the four routes.
pub fn q_value(k: u64) -> Result<ExactRatio> {
    check_k(k)?;
    Ok(ExactRatio::new(
        falling_product(2 * k + 1, 3 * k),
        falling_product(k, 2 * k - 1),
    ))
}

/// `2 (3/2)^k`, the proven lower bound on `q`.
pub fn q_lower_bound(k: u64) -> Result<ExactRatio> {
    check_k(k)?;
    let three_halves = ExactRatio::new(3.into(), 2.into());
    Ok(ratio_pow(&three_halves, k as u32) * ExactInt::from(2))
}

/// `2 (2 - 1/(k+1))^k = 2 ((2k+1)/(k+1))^k`.
pub fn q_upper_bound(k: u64) -> Result<ExactRatio> {
    check_k(k)?;
    let factor = ExactRatio::new((2 * k + 1).into(), (k + 1).into());
    Ok(ratio_pow(&factor, k as u32) * ExactInt::from(2))
}

/// [`q_exact_digits`] with two decimal digits.
pub fn q_exact(k: u64) -> Result<QReport> {
    q_exact_digits(k, 2)
}

/// Computes `q` four ways, insists they agree, and checks
/// `2 (3/2)^k <= q <= 2 (2 - 1/(k+1))^k < 2^(k+1)`.
pub fn q_exact_digits(k: u64, digits: u32) -> Result<QReport> {
    check_k(k)?;
    let m = 4 * k;
    let two = ExactInt::from(2);

    let by_binomials = ExactRatio::new(binomial(m, 2 * k), &two * binomial(m - 1, k - 1));
    let by_central = ExactRatio::new(&two * binomial(3 * k, k), binomial(2 * k, k));
    let by_shifted = ExactRatio::new(binomial(3 * k, k), binomial(2 * k - 1, k - 1));
    let by_products = q_value(k)?;
    let formula_values = [by_binomials, by_central, by_shifted, by_products];

    let q = formula_values[0].clone();
    if let Some(i) = formula_values.iter().position(|v| *v != q) {
        return Err(Error::Invariant {
            k,
            detail: format!(
                "q formula {} disagrees: {} vs {}",
                i + 1,
                formula_values[i],
                q
            ),
        });
    }

    let lower = q_lower_bound(k)?;
    let upper = q_upper_bound(k)?;
    let ceiling = ExactRatio::from_integer(num_traits::pow(two, k as usize + 1));
    if !(lower <= q && q <= upper && upper < ceiling) {
        return Err(Error::Invariant {
            k,
            detail: format!("bound sandwich fails: {lower} <= {q} <= {upper} < {ceiling}"),
        });
    }

    let prime_power = is_prime_power(k)?;
    let warnings = match prime_power {
        Some(_) => Vec::new(),
        None => vec![Warning::NotPrimePower],
    };
    Ok(QReport {
        k,
        decimal: to_decimal(&q, digits)?,
        q,
        formula_values,
        lower,
        upper,
        digits,
        prime_power,
        warnings,
    })
}

/// Dimensions certified by one value of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeReport {
    pub k: u64,
    pub d: u64,
    pub q: ExactRatio,
    pub is_counterexample: bool,
    pub d_low: Option<u64>,
    /// Greatest integer strictly below `q - 1`.
    pub d_high: Option<ExactInt>,
    pub prime_power: Option<PrimePowerWitness>,
}

impl RangeReport {
    pub fn covers(&self, dim: u64) -> bool {
        match (self.d_low, &self.d_high) {
            (Some(lo), Some(hi)) => lo <= dim && ExactInt::from(dim) <= *hi,
            _ => false,
        }
    }
}

/// Top of the range certified by a bound value `c`: the greatest integer
/// `D` with `D < c - 1`.
pub fn certified_top(c: &ExactRatio) -> ExactInt {
    greatest_integer_below(&(c - ExactInt::one()))
}

pub fn counterexample_range(k: u64) -> Result<RangeReport> {
    let params = make_params(k)?;
    let q = q_value(k)?;
    let is_counterexample = q > ExactRatio::from_integer((params.d + 1).into());
    let (d_low, d_high) = if is_counterexample {
        (Some(params.d), Some(certified_top(&q)))
    } else {
        (None, None)
    };
    Ok(RangeReport {
        k,
        d: params.d,
        q,
        is_counterexample,
        d_low,
        d_high,
        prime_power: params.prime_power,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPlan {
    pub target_dim: u64,
    pub chosen_k: Option<u64>,
    pub range: Option<(u64, ExactInt)>,
}

/// Smallest prime power `k` whose certified range contains `target_dim`.
///
/// The scan stops once `d(k)` exceeds the target, since `d` only grows.
pub fn plan_cover(target_dim: u64) -> Result<CoverPlan> {
    if target_dim == 0 {
        return Err(Error::InvalidInput(
            "target dimension must be positive".into(),
        ));
    }
    let mut k = 1u64;
    loop {
        let params = make_params(k)?;
        if params.d > target_dim {
            break;
        }
        if params.prime_power.is_some() {
            let range = counterexample_range(k)?;
            if range.covers(target_dim) {
                return Ok(CoverPlan {
                    target_dim,
                    chosen_k: Some(k),
                    range: Some((params.d, range.d_high.expect("covering range is present"))),
                });
            }
        }
        k += 1;
    }
    Ok(CoverPlan {
        target_dim,
        chosen_k: None,
        range: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainConfig {
    /// Largest power of two in the chain.
    pub k_max: u64,
    pub start_dim: u64,
    /// Prime powers between 16 and 32 that bridge the gap to `k = 32`.
    pub bridges: Vec<u64>,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            k_max: 4096,
            start_dim: 2015,
            bridges: vec![17],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// The exact value of `q`.
    ExactQ,
    /// The proven lower bound `2 (3/2)^k`.
    LowerBound,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::ExactQ => "q_exact",
            Certificate::LowerBound => "lower_bound",
        })
    }
}

/// One step of the chain: the range of `k` must reach the start of the
/// range of `next_k` (or, for the last link, cover `d(2 k_max)` itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub k: u64,
    pub next_k: u64,
    pub terminal: bool,
    pub d_low: u64,
    pub next_d: u64,
    pub certificate: Certificate,
    /// Top of the range under `certificate`.
    pub reach: ExactInt,
    pub passed: bool,
}

/// `(3/2)^k / C(8k, 2)` against the same ratio at `2k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCheck {
    pub k: u64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub config: ChainConfig,
    pub links: Vec<ChainLink>,
    pub ratio_checks: Vec<RatioCheck>,
    /// Last dimension the chain covers without a gap, `d(2 k_max)`.
    pub through_dim: u64,
    pub passed: bool,
    pub failure: Option<String>,
}

fn growth_ratio(k: u64) -> Result<ExactRatio> {
    let three_halves = ExactRatio::new(3.into(), 2.into());
    Ok(ratio_pow(&three_halves, k as u32) / binomial(8 * k, 2))
}

/// Checks that the ranges for `16`, the bridges, and the powers of two
/// `32..=k_max` join into one interval from `start_dim` through
/// `d(2 k_max)`, and that `(3/2)^k / C(8k, 2)` grows at every doubling.
///
/// Each link first tries the lower bound `2 (3/2)^k`, requiring the
/// stronger `2 (3/2)^k - 1 > d(next)`; if that is too weak it falls back to
/// the exact `q` and requires `reach + 1 >= d(next)`.
pub fn verify_chain(config: &ChainConfig) -> Result<ChainReport> {
    let k_max = config.k_max;
    if k_max < 32 || !k_max.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "k_max must be a power of two >= 32, got {k_max}"
        )));
    }
    let mut ks: Vec<u64> = vec![16];
    ks.extend(config.bridges.iter().copied());
    ks.extend((5..=k_max.trailing_zeros()).map(|j| 1u64 << j));
    ks.sort_unstable();
    ks.dedup();

    let through_dim = make_params(2 * k_max)?.d;
    let mut failure: Option<String> = None;
    let mut note = |msg: String| {
        if failure.is_none() {
            failure = Some(msg);
        }
    };

    for &k in &ks {
        if is_prime_power(k)?.is_none() {
            note(format!("k={k} is not a prime power"));
        }
    }

    let mut links = Vec::with_capacity(ks.len());
    for (i, &k) in ks.iter().enumerate() {
        let terminal = i + 1 == ks.len();
        let next_k = if terminal { 2 * k_max } else { ks[i + 1] };
        let d_low = make_params(k)?.d;
        let next_d = make_params(next_k)?.d;

        let lower = q_lower_bound(k)?;
        let (certificate, reach, passed) =
            if lower.clone() - ExactInt::one() > ExactRatio::from_integer(next_d.into()) {
                (Certificate::LowerBound, certified_top(&lower), true)
            } else {
                let reach = certified_top(&q_value(k)?);
                let passed = if terminal {
                    reach >= ExactInt::from(next_d)
                } else {
                    &reach + 1u32 >= ExactInt::from(next_d)
                };
                (Certificate::ExactQ, reach, passed)
            };
        if reach < ExactInt::from(d_low) {
            note(format!("k={k}: range is empty"));
        }
        if !passed {
            note(format!(
                "k={k}: range ends at {reach}, gap before d({next_k}) = {next_d}"
            ));
        }
        links.push(ChainLink {
            k,
            next_k,
            terminal,
            d_low,
            next_d,
            certificate,
            reach,
            passed,
        });
    }

    if let Some(first) = links.first() {
        if config.start_dim < first.d_low || ExactInt::from(config.start_dim) > first.reach {
            note(format!(
                "start dimension {} is outside the range of k={}",
                config.start_dim, first.k
            ));
        }
    }

    let mut ratio_checks = Vec::new();
    for k in ks
        .iter()
        .copied()
        .filter(|k| *k >= 32 && k.is_power_of_two())
    {
        let passed = growth_ratio(2 * k)? > growth_ratio(k)?;
        if !passed {
            note(format!("k={k}: growth ratio does not increase on doubling"));
        }
        ratio_checks.push(RatioCheck { k, passed });
    }

    Ok(ChainReport {
        config: config.clone(),
        links,
        ratio_checks,
        through_dim,
        passed: failure.is_none(),
        failure,
    })
}

/// Unordered point pairs of `K` at one nonzero squared distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    /// The smaller of the two block intersection sizes `{p, 2k - p}` that
    /// produce this distance.
    pub p: u64,
    pub dist_sq: u64,
    pub count: ExactInt,
}

impl SpectrumEntry {
    pub fn p_complement(&self, k: u64) -> u64 {
        2 * k - self.p
    }
}

fn exact_quotient(k: u64, num: ExactInt, den: u32) -> Result<ExactInt> {
    let (q, r) = num.div_rem(&ExactInt::from(den));
    if !r.is_zero() {
        return Err(Error::Invariant {
            k,
            detail: format!("spectrum count {num} not divisible by {den}"),
        });
    }
    Ok(q)
}

/// Distance census of `K` by counting: ordered block pairs meeting in `p`
/// elements number `|H| C(2k, p) C(2k, 2k-p)`, and each unordered point pair
/// accounts for eight ordered block pairs across the classes `p` and
/// `2k - p` (four when `p = k`, which is its own partner).
///
/// Entries come in increasing `p`; the last one (`p = k`) is the diameter.
pub fn spectrum_analytic(k: u64) -> Result<Vec<SpectrumEntry>> {
    check_k(k)?;
    let blocks = binomial(4 * k, 2 * k);
    let two_k = 2 * k;
    let mut out = Vec::with_capacity(k as usize);
    for p in 1..=k {
        let ordered = &blocks * binomial(two_k, p) * binomial(two_k, two_k - p);
        let count = if p == k {
            exact_quotient(k, ordered, 8)?
        } else {
            exact_quotient(k, ordered, 4)?
        };
        let v = p.abs_diff(k);
        out.push(SpectrumEntry {
            p,
            dist_sq: 4 * (k * k - v * v),
            count,
        });
    }
    let points = exact_quotient(k, blocks, 2)?;
    let pairs = exact_quotient(k, &points * (&points - 1u32), 2)?;
    let total: ExactInt = out.iter().map(|e| &e.count).sum();
    if total != pairs {
        return Err(Error::Invariant {
            k,
            detail: format!("spectrum counts sum to {total}, expected C(|K|, 2) = {pairs}"),
        });
    }
    Ok(out)
}
