//! Exact integer and rational arithmetic.
//!
//! Every bound in this crate is computed over unbounded integers and
//! rationals. Nothing here goes through binary floating point, including
//! the decimal rendering used for human-readable output.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Unbounded signed integer.
pub type ExactInt = BigInt;

/// Unbounded rational, always held in lowest terms with a positive
/// denominator.
pub type ExactRatio = BigRational;

/// Largest number of fractional digits [`to_decimal`] will render.
pub const MAX_DECIMAL_DIGITS: u32 = 50;

/// Divides `a` by `b`, asserting that the division leaves no remainder.
///
/// Panics if `b` does not divide `a`; callers only use this where the
/// divisibility is a mathematical identity, so a remainder is a bug.
pub fn div_exact(a: &ExactInt, b: &ExactInt) -> ExactInt {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "inexact division {a} / {b}");
    q
}

/// Binomial coefficient `C(n, r)`, zero when `r > n`.
///
/// Evaluated multiplicatively: after step `i` the accumulator holds
/// `C(n - r + i, i)`, so each intermediate division is exact.
pub fn binomial(n: u64, r: u64) -> ExactInt {
    if r > n {
        return ExactInt::zero();
    }
    let r = r.min(n - r);
    let base = n - r;
    let mut acc = ExactInt::one();
    for i in 1..=r {
        acc *= base + i;
        acc = div_exact(&acc, &ExactInt::from(i));
    }
    acc
}

/// `k = base^exponent` with `base` prime and `exponent >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePowerWitness {
    pub base: u64,
    pub exponent: u32,
}

impl PrimePowerWitness {
    pub fn value(&self) -> u64 {
        self.base.pow(self.exponent)
    }
}

/// Recognises prime powers by trial division.
///
/// Returns `None` for `k = 1` and for any `k` with two distinct prime
/// factors. `k = 0` is rejected.
pub fn is_prime_power(k: u64) -> Result<Option<PrimePowerWitness>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".to_string()));
    }
    if k == 1 {
        return Ok(None);
    }
    let base = smallest_prime_factor(k);
    let mut rest = k;
    let mut exponent = 0;
    while rest.is_multiple_of(base) {
        rest /= base;
        exponent += 1;
    }
    Ok((rest == 1).then_some(PrimePowerWitness { base, exponent }))
}

fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// `base^exp` for a rational base.
pub fn ratio_pow(base: &ExactRatio, exp: u32) -> ExactRatio {
    // Powers of coprime integers stay coprime, so no reduction is needed.
    ExactRatio::new_raw(
        num_traits::pow(base.numer().clone(), exp as usize),
        num_traits::pow(base.denom().clone(), exp as usize),
    )
}

/// Greatest integer strictly less than `x`.
pub fn greatest_integer_below(x: &ExactRatio) -> ExactInt {
    if x.is_integer() {
        x.to_integer() - 1
    } else {
        x.floor().to_integer()
    }
}

/// Renders `x` as `"numerator/denominator"`, always in two parts.
pub fn ratio_string(x: &ExactRatio) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Fixed-point decimal rendering with `digits` fractional digits, rounded
/// half-to-even from the exact value.
pub fn to_decimal(x: &ExactRatio, digits: u32) -> Result<String> {
    if digits > MAX_DECIMAL_DIGITS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_DECIMAL_DIGITS} decimal digits, got {digits}"
        )));
    }
    let scale = num_traits::pow(ExactInt::from(10u32), digits as usize);
    let num = x.numer() * &scale;
    let den = x.denom();
    // den > 0, so div_mod_floor gives 0 <= rem < den.
    let (mut q, rem) = num.div_mod_floor(den);
    let twice: ExactInt = rem * 2u32;
    match twice.cmp(den) {
        core::cmp::Ordering::Greater => q += 1,
        core::cmp::Ordering::Equal if q.is_odd() => q += 1,
        _ => {}
    }

    let negative = q.is_negative();
    let mag = q.abs().to_string();
    let digits = digits as usize;
    let mut out = String::with_capacity(mag.len() + 3);
    if negative {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&mag);
    } else {
        let padded = if mag.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = padded.len() - digits;
        out.push_str(&padded[..split]);
        out.push('.');
        out.push_str(&padded[split..]);
    }
    Ok(out)
}

/// Parses the output of [`to_decimal`] back into an exact rational.
pub fn parse_decimal(s: &str) -> Option<ExactRatio> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits: String = [int_part, frac_part].concat();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut numer: ExactInt = digits.parse().ok()?;
    if neg {
        numer = -numer;
    }
    let denom = num_traits::pow(ExactInt::from(10u32), frac_part.len());
    Some(ExactRatio::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn ratio(n: i64, d: i64) -> ExactRatio {
        ExactRatio::new(n.into(), d.into())
    }

    /// Counts r-subsets of an n-set by walking all n-bit masks.
    fn subset_count(n: u32, r: u32) -> u64 {
        (0u64..(1u64 << n)).filter(|m| m.count_ones() == r).count() as u64
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(52, 2), ExactInt::from(1326));
        assert_eq!(binomial(8, 0), ExactInt::from(1));
        assert_eq!(binomial(8, 4), ExactInt::from(70));
        assert_eq!(binomial(3, 5), ExactInt::from(0));
        assert_eq!(binomial(0, 0), ExactInt::from(1));
    }

    #[test]
    fn binomial_matches_subset_enumeration() {
        for n in 0..=16u32 {
            for r in 0..=n {
                assert_eq!(
                    binomial(n as u64, r as u64),
                    subset_count(n, r).into(),
                    "C({n},{r})"
                );
            }
        }
    }

    #[test]
    fn binomial_matches_pascal_triangle_to_60() {
        let mut row: Vec<ExactInt> = alloc::vec![ExactInt::one()];
        for n in 1..=60u64 {
            let mut next = alloc::vec![ExactInt::one(); n as usize + 1];
            for r in 1..n as usize {
                next[r] = &row[r - 1] + &row[r];
            }
            row = next;
            for (r, value) in row.iter().enumerate() {
                assert_eq!(&binomial(n, r as u64), value);
            }
        }
    }

    #[test]
    fn pascal_identity_and_symmetry_to_200() {
        for n in 1..=200u64 {
            for r in 1..=n {
                assert_eq!(binomial(n, r), binomial(n - 1, r - 1) + binomial(n - 1, r));
                assert_eq!(binomial(n, r), binomial(n, n - r));
            }
        }
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(
            is_prime_power(13).unwrap(),
            Some(PrimePowerWitness {
                base: 13,
                exponent: 1
            })
        );
        assert_eq!(
            is_prime_power(16).unwrap(),
            Some(PrimePowerWitness {
                base: 2,
                exponent: 4
            })
        );
        assert_eq!(is_prime_power(12).unwrap(), None);
        assert_eq!(is_prime_power(1).unwrap(), None);
        assert!(is_prime_power(0).is_err());
    }

    #[test]
    fn prime_power_agrees_with_factorization() {
        for k in 2..=10_000u64 {
            let mut factors = Vec::new();
            let mut n = k;
            let mut p = 2;
            while n > 1 {
                if n % p == 0 {
                    factors.push(p);
                    while n % p == 0 {
                        n /= p;
                    }
                }
                p += 1;
            }
            let expected = factors.len() == 1;
            let got = is_prime_power(k).unwrap();
            assert_eq!(got.is_some(), expected, "k={k}");
            if let Some(w) = got {
                assert_eq!(w.value(), k);
                assert_eq!(w.base, factors[0]);
            }
        }
    }

    #[test]
    fn decimal_examples() {
        assert_eq!(to_decimal(&ratio(1, 2), 0).unwrap(), "0");
        assert_eq!(to_decimal(&ratio(3, 2), 0).unwrap(), "2");
        assert_eq!(to_decimal(&ratio(5, 2), 0).unwrap(), "2");
        assert_eq!(to_decimal(&ratio(70, 14), 2).unwrap(), "5.00");
        assert_eq!(to_decimal(&ratio(1, 8), 2).unwrap(), "0.12");
        assert_eq!(to_decimal(&ratio(3, 8), 2).unwrap(), "0.38");
        assert_eq!(to_decimal(&ratio(-1, 3), 3).unwrap(), "-0.333");
        assert_eq!(to_decimal(&ratio(-1, 1000), 2).unwrap(), "0.00");
        assert_eq!(to_decimal(&ratio(-5, 2), 0).unwrap(), "-2");
        assert!(to_decimal(&ratio(1, 3), 51).is_err());
    }

    #[test]
    fn strict_floor() {
        assert_eq!(greatest_integer_below(&ratio(5, 1)), ExactInt::from(4));
        assert_eq!(greatest_integer_below(&ratio(11, 2)), ExactInt::from(5));
        assert_eq!(greatest_integer_below(&ratio(-1, 2)), ExactInt::from(-1));
    }

    proptest! {
        #[test]
        fn decimal_is_within_half_ulp(n in -1_000_000i64..1_000_000, d in 1i64..100_000, digits in 0u32..12) {
            let x = ratio(n, d);
            let s = to_decimal(&x, digits).unwrap();
            let back = parse_decimal(&s).unwrap();
            let half_ulp = ExactRatio::new(5.into(), num_traits::pow(ExactInt::from(10), digits as usize + 1));
            prop_assert!((back - x).abs() <= half_ulp);
        }
    }
}
