//! Exact integer and rational helpers.
//!
//! Every invariant value in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `num/den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `n!`
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `n choose r`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `top! / (parts[0]! ... parts[r]! (top - sum(parts))!)`.
pub fn multinomial(top: u64, parts: &[u64]) -> Result<BigInt> {
    let used: u64 = parts.iter().sum();
    if used > top {
        return Err(Error::Range(format!(
            "multinomial parts sum to {used}, exceeding {top}"
        )));
    }
    // product of binomials avoids the big intermediate factorials
    let mut acc = BigInt::one();
    let mut remaining = top;
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    Ok(acc)
}

/// Renders `num/den`, always with an explicit denominator (`30/1`).
pub fn format_fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `a`, `-a` or `a/b` into a rational.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Approximate decimal rendering with `digits` places, computed by exact
/// long division. Only for display.
pub fn format_decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();
    let (int_part, mut rem) = num.div_rem(&den);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= 10;
            let (digit, r) = rem.div_rem(&den);
            out.push(char::from(b'0' + digit.to_u8().unwrap_or(0)));
            rem = r;
        }
    }
    out
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Integer power with a possibly negative exponent; panics on `0^-n`.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        pow(base, exp as u32)
    } else {
        pow(&base.recip(), (-exp) as u32)
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}
