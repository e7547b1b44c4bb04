//! Truncated formal power series over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{big, factorial, format_fraction, pow, Rational};
use crate::error::{Error, Result};

/// `sum_{i < order} c_i z^i`, with everything from `z^order` on discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Series with the given coefficients; the truncation order is their count.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = Rational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^i`; asking at or past the truncation order is an error
    /// since that information was discarded.
    pub fn coeff(&self, i: usize) -> Result<&Rational> {
        self.coeffs
            .get(i)
            .ok_or(Error::SeriesIndex { index: i, order: self.order() })
    }

    fn check_orders(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Range(format!(
                "series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    /// Cauchy product, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Formal inverse; the constant term must be non-zero.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let c0 = match self.coeffs.first() {
            Some(c) if !c.is_zero() => c.clone(),
            _ => return Err(Error::NonUnitSeries),
        };
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for i in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=i {
                acc += &self.coeffs[j] * &out[i - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// `self / other`; `other` needs an invertible constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        self.mul(&other.inverse()?)
    }

    /// Substitutes `z -> c z`.
    pub fn scale_arg(&self, c: &Rational) -> Self {
        let mut factor = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * &factor;
                factor *= c;
                v
            })
            .collect();
        Self { coeffs }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_fraction(c))?,
                1 => write!(f, "({})*z", format_fraction(c))?,
                _ => write!(f, "({})*z^{i}", format_fraction(c))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order())
    }
}

/// `S(z) = sinh(z/2) / (z/2)` to the given order: the coefficient of `z^{2j}`
/// is `1 / (2^{2j} (2j+1)!)` and odd coefficients vanish.
pub fn s_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..order)
        .map(|i| {
            if i % 2 == 1 {
                Rational::zero()
            } else {
                let den = factorial(i as u64 + 1) * pow(&big(2), i as u32).to_integer();
                Rational::new(1.into(), den)
            }
        })
        .collect();
    TruncatedSeries { coeffs }
}

/// `[z^{2g}] prod_j S(nu_j z) / S(z)`, computed to order `2g + 1`.
pub fn s_quotient_coeff(genus: u32, nu: &[u64]) -> Result<Rational> {
    let order = 2 * genus as usize + 1;
    let s = s_series(order);
    let mut num = TruncatedSeries::one(order);
    for &v in nu {
        num = num.mul(&s.scale_arg(&big(v)))?;
    }
    Ok(num.div(&s)?.coeff(2 * genus as usize)?.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn series(v: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::new(v.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn s_series_displayed_expansion() {
        assert_eq!(s_series(1), series(&[(1, 1)]));
        assert_eq!(s_series(3), series(&[(1, 1), (0, 1), (1, 24)]));
        assert_eq!(
            s_series(5),
            series(&[(1, 1), (0, 1), (1, 24), (0, 1), (1, 1920)])
        );
        assert_eq!(*s_series(7).coeff(6).unwrap(), ratio(1, 322560));
    }

    #[test]
    fn s_times_half_z_matches_sinh() {
        // z/2 * S(z) = sinh(z/2): coefficient of z^{2j+1} is 1/(2^{2j+1} (2j+1)!)
        let s = s_series(12);
        for j in 0..6u32 {
            let shifted = s.coeff(2 * j as usize).unwrap() / rat(2);
            let expected = Rational::new(
                1.into(),
                factorial(2 * j as u64 + 1) * num_bigint::BigInt::from(2u64.pow(2 * j + 1)),
            );
            assert_eq!(shifted, expected);
        }
    }

    #[test]
    fn scale_arg_examples() {
        let s3 = s_series(3);
        assert_eq!(s3.scale_arg(&rat(1)), s3);
        assert_eq!(s3.scale_arg(&rat(2)), series(&[(1, 1), (0, 1), (4, 24)]));
        // direct scaling oracle: c^i * a_i
        let s5 = s_series(5);
        let scaled = s5.scale_arg(&rat(3));
        for i in 0..5 {
            assert_eq!(
                scaled.coeff(i).unwrap(),
                &(s5.coeff(i).unwrap() * pow(&rat(3), i as u32))
            );
        }
        assert_eq!(
            scaled,
            series(&[(1, 1), (0, 1), (9, 24), (0, 1), (81, 1920)])
        );
    }

    #[test]
    fn mul_div_coeff() {
        let a = series(&[(1, 1), (1, 1), (0, 1)]);
        assert_eq!(a.mul(&a).unwrap(), series(&[(1, 1), (2, 1), (1, 1)]));

        let s = s_series(6);
        assert_eq!(s.div(&s).unwrap(), TruncatedSeries::one(6));

        // (1 + d^2 z^2/24)(1 - z^2/24) -> (d^2 - 1)/24 at z^2
        for d in 1..8i64 {
            let q = s.scale_arg(&rat(d)).div(&s).unwrap();
            assert_eq!(*q.coeff(2).unwrap(), ratio(d * d - 1, 24));
        }
    }

    #[test]
    fn errors() {
        let s = s_series(3);
        assert_eq!(s.coeff(3), Err(Error::SeriesIndex { index: 3, order: 3 }));
        let z = series(&[(0, 1), (1, 1), (0, 1)]);
        assert_eq!(s.div(&z), Err(Error::NonUnitSeries));
        assert!(s.mul(&s_series(4)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s_series(3).to_string(), "1/1 + (1/24)*z^2 + O(z^3)");
    }
}
