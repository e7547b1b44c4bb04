//! Closed-form evaluation of the known families of invariants.
//!
//! All half-integer factors `d - j k/2` are computed in the rationals; the
//! results are genuinely rational (e.g. `11/24`), never rounded.

use num_traits::Zero;

use crate::arith::{big, factorial, pow, rat, ratio, Rational};
use crate::error::{Error, Result};
use crate::poly::j_0_e1_polynomial;
use crate::profile::Profile;
use crate::recursion::h0_base_value;
use crate::series::s_quotient_coeff;

fn half_step(d: &Rational, j: i64, k: &Rational) -> Rational {
    d - k * ratio(j, 2)
}

fn product(d: &Rational, k: &Rational, from: i64, to: i64) -> Rational {
    (from..=to).map(|j| half_step(d, j, k)).product()
}

/// `J^m_{e0,0} = (m-1)!/(e0+1)! prod_{j=e0+1}^{m-2} (d - j k/2)`.
pub fn j_e0_0(m: u32, e0: u32, d: &Rational, k: &Rational) -> Result<Rational> {
    if m < 2 || e0 > m - 2 {
        return Err(Error::Range(format!("need m >= 2 and e0 <= m - 2, got m = {m}, e0 = {e0}")));
    }
    let lead = big(factorial(m as u64 - 1)) / big(factorial(e0 as u64 + 1));
    Ok(lead * product(d, k, e0 as i64 + 1, m as i64 - 2))
}

/// `J^m_{0,e1}` by the closed form with the quotient by `-nu1 - e1 k/2`.
/// Where that denominator vanishes the singularity is removable; the value
/// then comes from the exactly divided polynomial.
pub fn j_0_e1(m: u32, e1: u32, d: &Rational, nu1: &Rational, k: &Rational) -> Result<Rational> {
    if m < 3 || e1 < 1 || e1 > m - 2 {
        return Err(Error::Range(format!("need m >= 3 and 1 <= e1 <= m - 2, got m = {m}, e1 = {e1}")));
    }
    let (mi, e) = (m as i64, e1 as i64);
    let denominator = -nu1.clone() - k * ratio(e, 2);
    if denominator.is_zero() {
        let poly = j_0_e1_polynomial(m, e1)?;
        return Ok(poly.eval(&[d.clone(), k.clone(), nu1.clone()]));
    }
    let shifted = d - nu1;
    let first = product(&shifted, k, e + 1, mi - 1);
    let second = product(d, k, 1, mi - e - 1);
    let tail = rat(mi - e - 1) * product(d, k, 1, mi - e - 2);
    let lead = big(factorial(m as u64 - 2)) / big(factorial(e1 as u64 + 1));
    Ok(lead * (rat(e) * (first - second) / denominator + tail))
}

/// `k = 0` specialization of [`j_0_e1`], defined for `nu1 != 0`.
pub fn j_0_e1_k0(m: u32, e1: u32, d: &Rational, nu1: &Rational) -> Result<Rational> {
    if m < 3 || e1 < 1 || e1 > m - 2 {
        return Err(Error::Range(format!("need m >= 3 and 1 <= e1 <= m - 2, got m = {m}, e1 = {e1}")));
    }
    if nu1.is_zero() {
        return Err(Error::Domain("the k = 0 form divides by nu1".into()));
    }
    let p = m - 1 - e1;
    let lead = big(factorial(m as u64 - 2)) / big(factorial(e1 as u64 + 1));
    let quotient = (pow(d, p) - pow(&(d - nu1), p)) / nu1;
    Ok(lead * (rat(e1 as i64) * quotient + rat(p as i64) * pow(d, p - 1)))
}

/// `nu1 = 0` specialization of [`j_0_e1`].
pub fn j_0_e1_nu10(m: u32, e1: u32, d: &Rational, k: &Rational) -> Result<Rational> {
    if m < 3 || e1 < 1 || e1 > m - 2 {
        return Err(Error::Range(format!("need m >= 3 and 1 <= e1 <= m - 2, got m = {m}, e1 = {e1}")));
    }
    let (mi, e) = (m as i64, e1 as i64);
    let lead = big(factorial(m as u64 - 2)) / big(factorial(e1 as u64 + 1));
    let sum: Rational = (1..=e + 1)
        .map(|i| (0..=mi - e - 3).map(|j| half_step(d, i + j, k)).product::<Rational>())
        .sum();
    Ok(lead * rat(mi - e - 1) * sum)
}

/// Genus-zero base case `(m-1)! prod_{j=1}^{m-2} (d - j k/2)`.
pub fn h0_base(m: u32, d: &Rational, k: &Rational) -> Result<Rational> {
    if m < 1 {
        return Err(Error::Range("need m >= 1".into()));
    }
    if m == 1 {
        // empty product, 0! = 1
        return Ok(rat(1));
    }
    Ok(h0_base_value(m, d, k))
}

fn pair_sum(x: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for s in 0..x.len() {
        for t in (s + 1)..x.len() {
            acc += &x[s] * &x[t];
        }
    }
    acc
}

/// Genus-one closed form evaluated at an arbitrary point; `nu.len() = m`.
pub fn h1_value(d: &Rational, nu: &[Rational], k: &Rational) -> Rational {
    let m = nu.len() as i64;
    let shifted: Vec<Rational> = nu.iter().map(|v| v + k).collect();
    let lead = big(factorial(m as u64 + 1)) / rat(24);
    let prod = product(d, k, 2, m);
    let cube = pow(&(d - k), 3);
    let bracket = cube - half_step(d, 1, k) * (rat(1) + rat(2) * pair_sum(&shifted));
    lead * prod * bracket
}

/// The equivalent symmetric-function form of the genus-one closed form.
pub fn h1_value_alt(d: &Rational, nu: &[Rational], k: &Rational) -> Rational {
    let m = nu.len() as i64;
    let squares: Rational = nu.iter().map(|v| pow(&(v + k), 2)).sum();
    let lead = big(factorial(m as u64 + 1)) / rat(24);
    let first = (squares - rat(1)) * product(d, k, 1, m);
    let second = k * pow(&(d - k), 2) / rat(2) * product(d, k, 2, m);
    lead * (first - second)
}

/// `H_1((d, -nu), 0)` in closed form. The leak is re-derived from the
/// profile and must equal `k`.
pub fn h1_formula(d: i64, nu: &[i64], k: i64) -> Result<Rational> {
    let p = Profile::validate(1, d, nu, &vec![0; nu.len() + 1])?;
    if p.k() != k {
        return Err(Error::Validation(format!(
            "balancing gives k = {}, not the supplied k = {k}",
            p.k()
        )));
    }
    let nu: Vec<Rational> = nu.iter().map(|&v| rat(v)).collect();
    Ok(h1_value(&rat(d), &nu, &rat(k)))
}

/// Genus `g`, `k = 0`, exponent `e0` at the `d` end only:
/// `(2g-1+m)!/(e0+1)! d^{2g-2+m-e0} [z^{2g}] prod_j S(nu_j z) / S(z)`.
pub fn hg_k0_descendant(genus: u32, e0: u32, d: i64, nu: &[i64]) -> Result<Rational> {
    let m = nu.len();
    let mut psi = vec![0; m + 1];
    psi[0] = e0;
    let p = Profile::validate(genus, d, nu, &psi)?;
    if p.k() != 0 {
        return Err(Error::Unsupported(format!("the series formula needs k = 0, got k = {}", p.k())));
    }
    let nu_u: Vec<u64> = nu.iter().map(|&v| v as u64).collect();
    let top = 2 * genus as i64 - 1 + m as i64;
    let lead = big(factorial(top as u64)) / big(factorial(e0 as u64 + 1));
    let dpow = pow(&rat(d), (top - 1 - e0 as i64) as u32);
    Ok(lead * dpow * s_quotient_coeff(genus, &nu_u)?)
}
