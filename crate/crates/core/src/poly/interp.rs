//! Reconstruction of genus-zero invariants as polynomials in
//! `(d, k, nu_i : e_i > 0)` from exact samples of the recursion.

use num_traits::{One, Zero};

use crate::arith::{big, factorial, rat, ratio, Rational};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::recursion::Recursions;

use super::polynomial::MultivariatePolynomial;

/// Where a sampling lattice starts. Points are `(R, k, nu_psi) = start + a`
/// with `a >= 0` and `sum a <= c`, where `R` is the total weight of the
/// psi-free ends and `d = k (m - 1) + sum nu_psi + R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleGrid {
    pub residual_offset: i64,
    pub k_start: i64,
    pub nu_start: i64,
}

impl SampleGrid {
    /// The smallest admissible lattice.
    pub fn primary() -> Self {
        Self { residual_offset: 0, k_start: 0, nu_start: 1 }
    }

    /// A lattice disjoint from [`SampleGrid::primary`] for branch degree `c`
    /// (its `k` coordinates start past the primary lattice's).
    pub fn secondary(c: u32) -> Self {
        let shift = c as i64 + 2;
        Self { residual_offset: shift + 1, k_start: shift, nu_start: shift }
    }
}

/// Variable names `d, k, nu<i>` for the psi-carrying markings `i`.
pub fn h0_variables(carrying: &[usize]) -> Vec<String> {
    let mut v = vec!["d".to_string(), "k".to_string()];
    v.extend(carrying.iter().map(|i| format!("nu{i}")));
    v
}

/// Monomial exponent vectors of total degree `<= c` in `n` variables.
fn monomials(n: usize, c: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=c {
        for mut rest in monomials(n - 1, c - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A genus-zero profile with the given leak, psi-carrying weights and
/// psi-free total `residual`, split as `(residual - (f - 1), 1, ..., 1)`.
pub fn sample_profile(psi: &[u32], k: i64, carrying_nu: &[i64], residual: i64) -> Result<Profile> {
    let m = psi.len() - 1;
    let mut nu = Vec::with_capacity(m);
    let mut carried = carrying_nu.iter();
    let free = psi[1..].iter().filter(|&&e| e == 0).count() as i64;
    let mut first_free = true;
    for &e in &psi[1..] {
        if e > 0 {
            nu.push(*carried.next().expect("one weight per carrying marking"));
        } else if first_free {
            nu.push(residual - (free - 1));
            first_free = false;
        } else {
            nu.push(1);
        }
    }
    let d = k * (m as i64 - 1) + nu.iter().sum::<i64>();
    Profile::validate(0, d, &nu, psi)
}

/// Solves the exact linear system `rows * x = rhs` (more rows than unknowns
/// allowed). Fails if it is inconsistent or does not pin down `x`.
fn solve(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, unknowns: usize) -> Result<Vec<Rational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::InconsistentSamples(format!(
                "sampling lattice does not determine monomial {col}"
            )));
        };
        rows.swap(pivot_row, found);
        rhs.swap(pivot_row, found);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        rhs[pivot_row] *= &inv;
        let pivot = rows[pivot_row].clone();
        for r in 0..rows.len() {
            if r == pivot_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for (x, y) in rows[r][col..].iter_mut().zip(&pivot[col..]) {
                *x -= &factor * y;
            }
            let delta = &factor * &rhs[pivot_row];
            rhs[r] -= delta;
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if let Some(r) = (pivot_row..rows.len()).find(|&r| !rhs[r].is_zero()) {
        return Err(Error::InconsistentSamples(format!(
            "sample {r} disagrees with every polynomial of the expected degree"
        )));
    }
    Ok(pivots.into_iter().map(|r| rhs[r].clone()).collect())
}

/// The unique polynomial of total degree `<= c` in `(d, k, nu_i : e_i > 0)`
/// that agrees with the genus-zero recursion on `grid`. One extra layer of
/// lattice points (`sum a = c + 1`) over-determines the system and catches
/// any sample that does not fit.
pub fn interpolate_h0_on(
    engine: &Recursions,
    psi: &[u32],
    grid: SampleGrid,
) -> Result<MultivariatePolynomial> {
    let m = psi.len() - 1;
    if m < 2 {
        return Err(Error::Range("need at least two negative ends".into()));
    }
    let total: u32 = psi.iter().sum();
    if total as usize > m - 2 {
        return Err(Error::Range(format!("|e| = {total} exceeds m - 2 = {}", m - 2)));
    }
    let c = (m - 2) as u32 - total;
    let carrying: Vec<usize> = (1..=m).filter(|&i| psi[i] > 0).collect();
    let u = carrying.len();
    let names = h0_variables(&carrying);
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let basis = monomials(u + 2, c);

    let min_residual = (m - u) as i64;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // lattice coordinates: (R, k, nu_psi...)
    for a in monomials(u + 2, c + 1) {
        let residual = min_residual + grid.residual_offset + a[0] as i64;
        let k = grid.k_start + a[1] as i64;
        let nu_psi: Vec<i64> = a[2..].iter().map(|&x| grid.nu_start + x as i64).collect();
        let p = sample_profile(psi, k, &nu_psi, residual)?;
        let value = engine.h0(&p)?;
        let mut point = vec![rat(p.d()), rat(k)];
        point.extend(nu_psi.iter().map(|&v| rat(v)));
        rows.push(
            basis
                .iter()
                .map(|e| {
                    e.iter()
                        .zip(&point)
                        .fold(Rational::one(), |acc, (&x, v)| acc * crate::arith::pow(v, x))
                })
                .collect(),
        );
        rhs.push(value);
    }
    let coeffs = solve(rows, rhs, basis.len())?;
    MultivariatePolynomial::from_terms(&vars, basis.into_iter().zip(coeffs))
}

/// [`interpolate_h0_on`] with the primary lattice and a fresh engine.
pub fn interpolate_h0(m: usize, psi: &[u32]) -> Result<MultivariatePolynomial> {
    if psi.len() != m + 1 {
        return Err(Error::Range(format!("psi needs {} entries, got {}", m + 1, psi.len())));
    }
    interpolate_h0_on(&Recursions::new(), psi, SampleGrid::primary())
}

const DKN: [&str; 3] = ["d", "k", "nu1"];

fn dkn(i: usize) -> MultivariatePolynomial {
    MultivariatePolynomial::var(&DKN, i)
}

fn cst(c: Rational) -> MultivariatePolynomial {
    MultivariatePolynomial::constant(&DKN, c)
}

/// `d - shift - j k / 2` as a polynomial in `(d, k, nu1)`.
fn step(shift_nu1: bool, j: i64) -> MultivariatePolynomial {
    let mut p = dkn(0).sub(&dkn(1).scale(&ratio(j, 2)));
    if shift_nu1 {
        p = p.sub(&dkn(2));
    }
    p
}

fn product(shift_nu1: bool, from: i64, to: i64) -> MultivariatePolynomial {
    (from..=to).fold(cst(Rational::one()), |acc, j| acc.mul(&step(shift_nu1, j)))
}

/// `(m-1)!/(e0+1)! prod_{j=e0+1}^{m-2} (d - j k/2)` over `(d, k, nu1)`.
pub fn j_e0_0_polynomial(m: u32, e0: u32) -> MultivariatePolynomial {
    let lead = big(factorial(m as u64 - 1)) / big(factorial(e0 as u64 + 1));
    product(false, e0 as i64 + 1, m as i64 - 2).scale(&lead)
}

/// The `(0, e1)` closed form over `(d, k, nu1)` with the removable factor
/// `-nu1 - e1 k/2` divided out exactly. Fails if the division leaves a
/// remainder.
pub fn j_0_e1_polynomial(m: u32, e1: u32) -> Result<MultivariatePolynomial> {
    if m < 3 || e1 < 1 || e1 > m - 2 {
        return Err(Error::Range(format!("need m >= 3 and 1 <= e1 <= m - 2, got m = {m}, e1 = {e1}")));
    }
    let (m, e) = (m as i64, e1 as i64);
    let bracket = product(true, e + 1, m - 1).sub(&product(false, 1, m - e - 1));
    let denominator = dkn(2).neg().sub(&dkn(1).scale(&ratio(e, 2)));
    let (quotient, remainder) = bracket.div_rem_in(2, &denominator)?;
    if !remainder.is_zero() {
        return Err(Error::Domain(format!("non-zero remainder {remainder}")));
    }
    let tail = product(false, 1, m - e - 2).scale(&rat(m - e - 1));
    let lead = big(factorial(m as u64 - 2)) / big(factorial(e as u64 + 1));
    Ok(quotient.scale(&rat(e)).add(&tail).scale(&lead))
}
