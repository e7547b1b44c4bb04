//! Small expression trees over the rationals, for checking polynomial and
//! rational-function identities between formula variants.

use std::ops;

use num_traits::Zero;

use crate::arith::{pow, rat, ratio, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn int(n: i64) -> Self {
        Expr::Const(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Expr::Const(ratio(n, d))
    }

    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn pow(self, e: u32) -> Self {
        Expr::Pow(Box::new(self), e)
    }

    /// Sum of the items; zero when empty.
    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Self {
        items.into_iter().reduce(|a, b| a + b).unwrap_or_else(|| Expr::int(0))
    }

    /// Product of the items; one when empty.
    pub fn product(items: impl IntoIterator<Item = Expr>) -> Self {
        items.into_iter().reduce(|a, b| a * b).unwrap_or_else(|| Expr::int(1))
    }

    /// Value at `point`; `None` when some division hits zero.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        Some(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(i) => point[*i].clone(),
            Expr::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Expr::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            Expr::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            Expr::Div(a, b) => {
                let den = b.eval(point)?;
                if den.is_zero() {
                    return None;
                }
                a.eval(point)? / den
            }
            Expr::Neg(a) => -a.eval(point)?,
            Expr::Pow(a, e) => pow(&a.eval(point)?, *e),
        })
    }

    /// Upper bounds on the total degrees of a numerator and denominator for
    /// which `self = num / den` as rational functions.
    pub fn degree_bounds(&self) -> (u32, u32) {
        match self {
            Expr::Const(_) => (0, 0),
            Expr::Var(_) => (1, 0),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (na, da) = a.degree_bounds();
                let (nb, db) = b.degree_bounds();
                ((na + db).max(nb + da), da + db)
            }
            Expr::Mul(a, b) => {
                let (na, da) = a.degree_bounds();
                let (nb, db) = b.degree_bounds();
                (na + nb, da + db)
            }
            Expr::Div(a, b) => {
                let (na, da) = a.degree_bounds();
                let (nb, db) = b.degree_bounds();
                (na + db, da + nb)
            }
            Expr::Neg(a) => a.degree_bounds(),
            Expr::Pow(a, e) => {
                let (n, d) = a.degree_bounds();
                (n * e, d * e)
            }
        }
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// All exponent vectors of length `n` with entry sum at most `max`.
fn simplex(n: usize, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for mut rest in simplex(n - 1, max - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Decides `lhs == rhs` as rational functions in `variables.len()` variables.
///
/// With `lhs - rhs = P / Q`, the numerator `P` has total degree at most `D`
/// (from [`Expr::degree_bounds`]). A polynomial of total degree `<= D` that
/// vanishes on the lattice simplex `{x0 + a : a_i >= 0, sum a_i <= D}` is
/// zero, so equality on that lattice is a proof. If the lattice meets a pole
/// it is shifted and retried.
pub fn identity_check(lhs: &Expr, rhs: &Expr, variables: &[&str]) -> Result<bool> {
    let (nl, dl) = lhs.degree_bounds();
    let (nr, dr) = rhs.degree_bounds();
    let bound = (nl + dr).max(nr + dl);
    let lattice = simplex(variables.len(), bound);
    'shift: for attempt in 0..32i64 {
        // distinct per-variable offsets, moved by a non-integer step each retry
        let base: Vec<Rational> = (0..variables.len() as i64)
            .map(|i| ratio(3 * i + 2, 1) + ratio(attempt * 7, 11 + i))
            .collect();
        for a in &lattice {
            let point: Vec<Rational> = a.iter().zip(&base).map(|(&s, b)| b + rat(s as i64)).collect();
            match (lhs.eval(&point), rhs.eval(&point)) {
                (Some(x), Some(y)) => {
                    if x != y {
                        return Ok(false);
                    }
                }
                _ => continue 'shift,
            }
        }
        return Ok(true);
    }
    Err(Error::Domain("could not find a pole-free sampling lattice".into()))
}
