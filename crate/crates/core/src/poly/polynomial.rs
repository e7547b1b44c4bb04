use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_fraction, pow, Rational};
use crate::error::{Error, Result};
use crate::FractionJson;

/// Polynomial over the rationals in a fixed, named list of variables.
/// Exponent vectors are dense over that list; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    variables: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultivariatePolynomial {
    pub fn zero(variables: &[&str]) -> Self {
        Self { variables: variables.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(variables: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(variables);
        let n = p.nvars();
        p.add_term(vec![0; n], c);
        p
    }

    /// The polynomial consisting of variable `i`.
    pub fn var(variables: &[&str], i: usize) -> Self {
        let mut p = Self::zero(variables);
        let mut e = vec![0; p.nvars()];
        e[i] = 1;
        p.add_term(e, Rational::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, combining duplicates.
    pub fn from_terms(variables: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(variables);
        for (e, c) in terms {
            if e.len() != p.nvars() {
                return Err(Error::Range(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    p.nvars()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.variables, other.variables, "polynomials over different variables");
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// True iff the variable occurs in some term.
    pub fn mentions(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self { variables: self.variables.clone(), terms: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = Self { variables: self.variables.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(&self.var_refs(), Rational::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    fn var_refs(&self) -> Vec<&str> {
        self.variables.iter().map(String::as_str).collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars(), "evaluation point has the wrong arity");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&x, v)| if x == 0 { acc } else { acc * pow(v, x) })
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Long division in variable `var`, coefficients in the other variables.
    /// The divisor's leading coefficient in `var` must be a non-zero constant.
    /// Returns `(quotient, remainder)` with `deg_var(remainder) < deg_var(divisor)`.
    pub fn div_rem_in(&self, var: usize, divisor: &Self) -> Result<(Self, Self)> {
        self.same_ring(divisor);
        let dd = divisor
            .degree_in(var)
            .ok_or_else(|| Error::Range("division by the zero polynomial".into()))?;
        let lead: Vec<(&Vec<u32>, &Rational)> = divisor.terms.iter().filter(|(e, _)| e[var] == dd).collect();
        let lead_c = match lead.as_slice() {
            [(e, c)] if e.iter().enumerate().all(|(i, &x)| i == var || x == 0) => (*c).clone(),
            _ => {
                return Err(Error::Range(
                    "divisor leading coefficient must be a constant".into(),
                ))
            }
        };
        let mut quotient = Self::zero(&self.var_refs());
        let mut rem = self.clone();
        while let Some(rd) = rem.degree_in(var) {
            if rd < dd {
                break;
            }
            // peel every term of rem with x_var degree rd
            let top: Vec<(Vec<u32>, Rational)> = rem
                .terms
                .iter()
                .filter(|(e, _)| e[var] == rd)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect();
            let mut step = Self::zero(&self.var_refs());
            for (mut e, c) in top {
                e[var] -= dd;
                step.add_term(e, c / &lead_c);
            }
            rem = rem.sub(&step.mul(divisor));
            quotient = quotient.add(&step);
        }
        Ok((quotient, rem))
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exponents: e.clone(),
                    coefficient: FractionJson::from(c),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolynomialJson) -> Result<Self> {
        let vars: Vec<&str> = j.variables.iter().map(String::as_str).collect();
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.exponents.clone(), Rational::try_from(&t.coefficient)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(&vars, terms)
    }

    fn display_order(&self) -> Vec<(&Vec<u32>, &Rational)> {
        // graded: highest total degree first, then by exponents descending
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| {
                    if x == 1 {
                        self.variables[v].clone()
                    } else {
                        format!("{}^{x}", self.variables[v])
                    }
                })
                .collect();
            let coeff = if mag.is_integer() { mag.numer().to_string() } else { format_fraction(&mag) };
            if monomial.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `{"variables": [...], "terms": [{"exponents": [...], "num": ..., "den": ...}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub variables: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    #[serde(flatten)]
    pub coefficient: FractionJson,
}

/// True iff the total degree of `p` is at most `c` (the zero polynomial passes).
pub fn assert_degree_bound(p: &MultivariatePolynomial, c: u32) -> bool {
    p.total_degree().is_none_or(|d| d <= c)
}
