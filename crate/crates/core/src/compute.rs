//! Request dispatch across the three evaluation routes and cross-checking.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{rat, Rational};
use crate::error::{Error, Result};
use crate::formulas::{h1_formula, hg_k0_descendant, j_0_e1, j_e0_0};
use crate::profile::{Profile, ProfileJson};
use crate::recursion::Recursions;
use crate::trop::{tree_contributions, tropical_count};
use crate::FractionJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tropical,
    Recursion,
    Formula,
    Auto,
}

impl Method {
    pub const CONCRETE: [Method; 3] = [Method::Formula, Method::Recursion, Method::Tropical];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tropical => "tropical",
            Method::Recursion => "recursion",
            Method::Formula => "formula",
            Method::Auto => "auto",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tropical" => Ok(Method::Tropical),
            "recursion" => Ok(Method::Recursion),
            "formula" => Ok(Method::Formula),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::Validation(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputeRequest {
    pub profile: Profile,
    pub method: Method,
}

/// Outcome of one evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub request: ProfileJson,
    pub requested: Method,
    pub method: Method,
    pub k: i64,
    pub value: FractionJson,
    #[serde(rename = "elapsedUs")]
    pub elapsed_us: u64,
}

impl ResultRecord {
    pub fn value(&self) -> Result<Rational> {
        Rational::try_from(&self.value)
    }
}

/// Which closed form covers the profile, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaCase {
    /// Genus zero, exponent only at the `d` end (possibly zero).
    JE0,
    /// Genus zero, one exponent at negative end `index` (1-based).
    J0E1 { index: usize },
    /// Genus one, no exponents.
    GenusOne,
    /// `k = 0`, exponent only at the `d` end.
    SeriesK0,
}

pub fn formula_case(p: &Profile) -> Option<FormulaCase> {
    let psi = p.psi();
    let carrying: Vec<usize> = p.psi_carrying();
    match p.genus() {
        0 if carrying.is_empty() => Some(FormulaCase::JE0),
        0 if carrying.len() == 1 && psi[0] == 0 => Some(FormulaCase::J0E1 { index: carrying[0] }),
        0 => None,
        1 if p.is_primary() => Some(FormulaCase::GenusOne),
        _ if p.k() == 0 && carrying.is_empty() => Some(FormulaCase::SeriesK0),
        _ => None,
    }
}

pub fn evaluate_formula(p: &Profile) -> Result<Rational> {
    let m = p.m() as u32;
    let (d, k) = (rat(p.d()), rat(p.k()));
    match formula_case(p) {
        Some(FormulaCase::JE0) => j_e0_0(m, p.psi()[0], &d, &k),
        Some(FormulaCase::J0E1 { index }) => j_0_e1(m, p.psi()[index], &d, &rat(p.nu()[index - 1]), &k),
        Some(FormulaCase::GenusOne) => h1_formula(p.d(), p.nu(), p.k()),
        Some(FormulaCase::SeriesK0) => hg_k0_descendant(p.genus(), p.psi()[0], p.d(), p.nu()),
        None => Err(Error::Unsupported("no closed form covers this profile".into())),
    }
}

/// True when `method` can evaluate `p` (it may still hit a domain error).
pub fn applicable(method: Method, p: &Profile) -> bool {
    match method {
        Method::Formula => formula_case(p).is_some(),
        Method::Recursion => p.genus() == 0 || (p.is_primary() && p.k() >= 0),
        Method::Tropical => p.genus() == 0,
        Method::Auto => Method::CONCRETE.iter().any(|&m| applicable(m, p)),
    }
}

/// The method `auto` resolves to: formula, then recursion, then tropical.
pub fn resolve(method: Method, p: &Profile) -> Result<Method> {
    let chosen = match method {
        Method::Auto => Method::CONCRETE.into_iter().find(|&m| applicable(m, p)),
        m => applicable(m, p).then_some(m),
    };
    chosen.ok_or_else(|| {
        Error::Unsupported(format!("method {method} does not cover genus {} with psi {:?}", p.genus(), p.psi()))
    })
}

pub fn evaluate(method: Method, p: &Profile, engine: &Recursions) -> Result<Rational> {
    match resolve(method, p)? {
        Method::Formula => evaluate_formula(p),
        Method::Recursion if p.genus() == 0 => engine.h0(p),
        Method::Recursion => engine.hg_onepart(p),
        Method::Tropical => tropical_count(p),
        Method::Auto => unreachable!("resolve never returns auto"),
    }
}

pub fn compute(req: &ComputeRequest, engine: &Recursions) -> Result<ResultRecord> {
    let used = resolve(req.method, &req.profile)?;
    let start = Instant::now();
    let value = evaluate(used, &req.profile, engine)?;
    Ok(ResultRecord {
        request: req.profile.to_json(),
        requested: req.method,
        method: used,
        k: req.profile.k(),
        value: FractionJson::from(&value),
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckEntry {
    pub method: Method,
    pub value: FractionJson,
    #[serde(rename = "elapsedUs")]
    pub elapsed_us: u64,
}

/// Per-tree tropical contribution, dumped on mismatch.
#[derive(Debug, Clone, Serialize)]
pub struct TreeDiagnostic {
    pub ends: Vec<Vec<usize>>,
    pub children: Vec<Vec<usize>>,
    #[serde(rename = "linearExtensions")]
    pub linear_extensions: String,
    #[serde(rename = "multiplicityPerCover")]
    pub multiplicity: FractionJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub request: ProfileJson,
    pub k: i64,
    pub entries: Vec<CrosscheckEntry>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<TreeDiagnostic>,
}

/// Runs every applicable method and compares the values exactly.
pub fn crosscheck(p: &Profile, engine: &Recursions) -> Result<CrosscheckReport> {
    let methods: Vec<Method> = Method::CONCRETE.into_iter().filter(|&m| applicable(m, p)).collect();
    if methods.len() < 2 {
        return Err(Error::Unsupported(format!(
            "only {} method(s) cover this profile; nothing to cross-check",
            methods.len()
        )));
    }
    let mut entries = Vec::new();
    let mut values = Vec::new();
    for method in methods {
        let start = Instant::now();
        let v = evaluate(method, p, engine)?;
        entries.push(CrosscheckEntry {
            method,
            value: FractionJson::from(&v),
            elapsed_us: start.elapsed().as_micros() as u64,
        });
        values.push(v);
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let diagnostics = if !agree && p.genus() == 0 {
        tree_contributions(p)?
            .into_iter()
            .map(|(tree, ext, mult)| TreeDiagnostic {
                ends: tree.vertices.iter().map(|v| v.ends.clone()).collect(),
                children: tree.vertices.iter().map(|v| v.children.clone()).collect(),
                linear_extensions: ext.to_string(),
                multiplicity: FractionJson::from(&mult),
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(CrosscheckReport { request: p.to_json(), k: p.k(), entries, agree, diagnostics })
}
