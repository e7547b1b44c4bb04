//! Recursions obtained by cutting off the last vertex of a tropical cover.
//!
//! - [`j_rec`]: genus zero with insertions at `p_0` and `p_1` only.
//! - [`Recursions::h0`]: genus zero with arbitrary insertions.
//! - [`Recursions::hg_onepart`]: arbitrary genus, no insertions.
//!
//! The two general recursions memoize on [`MemoKey`], which sorts the
//! `(nu, e)` pairs so that reordered profiles share entries.

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use dashmap::DashMap;
use num_traits::{One, Zero};

use crate::arith::{big, binomial, factorial, multinomial, parse_fraction, rat, ratio, Rational};
use crate::error::{Error, Result};
use crate::profile::Profile;

/// First line of an on-disk memo file. Files with any other header are ignored.
pub const CACHE_HEADER: &str = "leaky-memo v1";

fn half_step(d: &Rational, j: i64, k: &Rational) -> Rational {
    // d - j k / 2
    d - k * ratio(j, 2)
}

/// `J^m_{e0,e1}(k, d, nu_1)`: genus zero, exponent `e0` at the `d` end and `e1`
/// at `nu_1`, all other exponents zero.
pub fn j_rec(m: u32, e0: u32, e1: u32, d: &Rational, nu1: &Rational, k: &Rational) -> Result<Rational> {
    if m < 2 {
        return Err(Error::Range(format!("J needs m >= 2, got {m}")));
    }
    if e0 + e1 > m - 2 {
        return Err(Error::Range(format!("e0 + e1 = {} exceeds m - 2 = {}", e0 + e1, m - 2)));
    }
    Ok(if e1 == 0 { j_e1_zero(m, e0, d, k) } else { j_general(m, e0, e1, d, nu1, k) })
}

/// `J^m_{e0,0}`, zero outside `e0 <= m - 2`.
fn j_e1_zero(m: u32, e0: u32, d: &Rational, k: &Rational) -> Rational {
    // J^m = (m-1)(d - (m-2)k/2) J^{m-1} + delta_{m-2,e0}, climbing from m = e0 + 2
    let mut acc = Rational::zero();
    for mm in (e0 + 2)..=m {
        let step = rat(mm as i64 - 1) * half_step(d, mm as i64 - 2, k);
        acc = step * acc;
        if mm - 2 == e0 {
            acc += Rational::one();
        }
    }
    acc
}

fn j_general(m: u32, e0: u32, e1: u32, d: &Rational, nu1: &Rational, k: &Rational) -> Rational {
    if m < 2 || e0 + e1 > m - 2 {
        return Rational::zero();
    }
    let mut acc = Rational::zero();
    for mm in (e0 + e1 + 2)..=m {
        let mi = mm as i64;
        // sum of the weights at ends 2..m: d - nu_1 - k (m - 1)
        let rest = d - nu1 - k * rat(mi - 1);
        let cut_with_nu1 = (big(binomial(mm as u64 - 1, e1 as u64 + 1)) * (k * rat(e1 as i64 + 1) + nu1)
            + big(binomial(mm as u64 - 2, e1 as u64)) * &rest)
            * j_e1_zero_checked(mm - e1 - 1, e0, d, k);
        let tripod = (big(binomial(mm as u64 - 1, 2)) * k + rat(mi - 2) * &rest) * &acc;
        acc = cut_with_nu1 + tripod;
        if mm - 2 == e0 + e1 {
            acc += big(binomial(mm as u64 - 2, e0 as u64));
        }
    }
    acc
}

fn j_e1_zero_checked(m: u32, e0: u32, d: &Rational, k: &Rational) -> Rational {
    if m < 2 || e0 > m - 2 {
        Rational::zero()
    } else {
        j_e1_zero(m, e0, d, k)
    }
}

/// Canonical memo key: genus, `d`, `e0`, and the sorted `(nu, e)` pairs at the
/// negative ends, tagged with the recursion family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoKey {
    pub family: Family,
    pub genus: u32,
    pub d: i64,
    pub e0: u32,
    pub ends: Vec<(i64, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Genus zero with descendants.
    H0,
    /// Any genus, no descendants.
    Hg,
}

impl MemoKey {
    pub fn new(family: Family, genus: u32, d: i64, e0: u32, mut ends: Vec<(i64, u32)>) -> Self {
        ends.sort_unstable();
        Self { family, genus, d, e0, ends }
    }

    pub fn of_profile(family: Family, p: &Profile) -> Self {
        let ends = p.nu().iter().copied().zip(p.psi()[1..].iter().copied()).collect();
        Self::new(family, p.genus(), p.d(), p.psi()[0], ends)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad memo key {s:?}"));
        let (fam, rest) = s.split_once('|').ok_or_else(bad)?;
        let family = match fam {
            "h0" => Family::H0,
            "hg" => Family::Hg,
            _ => return Err(bad()),
        };
        let mut genus = None;
        let mut d = None;
        let mut e0 = None;
        let mut ends = None;
        for field in rest.split(';') {
            let (name, value) = field.split_once('=').ok_or_else(bad)?;
            match name {
                "g" => genus = Some(value.parse().map_err(|_| bad())?),
                "d" => d = Some(value.parse().map_err(|_| bad())?),
                "e0" => e0 = Some(value.parse().map_err(|_| bad())?),
                "ends" => {
                    let mut v = Vec::new();
                    for pair in value.split(',').filter(|t| !t.is_empty()) {
                        let (a, b) = pair.split_once(':').ok_or_else(bad)?;
                        v.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
                    }
                    ends = Some(v);
                }
                _ => return Err(bad()),
            }
        }
        match (genus, d, e0, ends) {
            (Some(g), Some(d), Some(e0), Some(ends)) => Ok(Self::new(family, g, d, e0, ends)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for MemoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::H0 => "h0",
            Family::Hg => "hg",
        };
        let ends: Vec<String> = self.ends.iter().map(|(v, e)| format!("{v}:{e}")).collect();
        write!(f, "{fam}|g={};d={};e0={};ends={}", self.genus, self.d, self.e0, ends.join(","))
    }
}

/// Recursion engine with a shared memo table. Lookups and inserts may race
/// freely: values are deterministic, so the last write wins harmlessly.
#[derive(Debug)]
pub struct Recursions {
    memo: Option<DashMap<MemoKey, Rational>>,
}

impl Default for Recursions {
    fn default() -> Self {
        Self::new()
    }
}

impl Recursions {
    pub fn new() -> Self {
        Self { memo: Some(DashMap::new()) }
    }

    /// Evaluates without any memo table.
    pub fn uncached() -> Self {
        Self { memo: None }
    }

    pub fn cache_len(&self) -> usize {
        self.memo.as_ref().map_or(0, DashMap::len)
    }

    fn lookup(&self, key: &MemoKey) -> Option<Rational> {
        self.memo.as_ref()?.get(key).map(|v| v.clone())
    }

    fn store(&self, key: MemoKey, value: &Rational) {
        if let Some(m) = &self.memo {
            m.insert(key, value.clone());
        }
    }

    /// `H_0((d, -nu), e)` for any exponent vector, by cutting the last vertex.
    pub fn h0(&self, p: &Profile) -> Result<Rational> {
        if p.genus() != 0 {
            return Err(Error::Unsupported("h0 recursion needs genus 0".into()));
        }
        let ends: Vec<(i64, u32)> = p.nu().iter().copied().zip(p.psi()[1..].iter().copied()).collect();
        self.h0_inner(p.d(), p.k(), p.psi()[0], ends)
    }

    fn h0_inner(&self, d: i64, k: i64, e0: u32, ends: Vec<(i64, u32)>) -> Result<Rational> {
        let key = MemoKey::new(Family::H0, 0, d, e0, ends);
        if let Some(v) = self.lookup(&key) {
            return Ok(v);
        }
        let ends = &key.ends;
        let m = ends.len() as i64;
        let total_e = e0 as i64 + ends.iter().map(|&(_, e)| e as i64).sum::<i64>();
        let c = m - 2 - total_e;
        if c < 0 {
            return Err(Error::Range(format!("branch degree {c} is negative")));
        }
        let value = if c == 0 {
            let mut parts = vec![e0 as u64];
            parts.extend(ends.iter().map(|&(_, e)| e as u64));
            big(multinomial((m - 2) as u64, &parts)?)
        } else {
            let carrying: Vec<usize> = (0..ends.len()).filter(|&i| ends[i].1 > 0).collect();
            let free: Vec<usize> = (0..ends.len()).filter(|&i| ends[i].1 == 0).collect();
            let mut acc = Rational::zero();
            for i_mask in 0u32..(1 << carrying.len()) {
                let chosen: Vec<usize> = bits(i_mask).map(|b| carrying[b]).collect();
                let e_i: u32 = chosen.iter().map(|&i| ends[i].1).sum();
                let need = e_i as usize + 2;
                if need < chosen.len() || need - chosen.len() > free.len() {
                    continue;
                }
                let j_size = need - chosen.len();
                let parts: Vec<u64> = chosen.iter().map(|&i| ends[i].1 as u64).collect();
                let vertex = big(multinomial(e_i as u64, &parts)?);
                for j_mask in subsets_of_size(free.len(), j_size) {
                    let mut removed = chosen.clone();
                    removed.extend(bits(j_mask).map(|b| free[b]));
                    let weight: i64 =
                        removed.iter().map(|&i| ends[i].0).sum::<i64>() + (e_i as i64 + 1) * k;
                    if weight <= 0 {
                        return Err(Error::Domain(format!(
                            "cut edge weight {weight} is not positive (k = {k})"
                        )));
                    }
                    let mut next: Vec<(i64, u32)> = (0..ends.len())
                        .filter(|i| !removed.contains(i))
                        .map(|i| ends[i])
                        .collect();
                    next.push((weight, 0));
                    let sub = self.h0_inner(d, k, e0, next)?;
                    acc += &vertex * rat(weight) * sub;
                }
            }
            acc
        };
        self.store(key, &value);
        Ok(value)
    }

    /// `H_g((d, -nu), 0)` through the four-term last-vertex recursion, with
    /// the genus-zero closed form as base case. Defined here for `k >= 0`.
    pub fn hg_onepart(&self, p: &Profile) -> Result<Rational> {
        if !p.is_primary() {
            return Err(Error::Unsupported(
                "the higher-genus recursion has no descendant insertions".into(),
            ));
        }
        if p.k() < 0 {
            return Err(Error::Domain(format!(
                "higher-genus recursion is evaluated only for k >= 0, got k = {}",
                p.k()
            )));
        }
        Ok(self.hg_inner(p.genus() as i64, p.d(), p.k(), p.nu().to_vec()))
    }

    fn hg_inner(&self, genus: i64, d: i64, k: i64, nu: Vec<i64>) -> Rational {
        if genus < 0 {
            return Rational::zero();
        }
        if genus == 0 {
            // no stable genus-zero curve with fewer than three markings
            if nu.len() < 2 {
                return Rational::zero();
            }
            return h0_base_value(nu.len() as u32, &rat(d), &rat(k));
        }
        let key = MemoKey::new(Family::Hg, genus as u32, d, 0, nu.into_iter().map(|v| (v, 0)).collect());
        if let Some(v) = self.lookup(&key) {
            return v;
        }
        let nu: Vec<i64> = key.ends.iter().map(|&(v, _)| v).collect();
        let m = nu.len();
        let without = |skip: &[usize]| -> Vec<i64> {
            (0..m).filter(|i| !skip.contains(i)).map(|i| nu[i]).collect()
        };
        let mut acc = Rational::zero();

        // two ends meet at the last vertex
        for i in 0..m {
            for j in (i + 1)..m {
                let w = nu[i] + nu[j] + k;
                let mut next = without(&[i, j]);
                next.push(w);
                acc += rat(w) * self.hg_inner(genus, d, k, next);
            }
        }

        // one end, two edges back: a + b = nu_i + k
        let mut split = Rational::zero();
        for (i, &v) in nu.iter().enumerate() {
            let total = v + k;
            for a in 1..total {
                let b = total - a;
                let mut next = without(&[i]);
                next.push(a);
                next.push(b);
                split += rat(a * b) * self.hg_inner(genus - 1, d, k, next);
            }
        }
        acc += split * ratio(1, 2);

        // genus-one cul-de-sac, local factor -1/24, new end of weight k
        if k >= 1 {
            let mut next = nu.clone();
            next.push(k);
            acc -= ratio(k, 24) * self.hg_inner(genus - 1, d, k, next);
        }

        // three edges back: a + b + c = k
        let mut triple = Rational::zero();
        for a in 1..k {
            for b in 1..(k - a) {
                let c = k - a - b;
                let mut next = nu.clone();
                next.extend([a, b, c]);
                triple += rat(a * b * c) * self.hg_inner(genus - 2, d, k, next);
            }
        }
        acc += triple * ratio(1, 6);

        self.store(key, &acc);
        acc
    }

    /// Loads records from a memo file. A missing file or a file written by a
    /// different format version leaves the table untouched.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let Some(memo) = &self.memo else { return Ok(0) };
        let file = match fs::File::open(path) {
            Ok(f) => f,
            Err(_) => return Ok(0),
        };
        let mut lines = BufReader::new(file).lines();
        match lines.next() {
            Some(Ok(h)) if h.trim_end() == CACHE_HEADER => {}
            _ => return Ok(0),
        }
        let mut loaded = 0;
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(key), Some(num), Some(den), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(Error::Parse(format!("bad memo record {line:?}")));
            };
            let key = MemoKey::parse(key)?;
            let value = parse_fraction(&format!("{num}/{den}"))?;
            memo.insert(key, value);
            loaded += 1;
        }
        Ok(loaded)
    }

    /// Writes the whole memo table, replacing the file.
    pub fn save(&self, path: &Path) -> Result<usize> {
        let Some(memo) = &self.memo else { return Ok(0) };
        let mut records: Vec<(MemoKey, Rational)> =
            memo.iter().map(|e| (e.key().clone(), e.value().clone())).collect();
        records.sort_by(|a, b| a.0.cmp(&b.0));
        let tmp = path.with_extension("tmp");
        let io = |e: std::io::Error| Error::Parse(format!("writing {}: {e}", path.display()));
        {
            let mut f = std::io::BufWriter::new(fs::File::create(&tmp).map_err(io)?);
            writeln!(f, "{CACHE_HEADER}").map_err(io)?;
            for (key, value) in &records {
                writeln!(f, "{key}\t{}\t{}", value.numer(), value.denom()).map_err(io)?;
            }
            f.flush().map_err(io)?;
        }
        fs::rename(&tmp, path).map_err(io)?;
        Ok(records.len())
    }
}

/// `(m-1)! prod_{j=1}^{m-2} (d - j k / 2)`.
pub(crate) fn h0_base_value(m: u32, d: &Rational, k: &Rational) -> Rational {
    let mut acc = big(factorial(m as u64 - 1));
    for j in 1..(m as i64 - 1) {
        acc *= half_step(d, j, k);
    }
    acc
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1)
}

fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |s| s.count_ones() as usize == size)
}

/// [`Recursions::h0`] on a fresh memo table.
pub fn h0_rec(p: &Profile) -> Result<Rational> {
    Recursions::new().h0(p)
}

/// [`Recursions::hg_onepart`] on a fresh memo table.
pub fn hg_onepart_rec(p: &Profile) -> Result<Rational> {
    Recursions::new().hg_onepart(p)
}
