//! Discrete input data of an invariant: genus, the positive part `d`, the
//! negative parts `nu`, and the descendant exponents `psi` (`psi[0]` sits at
//! the `d` end).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated one-part profile. The leak `k` is derived from balancing
/// `d - sum(nu) = k (2g - 2 + n)` and can never be supplied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    genus: u32,
    d: i64,
    nu: Vec<i64>,
    psi: Vec<u32>,
    k: i64,
}

/// Degree `2g - 3 + n - |e|` of the branch class; counts the free vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchDegree(pub u32);

impl Profile {
    pub fn validate(genus: u32, d: i64, nu: &[i64], psi: &[u32]) -> Result<Self> {
        let m = nu.len();
        if m == 0 {
            return Err(Error::Validation("at least one negative part is required".into()));
        }
        if psi.len() != m + 1 {
            return Err(Error::Validation(format!(
                "psi has {} entries but there are {} marked points",
                psi.len(),
                m + 1
            )));
        }
        if d <= 0 {
            return Err(Error::Validation(format!("d must be positive, got {d}")));
        }
        if let Some(bad) = nu.iter().find(|&&v| v <= 0) {
            return Err(Error::Validation(format!("negative parts must be positive, got {bad}")));
        }
        let n = (m + 1) as i64;
        let euler = 2 * genus as i64 - 2 + n;
        if euler <= 0 {
            return Err(Error::Validation(format!(
                "2g - 2 + n must be positive, got {euler}"
            )));
        }
        let excess = d - nu.iter().sum::<i64>();
        if excess % euler != 0 {
            let g = num_integer::gcd(excess, euler);
            return Err(Error::Validation(format!(
                "leak {}/{} not integral",
                excess / g,
                euler / g
            )));
        }
        let total_psi: i64 = psi.iter().map(|&e| e as i64).sum();
        if total_psi > euler - 1 {
            return Err(Error::Validation(format!(
                "|psi| = {total_psi} exceeds 2g - 3 + n = {}",
                euler - 1
            )));
        }
        Ok(Self {
            genus,
            d,
            nu: nu.to_vec(),
            psi: psi.to_vec(),
            k: excess / euler,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn nu(&self) -> &[i64] {
        &self.nu
    }
    /// Exponents at all `n = m + 1` markings, `psi[0]` at the `d` end.
    pub fn psi(&self) -> &[u32] {
        &self.psi
    }
    pub fn k(&self) -> i64 {
        self.k
    }
    /// Number of negative parts.
    pub fn m(&self) -> usize {
        self.nu.len()
    }
    /// Number of markings.
    pub fn n(&self) -> usize {
        self.nu.len() + 1
    }
    pub fn euler(&self) -> i64 {
        2 * self.genus as i64 - 2 + self.n() as i64
    }
    pub fn psi_total(&self) -> u32 {
        self.psi.iter().sum()
    }

    pub fn branch_degree(&self) -> BranchDegree {
        BranchDegree((self.euler() - 1 - self.psi_total() as i64) as u32)
    }

    /// True when no descendant insertions are present.
    pub fn is_primary(&self) -> bool {
        self.psi.iter().all(|&e| e == 0)
    }

    /// Indices `1..=m` (1-based, as markings) with a positive exponent.
    pub fn psi_carrying(&self) -> Vec<usize> {
        (1..=self.m()).filter(|&i| self.psi[i] > 0).collect()
    }

    /// Same profile with the `(nu_i, e_i)` pairs reordered: position `j` of
    /// the result takes the pair at 0-based index `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let nu: Vec<i64> = perm.iter().map(|&p| self.nu[p]).collect();
        let mut psi = vec![self.psi[0]];
        psi.extend(perm.iter().map(|&p| self.psi[p + 1]));
        Self::validate(self.genus, self.d, &nu, &psi)
    }

    pub fn to_json(&self) -> ProfileJson {
        ProfileJson {
            genus: self.genus,
            d: self.d,
            nu: self.nu.clone(),
            psi: self.psi.clone(),
            k: Some(self.k),
        }
    }
}

/// Wire form `{"genus", "d", "nu", "psi", "k"}`. `k` is written for the reader's
/// benefit and ignored on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub genus: u32,
    pub d: i64,
    pub nu: Vec<i64>,
    pub psi: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
}

impl TryFrom<ProfileJson> for Profile {
    type Error = Error;

    fn try_from(raw: ProfileJson) -> Result<Self> {
        Profile::validate(raw.genus, raw.d, &raw.nu, &raw.psi)
    }
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = ProfileJson::deserialize(de)?;
        Profile::try_from(raw).map_err(serde::de::Error::custom)
    }
}
