//! Exact evaluation of one-part k-leaky double Hurwitz descendants.
//!
//! Three independent routes compute the same numbers:
//! - [`trop`]: weighted enumeration of genus-zero tropical leaky covers,
//! - [`recursion`]: last-vertex cutting recursions with memoization,
//! - [`formulas`]: closed forms, including the `S(z)` series formula at `k = 0`.
//!
//! [`poly`] reconstructs the polynomial structure in genus zero by
//! interpolation, and [`compute`] dispatches requests and cross-checks routes.

pub mod arith;
pub mod compute;
pub mod error;
pub mod formulas;
pub mod poly;
pub mod profile;
pub mod recursion;
pub mod series;
pub mod trop;

use serde::{Deserialize, Serialize};

pub use arith::Rational;
pub use error::{Error, Result};
pub use profile::{BranchDegree, Profile};
pub use series::{s_series, TruncatedSeries};

/// `{"num": "...", "den": "..."}`; strings so that values of any size survive
/// JSON readers that parse numbers as doubles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for FractionJson {
    fn from(q: &Rational) -> Self {
        Self { num: q.numer().to_string(), den: q.denom().to_string() }
    }
}

impl TryFrom<&FractionJson> for Rational {
    type Error = Error;

    fn try_from(f: &FractionJson) -> Result<Self> {
        arith::parse_fraction(&format!("{}/{}", f.num, f.den))
    }
}
