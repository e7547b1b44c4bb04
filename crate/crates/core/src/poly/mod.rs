//! Exact multivariate polynomials, interpolation of genus-zero invariants,
//! and identity checks between formula variants.

mod expr;
mod interp;
mod polynomial;

pub use expr::{identity_check, Expr};
pub use interp::{
    h0_variables, interpolate_h0, interpolate_h0_on, j_0_e1_polynomial, j_e0_0_polynomial,
    sample_profile, SampleGrid,
};
pub use polynomial::{assert_degree_bound, MultivariatePolynomial, PolynomialJson, TermJson};
