//! Exact computations with matrix factorizations of polynomial potentials.
//!
//! Polynomials have rational coefficients and live in rings with a block of
//! weighted `x` variables and an optional block of parameter variables `T`.
//! On top of the polynomial layer sit Gröbner bases for submodules of free
//! modules, differential forms, matrix factorizations and their tensor, dual
//! and Hom constructions, connections and Chern characters, homology of
//! 2-periodic complexes, and the numerical invariants built from those.

pub mod connection;
pub mod error;
pub mod forms;
pub mod groebner;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod mf;
pub mod parse;
pub mod poly;
pub mod strata;

pub use error::{Error, Result};
pub use groebner::{FreeElem, GroebnerBasis};
pub use matrix::PolyMatrix;
pub use parse::parse_poly;
pub use poly::{rat, rat_frac, Monomial, MonomialOrder, Poly, Rational, Ring};
