//! Exact arithmetic: the coefficient field, sparse polynomials, determinants.

pub mod field;
pub mod linalg;
pub mod poly;

pub use field::{parse_rational, rat, rat_int, rational_to_f64, FieldScalar, Rational};
pub use linalg::{det_fraction_free, solve_linear};
pub use poly::{CompiledPoly, MPoly, Monomial, VarList};
