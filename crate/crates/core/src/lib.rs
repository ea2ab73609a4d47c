//! Exact symbolic algebra for the tautological subbundles of the big cell and
//! the first Birkhoff stratum of the Sato Grassmannian.
//!
//! The building blocks are sparse polynomials over indexed symbols
//! ([`Poly`]), truncated Laurent series ([`LaurentSeries`]) and constraint
//! systems. On top of them sit the closure relations, the tangent and cocycle
//! systems, the dispersionless KP flows, Poisson brackets and the
//! Hirota-Miwa form of the closure constraints.

pub mod cocycle;
pub mod error;
pub mod hirota;
pub mod laurent;
pub mod poisson;
pub mod poly;
pub mod reduction;
pub mod scalar;
pub mod stratum1;
pub mod symbol;
pub mod tangent;
pub mod text;
pub mod varieties;

pub use error::{Error, Result};
pub use laurent::{
    closure_constraints, closure_decompose, ConstraintSystem, Decomposition, LaurentSeries, Normalization, Stratum,
    StratumBasis, StructureConstants,
};
pub use poly::{Monomial, Poly};
pub use scalar::{int, parse_rational, rat, Rational, Scalar};
pub use symbol::{Family, JetKey, Symbol};
pub use text::{parse_poly, to_latex, JsonPoly};

/// Polynomials with exact rational coefficients.
pub type Polynomial = Poly<Rational>;
/// Polynomials with `f64` coefficients, for numeric spot checks.
pub type PolynomialF64 = Poly<f64>;
