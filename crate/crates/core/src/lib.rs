//! Exact symbolic engine for graded differential operators on polynomial
//! supermanifold charts.

pub mod brackets;
pub mod chart;
pub mod density;
pub mod diffop;
pub mod dsl;
pub mod error;
pub mod geom;
pub mod monomial;
pub mod poly;
pub mod sample;
pub mod scalar;

pub use chart::{Chart, Parity, Var};
pub use density::{residue_pair, scalar_product, DensityElement};
pub use diffop::{DiffOp, OpKey, Order};
pub use error::{Error, Result};
pub use monomial::Monomial;
pub use poly::{GradedPoly, Grading};
pub use num_traits::{One, Zero};
pub use scalar::{Scalar, Weight};

/// Exact rational scalar used throughout the CLI and the law suites.
pub type Rational = num_rational::BigRational;
pub type Poly = GradedPoly<Rational>;
pub type Density = DensityElement<Rational>;
pub type Op = DiffOp<Rational>;
