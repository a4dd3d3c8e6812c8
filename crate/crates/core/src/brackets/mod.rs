//! Higher derived brackets, their Jacobiators and the L∞ check.

pub mod algebra;
pub mod derived;
pub mod koszul;
pub mod linfty;

pub use algebra::{
    check_instance, derived_bracket_abstract, jacobiator_abstract, nested_commutator, GrassmannMatrix, LieSuperAlgebra,
    MatrixOracle, OperatorAlgebra,
};
pub use derived::{higher_bracket, jacobiator, leibniz_obstruction, symmetry_defect};
pub use koszul::{koszul_sign, shuffles};
pub use linfty::{linfty_check, linfty_check_bounded, monomial_tuples, ArityCheck, LinftyReport, Witness};
