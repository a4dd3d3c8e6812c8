//! Geometry of brackets generated by second-order operators.

pub mod action;
pub mod bracket;
pub mod classify;
pub mod laplacian;
pub mod pencil;
pub mod supermatrix;
pub mod symbol;
pub mod transform;

pub use bracket::{
    bracket_from_operator, coordinate_bracket, coordinate_values, divergence, hamiltonian_vf, lie_derivative,
    odd_poisson_bracket, principal_tensor, subprincipal, BracketMatrix,
};
pub use laplacian::{act_on_w_densities, laplacian, master_discrepancy, modular_vf, odd_laplacian, LogVolume};
pub use pencil::{canonical_pencil, extract_vbracket, lb_data, pencil_bracket, VBracketData};
pub use transform::CoordChange;
pub use symbol::{jacobi_report, principal_symbol, tstar_bracket, JacobiReport, SymbolFn};
pub use action::recover_action;
pub use classify::{binary_jacobiator, classify_square, derivation_defect, SquareClassification, SquareLevel};
