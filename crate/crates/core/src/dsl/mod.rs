//! The `.sd` language: a small text format for charts, tensors, volumes,
//! density elements and operators.

pub mod ast;
pub mod diagnostic;
pub mod elaborate;
pub mod lexer;
pub mod parser;
pub mod render;

pub use diagnostic::{Diagnostic, DiagnosticKind, Pos};
pub use elaborate::{as_function, elaborate, load, Item, Module, Value};
pub use parser::{parse_expr, parse_expr_list, parse_module};
pub use render::*;
