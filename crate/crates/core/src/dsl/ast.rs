//! Syntax tree of `.sd` modules.

use num_bigint::BigInt;

use super::diagnostic::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

/// Exponent of `^`: a nonnegative integer, or a signed rational in
/// parentheses (only meaningful for `t`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponent {
    pub numer: BigInt,
    pub denom: BigInt,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Name(String),
    /// The volume element `t`.
    Volume,
    /// The weight symbol `W`.
    Weight,
    /// `d(v)`.
    Deriv(Ident),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    /// Position of the leftmost token.
    pub fn start(&self) -> Pos {
        match &self.kind {
            ExprKind::Add(a, _) | ExprKind::Sub(a, _) | ExprKind::Mul(a, _) | ExprKind::Div(a, _) => {
                a.start().min(self.pos)
            }
            ExprKind::Pow(a, _) => a.start().min(self.pos),
            _ => self.pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityTag {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub target: Ident,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorEntry {
    pub row: Ident,
    pub col: Ident,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclKind {
    Chart { even: Vec<Ident>, odd: Vec<Ident> },
    Tensor { parity: ParityTag, entries: Vec<TensorEntry> },
    Vector { components: Vec<Assignment> },
    /// A log-volume `σ` of `ρ = e^σ Dx`.
    Density { value: Expr },
    Element { value: Expr },
    Operator { value: Expr },
    Map { forward: Vec<Assignment>, inverse: Vec<Assignment> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: Ident,
    /// Chart named after `on`; absent for the chart declaration itself.
    pub chart: Option<Ident>,
    pub kind: DeclKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceModule {
    pub decls: Vec<Decl>,
}

/// Words that cannot name a variable or a declaration.
pub const RESERVED: [&str; 14] = [
    "chart", "tensor", "vector", "density", "element", "operator", "map", "inverse", "on", "parity", "even", "odd",
    "t", "W",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name) || name == "d"
}
