//! Elaboration of parsed modules into core values.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::ast::*;
use super::diagnostic::{Diagnostic, DiagnosticKind, Pos};
use super::parser::{parse_expr, parse_expr_list, parse_module};
use crate::chart::{Chart, Var};
use crate::error::Error;
use crate::geom::{BracketMatrix, CoordChange, LogVolume};
use crate::{Density, Op, Poly, Rational, Weight};

/// An elaborated declaration.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Tensor(BracketMatrix<Rational>),
    Vector(Vec<Poly>),
    Volume(LogVolume<Rational>),
    Element(Density),
    Operator(Op),
    Map(CoordChange<Rational>),
}

impl Item {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Item::Tensor(_) => "tensor",
            Item::Vector(_) => "vector",
            Item::Volume(_) => "density",
            Item::Element(_) => "element",
            Item::Operator(_) => "operator",
            Item::Map(_) => "map",
        }
    }
}

/// A module with its chart and named values in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub chart_name: String,
    pub chart: Arc<Chart>,
    pub items: Vec<(String, Item)>,
}

impl Module {
    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    /// Elaborates a standalone expression against this module, as an element
    /// when `operator` is false.
    pub fn expr(&self, src: &str, operator: bool) -> Result<Value, Diagnostic> {
        let e = parse_expr(src)?;
        Ctx { chart: &self.chart, items: &self.items }.value(&e, operator)
    }

    /// Comma-separated element expressions.
    pub fn element_list(&self, src: &str) -> Result<Vec<Density>, Diagnostic> {
        let ctx = Ctx { chart: &self.chart, items: &self.items };
        parse_expr_list(src)?.iter().map(|e| ctx.value(e, false)?.into_density()).collect()
    }
}

/// Result of elaborating an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Elem(Density),
    Op(Op),
}

impl Value {
    fn into_density(self) -> Result<Density, Diagnostic> {
        match self {
            Value::Elem(d) => Ok(d),
            Value::Op(_) => unreachable!("element expressions never produce operators"),
        }
    }
}

fn diag(pos: Pos, kind: DiagnosticKind, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(pos, kind, msg)
}

fn core(pos: Pos, e: Error) -> Diagnostic {
    let kind = match e {
        Error::Parity(_) | Error::Inhomogeneous(_) => DiagnosticKind::Parity,
        Error::UnknownVariable(_) => DiagnosticKind::Scope,
        _ => DiagnosticKind::Domain,
    };
    diag(pos, kind, e.to_string())
}

fn rational(n: &BigInt, d: &BigInt) -> Rational {
    Rational::new(n.clone(), d.clone())
}

/// Weight-zero part as a function, when that is all there is.
pub fn as_function(d: &Density) -> Option<Poly> {
    let mut out = Poly::zero(d.chart());
    for (w, f) in d.parts() {
        if !w.is_zero() {
            return None;
        }
        out = f.clone();
    }
    Some(out)
}

struct Ctx<'a> {
    chart: &'a Arc<Chart>,
    items: &'a [(String, Item)],
}

impl Ctx<'_> {
    fn var(&self, id: &Ident) -> Result<Var, Diagnostic> {
        self.chart
            .lookup(&id.name)
            .ok_or_else(|| diag(id.pos, DiagnosticKind::Scope, format!("`{}` is not a variable of the chart", id.name)))
    }

    fn to_op(&self, v: Value, pos: Pos) -> Result<Op, Diagnostic> {
        match v {
            Value::Op(o) => Ok(o),
            Value::Elem(d) => as_function(&d)
                .map(|f| Op::mult(&f))
                .ok_or_else(|| diag(pos, DiagnosticKind::Domain, "densities t^w cannot appear in operator expressions")),
        }
    }

    fn binary(&self, a: Value, b: Value, pos: Pos, op: char) -> Result<Value, Diagnostic> {
        if let (Value::Elem(x), Value::Elem(y)) = (&a, &b) {
            let r = match op {
                '+' => x.try_add(y),
                '-' => x.try_sub(y),
                _ => x.multiply(y),
            };
            return r.map(Value::Elem).map_err(|e| core(pos, e));
        }
        let (x, y) = (self.to_op(a, pos)?, self.to_op(b, pos)?);
        let r = match op {
            '+' => x.try_add(&y),
            '-' => x.try_sub(&y),
            _ => x.compose(&y),
        };
        r.map(Value::Op).map_err(|e| core(pos, e))
    }

    fn value(&self, e: &Expr, operator: bool) -> Result<Value, Diagnostic> {
        let c = self.chart;
        Ok(match &e.kind {
            ExprKind::Int(n) => Value::Elem(Poly::constant(c, rational(n, &BigInt::from(1))).into()),
            ExprKind::Volume => Value::Elem(Density::volume(c)),
            ExprKind::Weight => {
                if !operator {
                    return Err(diag(e.pos, DiagnosticKind::Domain, "the weight symbol W is only allowed in operators"));
                }
                Value::Op(Op::weight(c))
            }
            ExprKind::Deriv(v) => {
                if !operator {
                    return Err(diag(e.pos, DiagnosticKind::Domain, "derivatives are only allowed in operators"));
                }
                Value::Op(Op::partial(c, self.var(v)?))
            }
            ExprKind::Name(name) => {
                if let Some(v) = c.lookup(name) {
                    Value::Elem(Poly::var(c, v).into())
                } else {
                    match self.items.iter().find(|(n, _)| n == name).map(|(_, i)| i) {
                        Some(Item::Element(d)) => Value::Elem(d.clone()),
                        Some(Item::Operator(o)) if operator => Value::Op(o.clone()),
                        Some(Item::Operator(_)) => {
                            return Err(diag(e.pos, DiagnosticKind::Domain, format!("operator `{name}` used in an element")))
                        }
                        Some(other) => {
                            return Err(diag(
                                e.pos,
                                DiagnosticKind::Domain,
                                format!("{} `{name}` cannot be used in an expression", other.kind_name()),
                            ))
                        }
                        None => return Err(diag(e.pos, DiagnosticKind::Scope, format!("undeclared name `{name}`"))),
                    }
                }
            }
            ExprKind::Neg(a) => match self.value(a, operator)? {
                Value::Elem(d) => Value::Elem(d.scale(&-Rational::from_integer(1.into()))),
                Value::Op(o) => Value::Op(-&o),
            },
            ExprKind::Add(a, b) => self.binary(self.value(a, operator)?, self.value(b, operator)?, e.pos, '+')?,
            ExprKind::Sub(a, b) => self.binary(self.value(a, operator)?, self.value(b, operator)?, e.pos, '-')?,
            ExprKind::Mul(a, b) => self.binary(self.value(a, operator)?, self.value(b, operator)?, e.pos, '*')?,
            ExprKind::Div(a, b) => {
                let den = match self.value(b, operator)? {
                    Value::Elem(d) => as_function(&d).filter(|f| f.is_constant() && !f.is_zero()),
                    Value::Op(_) => None,
                };
                let Some(den) = den else {
                    return Err(diag(b.pos, DiagnosticKind::Domain, "division only by a nonzero constant"));
                };
                let k = Rational::from_integer(1.into()) / den.constant_term();
                match self.value(a, operator)? {
                    Value::Elem(d) => Value::Elem(d.scale(&k)),
                    Value::Op(o) => Value::Op(o.scale(&k)),
                }
            }
            ExprKind::Pow(base, exp) => {
                let integral = exp.denom == BigInt::from(1) && exp.numer >= BigInt::zero();
                if matches!(base.kind, ExprKind::Volume) {
                    let (Some(n), Some(d)) = (exp.numer.to_i64(), exp.denom.to_i64()) else {
                        return Err(diag(exp.pos, DiagnosticKind::Arity, "weight out of range"));
                    };
                    if d == 0 {
                        return Err(diag(exp.pos, DiagnosticKind::Domain, "zero denominator"));
                    }
                    Value::Elem(Density::weighted(Poly::one(c), Weight::new(n, d)))
                } else if !integral {
                    return Err(diag(exp.pos, DiagnosticKind::Domain, "only t takes a negative or fractional power"));
                } else {
                    let Some(k) = exp.numer.to_u32().filter(|&k| k <= 64) else {
                        return Err(diag(exp.pos, DiagnosticKind::Arity, "exponent too large"));
                    };
                    match self.value(base, operator)? {
                        Value::Elem(d) => {
                            let mut acc = Density::one(c);
                            for _ in 0..k {
                                acc = acc.multiply(&d).map_err(|err| core(base.pos, err))?;
                            }
                            Value::Elem(acc)
                        }
                        Value::Op(o) => Value::Op(o.pow(k)),
                    }
                }
            }
        })
    }

    fn function(&self, e: &Expr) -> Result<Poly, Diagnostic> {
        let d = self.value(e, false)?.into_density()?;
        as_function(&d).ok_or_else(|| diag(e.start(), DiagnosticKind::Domain, "expected a function, found a density"))
    }
}

fn assignment_images(ctx: &Ctx, list: &[Assignment]) -> Result<Vec<Poly>, Diagnostic> {
    let chart = ctx.chart;
    let mut out: Vec<Option<Poly>> = vec![None; chart.dim()];
    for a in list {
        let v = ctx.var(&a.target)?;
        if out[v.0].is_some() {
            return Err(diag(a.target.pos, DiagnosticKind::Arity, format!("`{}` assigned twice", a.target.name)));
        }
        out[v.0] = Some(ctx.function(&a.value)?);
    }
    Ok(out.into_iter().enumerate().map(|(i, f)| f.unwrap_or_else(|| Poly::var(chart, Var(i)))).collect())
}

/// Elaborates a parsed module: one chart first, then declarations on it.
pub fn elaborate(m: &SourceModule) -> Result<Module, Diagnostic> {
    let Some(first) = m.decls.first() else {
        return Err(diag(Pos { line: 1, col: 1 }, DiagnosticKind::Scope, "a module must declare a chart"));
    };
    let DeclKind::Chart { even, odd } = &first.kind else {
        return Err(diag(first.pos, DiagnosticKind::Scope, "the chart must be declared first"));
    };
    let names = |v: &[Ident]| v.iter().map(|i| i.name.clone()).collect::<Vec<_>>();
    let chart = Chart::new(names(even), names(odd)).map_err(|e| core(first.name.pos, e))?;
    let mut items: Vec<(String, Item)> = Vec::new();
    for d in &m.decls[1..] {
        if let DeclKind::Chart { .. } = d.kind {
            return Err(diag(d.pos, DiagnosticKind::Scope, "only one chart per module"));
        }
        if let Some(on) = &d.chart {
            if on.name != first.name.name {
                return Err(diag(on.pos, DiagnosticKind::Scope, format!("unknown chart `{}`", on.name)));
            }
        }
        let name = &d.name;
        if chart.lookup(&name.name).is_some() || items.iter().any(|(n, _)| *n == name.name) || name.name == first.name.name {
            return Err(diag(name.pos, DiagnosticKind::Scope, format!("`{}` is already declared", name.name)));
        }
        let ctx = Ctx { chart: &chart, items: &items };
        let item = match &d.kind {
            DeclKind::Chart { .. } => unreachable!(),
            DeclKind::Tensor { parity, entries } => {
                let parity = match parity {
                    ParityTag::Even => crate::Parity::Even,
                    ParityTag::Odd => crate::Parity::Odd,
                };
                let mut list = Vec::new();
                for e in entries {
                    let (a, b) = (ctx.var(&e.row)?, ctx.var(&e.col)?);
                    let v = ctx.function(&e.value)?;
                    let one = BracketMatrix::from_entries(&chart, parity, [(a, b, v.clone())]);
                    one.map_err(|err| core(e.value.start(), err))?;
                    list.push((a, b, v));
                }
                Item::Tensor(BracketMatrix::from_entries(&chart, parity, list).map_err(|e| core(d.pos, e))?)
            }
            DeclKind::Vector { components } => {
                let mut out = vec![Poly::zero(&chart); chart.dim()];
                let mut seen = vec![false; chart.dim()];
                for a in components {
                    let v = ctx.var(&a.target)?;
                    if std::mem::replace(&mut seen[v.0], true) {
                        return Err(diag(a.target.pos, DiagnosticKind::Arity, format!("`{}` assigned twice", a.target.name)));
                    }
                    out[v.0] = ctx.function(&a.value)?;
                }
                Item::Vector(out)
            }
            DeclKind::Density { value } => {
                Item::Volume(LogVolume::new(ctx.function(value)?).map_err(|e| core(value.start(), e))?)
            }
            DeclKind::Element { value } => Item::Element(ctx.value(value, false)?.into_density()?),
            DeclKind::Operator { value } => {
                let v = ctx.value(value, true)?;
                Item::Operator(ctx.to_op(v, value.start())?)
            }
            DeclKind::Map { forward, inverse } => {
                let f = assignment_images(&ctx, forward)?;
                let g = assignment_images(&ctx, inverse)?;
                Item::Map(CoordChange::new(&chart, &chart, f, g).map_err(|e| core(d.pos, e))?)
            }
        };
        items.push((name.name.clone(), item));
    }
    Ok(Module { chart_name: first.name.name.clone(), chart, items })
}

/// Parses and elaborates `.sd` source text.
pub fn load(src: &str) -> Result<Module, Diagnostic> {
    elaborate(&parse_module(src)?)
}
