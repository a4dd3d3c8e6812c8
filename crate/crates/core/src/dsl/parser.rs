//! Recursive-descent parser for `.sd` modules.
//!
//! ```text
//! module    := decl* EOF
//! decl      := "chart" IDENT "{" (("even" | "odd") IDENT ("," IDENT)* ";")* "}"
//!            | "tensor" IDENT on? "parity" ("even" | "odd") "{" entry* "}"
//!            | "vector" IDENT on? "{" assign* "}"
//!            | ("density" | "element" | "operator") IDENT on? "=" expr ";"
//!            | "map" IDENT on? "{" assign* "}" "inverse" "{" assign* "}"
//! on        := "on" IDENT
//! entry     := "[" IDENT "," IDENT "]" "=" expr ";"
//! assign    := IDENT "=" expr ";"
//! expr      := term (("+" | "-") term)*
//! term      := unary (("*" | "/") unary)*
//! unary     := "-" unary | power
//! power     := primary ("^" exponent)?
//! exponent  := INT | "(" "-"? INT ("/" INT)? ")"
//! primary   := INT | IDENT | "t" | "W" | "d" "(" IDENT ")" | "(" expr ")"
//! ```

use num_bigint::BigInt;
use num_traits::One;

use super::ast::*;
use super::diagnostic::{Diagnostic, Pos};
use super::lexer::{lex, Tok, Token};

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

const DECL_KEYWORDS: [&str; 7] = ["chart", "density", "element", "map", "operator", "tensor", "vector"];
const EXPR_START: [&str; 5] = ["(", "-", "d", "identifier", "integer"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.i + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        let t = self.peek();
        Diagnostic::expecting(t.pos, format!("unexpected {}", t.tok.describe()), expected)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().tok == *tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, Diagnostic> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&[tok.symbol()]))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, Diagnostic> {
        if self.is_keyword(kw) {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&[kw]))
        }
    }

    fn ident(&mut self) -> Result<Ident, Diagnostic> {
        match &self.peek().tok {
            Tok::Ident(s) if !is_reserved(s) => {
                let name = s.clone();
                let pos = self.bump().pos;
                Ok(Ident { name, pos })
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn int(&mut self) -> Result<BigInt, Diagnostic> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn module(&mut self) -> Result<SourceModule, Diagnostic> {
        let mut decls = Vec::new();
        while self.peek().tok != Tok::Eof {
            decls.push(self.decl()?);
        }
        Ok(SourceModule { decls })
    }

    fn on_chart(&mut self) -> Result<Option<Ident>, Diagnostic> {
        if self.is_keyword("on") {
            self.bump();
            Ok(Some(self.ident()?))
        } else {
            Ok(None)
        }
    }

    fn decl(&mut self) -> Result<Decl, Diagnostic> {
        let Tok::Ident(kw) = self.peek().tok.clone() else {
            return Err(self.unexpected(&DECL_KEYWORDS));
        };
        if !DECL_KEYWORDS.contains(&kw.as_str()) {
            return Err(self.unexpected(&DECL_KEYWORDS));
        }
        let pos = self.bump().pos;
        let name = self.ident()?;
        if kw == "chart" {
            return self.chart(name, pos);
        }
        let chart = self.on_chart()?;
        let kind = match kw.as_str() {
            "tensor" => {
                self.keyword("parity")?;
                let parity = if self.is_keyword("even") {
                    self.bump();
                    ParityTag::Even
                } else if self.is_keyword("odd") {
                    self.bump();
                    ParityTag::Odd
                } else {
                    return Err(self.unexpected(&["even", "odd"]));
                };
                self.expect(Tok::LBrace)?;
                let mut entries = Vec::new();
                while !self.eat(&Tok::RBrace) {
                    if self.peek().tok != Tok::LBracket {
                        return Err(self.unexpected(&["[", "}"]));
                    }
                    self.bump();
                    let row = self.ident()?;
                    self.expect(Tok::Comma)?;
                    let col = self.ident()?;
                    self.expect(Tok::RBracket)?;
                    self.expect(Tok::Eq)?;
                    let value = self.expr()?;
                    self.expect(Tok::Semi)?;
                    entries.push(TensorEntry { row, col, value });
                }
                DeclKind::Tensor { parity, entries }
            }
            "vector" => DeclKind::Vector { components: self.assignments()? },
            "map" => {
                let forward = self.assignments()?;
                self.keyword("inverse")?;
                let inverse = self.assignments()?;
                DeclKind::Map { forward, inverse }
            }
            _ => {
                self.expect(Tok::Eq)?;
                let value = self.expr()?;
                self.expect(Tok::Semi)?;
                match kw.as_str() {
                    "density" => DeclKind::Density { value },
                    "element" => DeclKind::Element { value },
                    _ => DeclKind::Operator { value },
                }
            }
        };
        Ok(Decl { name, chart, kind, pos })
    }

    fn chart(&mut self, name: Ident, pos: Pos) -> Result<Decl, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let (mut even, mut odd) = (Vec::new(), Vec::new());
        while !self.eat(&Tok::RBrace) {
            let list = if self.is_keyword("even") {
                &mut even
            } else if self.is_keyword("odd") {
                &mut odd
            } else {
                return Err(self.unexpected(&["even", "odd", "}"]));
            };
            self.bump();
            loop {
                let v = self.ident()?;
                list.push(v);
                if self.eat(&Tok::Semi) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return Err(self.unexpected(&[",", ";"]));
                }
            }
        }
        Ok(Decl { name, chart: None, kind: DeclKind::Chart { even, odd }, pos })
    }

    fn assignments(&mut self) -> Result<Vec<Assignment>, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if !matches!(self.peek().tok, Tok::Ident(_)) {
                return Err(self.unexpected(&["identifier", "}"]));
            }
            let target = self.ident()?;
            self.expect(Tok::Eq)?;
            let value = self.expr()?;
            self.expect(Tok::Semi)?;
            out.push(Assignment { target, value });
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.peek().pos;
            let kind = if self.eat(&Tok::Plus) {
                ExprKind::Add
            } else if self.eat(&Tok::Minus) {
                ExprKind::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr { kind: kind(Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.peek().pos;
            let kind = if self.eat(&Tok::Star) {
                ExprKind::Mul
            } else if self.eat(&Tok::Slash) {
                ExprKind::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr { kind: kind(Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.peek().pos;
        if self.eat(&Tok::Minus) {
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.primary()?;
        let pos = self.peek().pos;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let exp = match &self.peek().tok {
            Tok::Int(_) => Exponent { numer: self.int()?, denom: BigInt::one(), pos },
            Tok::LParen => {
                self.bump();
                let neg = self.eat(&Tok::Minus);
                let mut numer = self.int()?;
                if neg {
                    numer = -numer;
                }
                let denom = if self.eat(&Tok::Slash) { self.int()? } else { BigInt::one() };
                self.expect(Tok::RParen)?;
                Exponent { numer, denom, pos }
            }
            _ => return Err(self.unexpected(&["integer", "("])),
        };
        let bpos = base.pos;
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), exp), pos: bpos })
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        let t = self.peek().clone();
        let kind = match &t.tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                ExprKind::Int(n)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(inner);
            }
            Tok::Ident(s) if s == "t" => {
                self.bump();
                ExprKind::Volume
            }
            Tok::Ident(s) if s == "W" => {
                self.bump();
                ExprKind::Weight
            }
            Tok::Ident(s) if s == "d" && *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let v = self.ident()?;
                self.expect(Tok::RParen)?;
                ExprKind::Deriv(v)
            }
            Tok::Ident(s) if !is_reserved(s) => {
                let name = s.clone();
                self.bump();
                ExprKind::Name(name)
            }
            _ => return Err(self.unexpected(&EXPR_START)),
        };
        Ok(Expr { kind, pos: t.pos })
    }
}

pub fn parse_module(src: &str) -> Result<SourceModule, Diagnostic> {
    Parser { toks: lex(src)?, i: 0 }.module()
}

/// A single expression followed by end of input.
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, i: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected(&["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(e)
}

/// Comma-separated expressions; the empty string gives an empty list.
pub fn parse_expr_list(src: &str) -> Result<Vec<Expr>, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, i: 0 };
    let mut out = Vec::new();
    if p.peek().tok == Tok::Eof {
        return Ok(out);
    }
    loop {
        out.push(p.expr()?);
        if p.eat(&Tok::Eof) || p.peek().tok == Tok::Eof {
            return Ok(out);
        }
        if !p.eat(&Tok::Comma) {
            return Err(p.unexpected(&[",", "end of input"]));
        }
    }
}
