//! Positioned diagnostics for `.sd` sources.

use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Scope,
    Parity,
    Arity,
    Domain,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Lexical => "lexical error",
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Scope => "scope error",
            DiagnosticKind::Parity => "parity error",
            DiagnosticKind::Arity => "arity error",
            DiagnosticKind::Domain => "domain error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {kind}: {message}{}", expected_suffix(.expected))]
pub struct Diagnostic {
    pub pos: Pos,
    pub kind: DiagnosticKind,
    pub message: String,
    /// Tokens that would have been accepted, sorted.
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    match expected {
        [] => String::new(),
        [one] => format!(" (expected {one})"),
        many => format!(" (expected one of {})", many.join(", ")),
    }
}

impl Diagnostic {
    pub fn new(pos: Pos, kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic { pos, kind, message: message.into(), expected: Vec::new() }
    }

    pub fn expecting(pos: Pos, message: impl Into<String>, expected: &[&str]) -> Self {
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        Diagnostic { pos, kind: DiagnosticKind::Syntax, message: message.into(), expected }
    }

    /// Renders the diagnostic with the offending source line and a caret,
    /// optionally with ANSI colors.
    pub fn render(&self, source: &str, color: bool) -> String {
        let (red, bold, reset) = if color { ("\x1b[31m", "\x1b[1m", "\x1b[0m") } else { ("", "", "") };
        let mut out = format!(
            "{bold}{red}{}{reset}{bold}: {}{}{reset}\n",
            self.kind,
            self.message,
            expected_suffix(&self.expected)
        );
        out.push_str(&format!("  --> {}\n", self.pos));
        if let Some(text) = source.lines().nth(self.pos.line.saturating_sub(1) as usize) {
            let pad = " ".repeat(self.pos.col.saturating_sub(1) as usize);
            out.push_str(&format!("   | {text}\n   | {pad}{red}^{reset}\n"));
        }
        out
    }
}
