//! Coordinate charts with even and odd variables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Maximum number of even variables (exponents are packed into a `u64`).
pub const MAX_EVEN: usize = 8;
/// Maximum number of odd variables (odd subsets are packed into a `u32`).
pub const MAX_ODD: usize = 32;

/// ℤ₂ grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u32) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Index of a chart variable. Even variables come first, then odd ones, each
/// in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

/// A superdomain chart `ℝ^{m|q}` with named coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    even: Vec<String>,
    odd: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(
        even: impl IntoIterator<Item = S>,
        odd: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Chart>> {
        let even: Vec<String> = even.into_iter().map(Into::into).collect();
        let odd: Vec<String> = odd.into_iter().map(Into::into).collect();
        if even.len() + odd.len() == 0 {
            return Err(Error::InvalidChart("a chart needs at least one variable".into()));
        }
        if even.len() > MAX_EVEN || odd.len() > MAX_ODD {
            return Err(Error::InvalidChart(format!(
                "at most {MAX_EVEN} even and {MAX_ODD} odd variables are supported"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in even.iter().chain(odd.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidChart(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Arc::new(Chart { even, odd }))
    }

    /// `ℝ^{m|q}` with variables `x1..xm`, `xi1..xiq`.
    pub fn standard(m: usize, q: usize) -> Arc<Chart> {
        let even: Vec<String> = if m == 1 {
            vec!["x".into()]
        } else {
            (1..=m).map(|i| format!("x{i}")).collect()
        };
        let odd: Vec<String> = if q == 1 {
            vec!["xi".into()]
        } else {
            (1..=q).map(|i| format!("xi{i}")).collect()
        };
        Chart::new(even, odd).expect("standard chart is valid")
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn dim(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.dim()).map(Var)
    }

    pub fn even_vars(&self) -> impl Iterator<Item = Var> {
        (0..self.n_even()).map(Var)
    }

    pub fn odd_vars(&self) -> impl Iterator<Item = Var> + '_ {
        (self.n_even()..self.dim()).map(Var)
    }

    pub fn parity(&self, v: Var) -> Parity {
        if v.0 < self.n_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(&self, v: Var) -> &str {
        if v.0 < self.n_even() {
            &self.even[v.0]
        } else {
            &self.odd[v.0 - self.n_even()]
        }
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        if let Some(i) = self.even.iter().position(|n| n == name) {
            return Some(Var(i));
        }
        self.odd
            .iter()
            .position(|n| n == name)
            .map(|i| Var(self.n_even() + i))
    }

    pub fn even_names(&self) -> &[String] {
        &self.even
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    /// The cotangent chart: the variables of `self` followed by momenta
    /// `p_a` of the same parity, named `p_<name>`.
    pub fn cotangent(&self) -> Arc<Chart> {
        let even = self
            .even
            .iter()
            .cloned()
            .chain(self.even.iter().map(|n| format!("p_{n}")));
        let odd = self
            .odd
            .iter()
            .cloned()
            .chain(self.odd.iter().map(|n| format!("p_{n}")));
        Chart::new(even.collect::<Vec<_>>(), odd.collect::<Vec<_>>())
            .expect("cotangent of a valid chart")
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℝ^{{{}|{}}}(", self.n_even(), self.n_odd())?;
        let names: Vec<&str> = self.even.iter().chain(&self.odd).map(String::as_str).collect();
        write!(f, "{})", names.join(", "))
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}
