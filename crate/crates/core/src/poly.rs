//! Supercommutative polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::chart::{same_chart, Chart, Parity, Var};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// Parity of a possibly inhomogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Homogeneous(Parity),
    Inhomogeneous,
}

impl Grading {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Grading::Homogeneous(p) => Some(p),
            Grading::Inhomogeneous => None,
        }
    }
}

impl std::fmt::Display for Grading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Grading::Homogeneous(p) => write!(f, "{p}"),
            Grading::Inhomogeneous => f.write_str("inhomogeneous"),
        }
    }
}

/// A polynomial in the even and odd coordinates of a chart. Terms are kept
/// in canonical form: odd factors in declaration order, no zero coefficients.
#[derive(Debug, Clone)]
pub struct GradedPoly<T> {
    chart: Arc<Chart>,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> PartialEq for GradedPoly<T> {
    fn eq(&self, other: &Self) -> bool {
        *self.chart == *other.chart && self.terms == other.terms
    }
}

impl<T: Scalar> GradedPoly<T> {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        GradedPoly { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(chart: &Arc<Chart>, c: T) -> Self {
        Self::monomial(chart, Monomial::ONE, c)
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        Self::constant(chart, T::one())
    }

    pub fn int(chart: &Arc<Chart>, n: i64) -> Self {
        Self::constant(chart, T::from_i64(n))
    }

    pub fn monomial(chart: &Arc<Chart>, m: Monomial, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedPoly { chart: chart.clone(), terms }
    }

    pub fn var(chart: &Arc<Chart>, v: Var) -> Self {
        Self::monomial(chart, Monomial::var(chart, v), T::one())
    }

    /// Coordinate function by name.
    pub fn named(chart: &Arc<Chart>, name: &str) -> Result<Self> {
        Ok(Self::var(chart, chart.var(name)?))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        self.coeff(&Monomial::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn from_terms(chart: &Arc<Chart>, terms: impl IntoIterator<Item = (Monomial, T)>) -> Self {
        let mut p = Self::zero(chart);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        GradedPoly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a.clone() * c.clone())).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    /// Supercommutative product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = Self::zero(&self.chart);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = c1.clone() * c2.clone();
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.chart);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Left partial derivative `∂_v`.
    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero(&self.chart);
        if v.0 >= self.chart.dim() {
            return out;
        }
        for (m, c) in &self.terms {
            if let Some((k, m2)) = m.partial(&self.chart, v) {
                out.add_term(m2, c.clone() * T::from_i64(k));
            }
        }
        out
    }

    /// Left partial derivative by variable name.
    pub fn partial_named(&self, name: &str) -> Result<Self> {
        Ok(self.partial(self.chart.var(name)?))
    }

    /// Parity of the element; zero is reported as even.
    pub fn parity_of(&self) -> Grading {
        let mut seen: Option<Parity> = None;
        for m in self.terms.keys() {
            let p = m.parity();
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return Grading::Inhomogeneous,
                _ => {}
            }
        }
        Grading::Homogeneous(seen.unwrap_or(Parity::Even))
    }

    /// Homogeneous parity or an [`Error::Inhomogeneous`] naming `what`.
    pub fn homogeneous_parity(&self, what: &str) -> Result<Parity> {
        self.parity_of()
            .parity()
            .ok_or_else(|| Error::Inhomogeneous(format!("{what} must be homogeneous")))
    }

    pub fn part(&self, p: Parity) -> Self {
        GradedPoly {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity() == p)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Even and odd parts (always a unique decomposition).
    pub fn split(&self) -> [(Parity, Self); 2] {
        [(Parity::Even, self.part(Parity::Even)), (Parity::Odd, self.part(Parity::Odd))]
    }

    /// Part without odd generators (the "body" in each even variable).
    pub fn body(&self) -> Self {
        GradedPoly {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.odd_mask() == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Whether every term contains an odd generator.
    pub fn is_nilpotent(&self) -> bool {
        self.terms.keys().all(|m| m.odd_mask() != 0)
    }

    /// `exp(n)` for nilpotent `n`; the series terminates.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::Precondition("exp needs a nilpotent argument".into()));
        }
        let mut out = Self::one(&self.chart);
        let mut term = Self::one(&self.chart);
        let mut k = 0i64;
        loop {
            k += 1;
            term = (&term * self).scale(&(T::one() / T::from_i64(k)));
            if term.is_zero() {
                return Ok(out);
            }
            out = &out + &term;
        }
    }

    /// `ln(1 + n)` for `self = 1 + n` with `n` nilpotent.
    pub fn log_unipotent(&self) -> Result<Self> {
        let n = self - &Self::one(&self.chart);
        if !n.is_nilpotent() {
            return Err(Error::Precondition("log needs 1 + nilpotent".into()));
        }
        let mut out = Self::zero(&self.chart);
        let mut pw = Self::one(&self.chart);
        let mut k = 0i64;
        loop {
            k += 1;
            pw = &pw * &n;
            if pw.is_zero() {
                return Ok(out);
            }
            let t = pw.scale(&(T::one() / T::from_i64(k)));
            out = if k % 2 == 1 { &out + &t } else { &out - &t };
        }
    }

    /// Algebra morphism sending each variable to the given image.
    ///
    /// `images` is indexed by the variables of `self.chart()`; all images
    /// must live on `target` and have the parity of the variable they replace.
    pub fn substitute(&self, images: &[GradedPoly<T>], target: &Arc<Chart>) -> Result<Self> {
        if images.len() != self.chart.dim() {
            return Err(Error::Precondition(format!(
                "substitution needs {} images, got {}",
                self.chart.dim(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            same_chart(img.chart(), target)?;
            let want = self.chart.parity(Var(i));
            match img.parity_of() {
                Grading::Homogeneous(p) if p == want || img.is_zero() => {}
                _ => {
                    return Err(Error::Parity(format!(
                        "image of {} variable `{}` is not {}",
                        want,
                        self.chart.name(Var(i)),
                        want
                    )))
                }
            }
        }
        let n_even = self.chart.n_even();
        let mut powers: Vec<Vec<GradedPoly<T>>> = images
            .iter()
            .map(|img| vec![GradedPoly::one(target), img.clone()])
            .collect();
        let mut out = GradedPoly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = GradedPoly::constant(target, c.clone());
            for i in 0..n_even {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e];
            }
            let mut odd = m.odd_mask();
            while odd != 0 {
                let j = odd.trailing_zeros() as usize;
                odd &= odd - 1;
                acc = &acc * &images[n_even + j];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Berezin integral over a purely odd chart: the coefficient of the top
    /// monomial `ξ1…ξq`.
    pub fn berezin_integral(&self) -> Result<T> {
        if self.chart.n_even() != 0 {
            return Err(Error::Precondition(
                "Berezin integral needs a purely odd chart".into(),
            ));
        }
        let top = if self.chart.n_odd() == 32 { u32::MAX } else { (1u32 << self.chart.n_odd()) - 1 };
        Ok(self.coeff(&Monomial { even: 0, odd: top }))
    }

    /// Same polynomial viewed on a chart whose variable list starts with the
    /// variables of `self.chart()` in the same order (even and odd
    /// separately).
    pub fn embed(&self, target: &Arc<Chart>) -> Self {
        let src = &self.chart;
        debug_assert!(target.n_even() >= src.n_even() && target.n_odd() >= src.n_odd());
        let mut out = GradedPoly::zero(target);
        for (m, c) in &self.terms {
            let exps: Vec<u32> = (0..src.n_even()).map(|i| m.exp(i)).collect();
            out.add_term(Monomial::from_parts(&exps, m.odd_mask()), c.clone());
        }
        out
    }

    /// Map over coefficients into another scalar type.
    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> GradedPoly<U> {
        GradedPoly::from_terms(&self.chart, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Splits the polynomial into homogeneous single-term pieces.
    pub fn monomials(&self) -> impl Iterator<Item = GradedPoly<T>> + '_ {
        self.terms
            .iter()
            .map(move |(m, c)| GradedPoly::monomial(&self.chart, *m, c.clone()))
    }
}

impl<'a, T: Scalar> Add for &'a GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn add(self, rhs: Self) -> GradedPoly<T> {
        self.try_add(rhs).expect("chart mismatch in addition")
    }
}

impl<'a, T: Scalar> Sub for &'a GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn sub(self, rhs: Self) -> GradedPoly<T> {
        self.try_sub(rhs).expect("chart mismatch in subtraction")
    }
}

impl<'a, T: Scalar> Mul for &'a GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn mul(self, rhs: Self) -> GradedPoly<T> {
        self.multiply(rhs).expect("chart mismatch in multiplication")
    }
}

impl<'a, T: Scalar> Neg for &'a GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn neg(self) -> GradedPoly<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> Add for GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn add(self, rhs: Self) -> GradedPoly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn sub(self, rhs: Self) -> GradedPoly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn mul(self, rhs: Self) -> GradedPoly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for GradedPoly<T> {
    type Output = GradedPoly<T>;
    fn neg(self) -> GradedPoly<T> {
        -&self
    }
}
