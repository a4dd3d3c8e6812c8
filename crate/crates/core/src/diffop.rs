//! Normal-ordered graded differential operators.
//!
//! A term is `c · ŵ^k · ∂^α` with the coefficient `c` on the left, even
//! derivatives before odd ones and odd derivatives in declaration order. The
//! weight symbol `ŵ` stands for the Euler operator `t∂_t` on densities; it is
//! central. Operators whose coefficients involve `ŵ` are pencils.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::chart::{same_chart, Chart, Parity, Var};
use crate::density::DensityElement;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{GradedPoly, Grading};
use crate::scalar::{factorial, Scalar, Weight};

/// Order of an operator; the zero operator sits below every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Zero,
    Finite(u32),
}

impl Order {
    /// `self ≤ r` for an integer bound.
    pub fn at_most(self, r: i64) -> bool {
        match self {
            Order::Zero => true,
            Order::Finite(k) => (k as i64) <= r,
        }
    }

    pub fn as_i64(self) -> Option<i64> {
        match self {
            Order::Zero => None,
            Order::Finite(k) => Some(k as i64),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Zero => f.write_str("zero"),
            Order::Finite(k) => write!(f, "{k}"),
        }
    }
}

/// Key of a normal-ordered term: derivative multi-index and power of `ŵ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpKey {
    pub deriv: Monomial,
    pub wpow: u32,
}

#[derive(Debug, Clone)]
pub struct DiffOp<T> {
    chart: Arc<Chart>,
    terms: BTreeMap<OpKey, GradedPoly<T>>,
}

impl<T: Scalar> PartialEq for DiffOp<T> {
    fn eq(&self, other: &Self) -> bool {
        *self.chart == *other.chart && self.terms == other.terms
    }
}

impl<T: Scalar> DiffOp<T> {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        DiffOp { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        Self::mult(&GradedPoly::one(chart))
    }

    pub fn constant(chart: &Arc<Chart>, c: T) -> Self {
        Self::mult(&GradedPoly::constant(chart, c))
    }

    /// Multiplication operator `f·`.
    pub fn mult(f: &GradedPoly<T>) -> Self {
        let mut op = Self::zero(f.chart());
        op.add_term(OpKey { deriv: Monomial::ONE, wpow: 0 }, f);
        op
    }

    /// `∂_v`.
    pub fn partial(chart: &Arc<Chart>, v: Var) -> Self {
        let mut op = Self::zero(chart);
        op.add_term(OpKey { deriv: Monomial::var(chart, v), wpow: 0 }, &GradedPoly::one(chart));
        op
    }

    pub fn partial_named(chart: &Arc<Chart>, name: &str) -> Result<Self> {
        Ok(Self::partial(chart, chart.var(name)?))
    }

    /// The weight symbol `ŵ`.
    pub fn weight(chart: &Arc<Chart>) -> Self {
        let mut op = Self::zero(chart);
        op.add_term(OpKey { deriv: Monomial::ONE, wpow: 1 }, &GradedPoly::one(chart));
        op
    }

    /// `c · ∂^deriv` with `deriv` a derivative multi-index.
    pub fn term(c: &GradedPoly<T>, deriv: Monomial, wpow: u32) -> Self {
        let mut op = Self::zero(c.chart());
        op.add_term(OpKey { deriv, wpow }, c);
        op
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OpKey, &GradedPoly<T>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, key: OpKey, c: &GradedPoly<T>) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&key) {
            Some(d) => d + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    /// Coefficient of `ŵ^wpow ∂^deriv`.
    pub fn coeff(&self, deriv: Monomial, wpow: u32) -> GradedPoly<T> {
        self.terms
            .get(&OpKey { deriv, wpow })
            .cloned()
            .unwrap_or_else(|| GradedPoly::zero(&self.chart))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, c) in &self.terms {
            out.add_term(*k, &c.scale(s));
        }
        out
    }

    /// Order in the chart variables; `ŵ` does not count.
    pub fn order_of(&self) -> Order {
        self.terms
            .keys()
            .map(|k| k.deriv.degree())
            .max()
            .map_or(Order::Zero, Order::Finite)
    }

    /// Order as an operator on the algebra of densities, where `ŵ = t∂_t`
    /// counts as a first-order operator.
    pub fn order_in_densities(&self) -> Order {
        self.terms
            .keys()
            .map(|k| k.deriv.degree() + k.wpow)
            .max()
            .map_or(Order::Zero, Order::Finite)
    }

    /// Highest power of `ŵ` present.
    pub fn weight_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.wpow).max().unwrap_or(0)
    }

    pub fn is_weight_free(&self) -> bool {
        self.terms.keys().all(|k| k.wpow == 0)
    }

    /// The part of the given parity.
    pub fn part(&self, p: Parity) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, c) in &self.terms {
            let dp = k.deriv.parity();
            out.add_term(*k, &c.part(p + dp));
        }
        out
    }

    pub fn split(&self) -> [(Parity, Self); 2] {
        [(Parity::Even, self.part(Parity::Even)), (Parity::Odd, self.part(Parity::Odd))]
    }

    pub fn parity_of(&self) -> Grading {
        let even = self.part(Parity::Even);
        let odd = self.part(Parity::Odd);
        match (even.is_zero(), odd.is_zero()) {
            (_, true) => Grading::Homogeneous(Parity::Even),
            (true, false) => Grading::Homogeneous(Parity::Odd),
            (false, false) => Grading::Inhomogeneous,
        }
    }

    pub fn homogeneous_parity(&self, what: &str) -> Result<Parity> {
        self.parity_of()
            .parity()
            .ok_or_else(|| Error::Inhomogeneous(format!("{what} must be homogeneous")))
    }

    /// Applies the derivative multi-index `deriv` to `f`.
    fn apply_deriv(chart: &Chart, deriv: &Monomial, f: &GradedPoly<T>) -> GradedPoly<T> {
        let mut g = f.clone();
        // the rightmost odd derivative acts first
        for v in (chart.n_even()..chart.dim()).rev() {
            if deriv.count(chart, Var(v)) == 1 {
                g = g.partial(Var(v));
            }
        }
        for i in 0..chart.n_even() {
            for _ in 0..deriv.exp(i) {
                g = g.partial(Var(i));
            }
        }
        g
    }

    /// Action on a function (a weight-zero density).
    pub fn apply_poly(&self, f: &GradedPoly<T>) -> Result<GradedPoly<T>> {
        same_chart(&self.chart, f.chart())?;
        let mut out = GradedPoly::zero(&self.chart);
        for (k, c) in &self.terms {
            if k.wpow > 0 {
                continue;
            }
            let d = Self::apply_deriv(&self.chart, &k.deriv, f);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        Ok(out)
    }

    /// Action on a density element; `ŵ` acts on the weight-`w` component as
    /// multiplication by `w`.
    pub fn apply(&self, psi: &DensityElement<T>) -> Result<DensityElement<T>> {
        same_chart(&self.chart, psi.chart())?;
        let mut out = DensityElement::zero(&self.chart);
        for (w, f) in psi.parts() {
            let wv = T::from_weight(w);
            let mut acc = GradedPoly::zero(&self.chart);
            for (k, c) in &self.terms {
                let factor = wv.pow_u32(k.wpow);
                if factor.is_zero() {
                    continue;
                }
                let d = Self::apply_deriv(&self.chart, &k.deriv, f);
                if !d.is_zero() {
                    acc = &acc + &(c * &d).scale(&factor);
                }
            }
            out.add_part(*w, &acc);
        }
        Ok(out)
    }

    /// `∂_v ∘ self`, normal ordered.
    fn left_partial(&self, v: Var) -> Self {
        let chart = &self.chart;
        let vp = chart.parity(v);
        let vm = Monomial::var(chart, v);
        let mut out = Self::zero(chart);
        for (k, c) in &self.terms {
            out.add_term(*k, &c.partial(v));
            if let Some((deriv, neg)) = vm.mul(&k.deriv) {
                for (p, cp) in c.split() {
                    if cp.is_zero() {
                        continue;
                    }
                    let s = neg ^ (vp.is_odd() && p.is_odd());
                    let key = OpKey { deriv, wpow: k.wpow };
                    out.add_term(key, &if s { -&cp } else { cp });
                }
            }
        }
        out
    }

    /// `∂^deriv ∘ self`.
    fn left_deriv(&self, deriv: &Monomial) -> Self {
        let chart = self.chart.clone();
        let mut out = self.clone();
        for v in (chart.n_even()..chart.dim()).rev() {
            if deriv.count(&chart, Var(v)) == 1 {
                out = out.left_partial(Var(v));
            }
        }
        for i in 0..chart.n_even() {
            for _ in 0..deriv.exp(i) {
                out = out.left_partial(Var(i));
            }
        }
        out
    }

    /// `c ŵ^k ∘ self`.
    fn left_coeff(&self, c: &GradedPoly<T>, wpow: u32) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, e) in &self.terms {
            out.add_term(OpKey { deriv: k.deriv, wpow: k.wpow + wpow }, &(c * e));
        }
        out
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = Self::zero(&self.chart);
        // group terms of self by derivative so each ∂^α ∘ other is computed once
        let mut by_deriv: BTreeMap<Monomial, Vec<(u32, &GradedPoly<T>)>> = BTreeMap::new();
        for (k, c) in &self.terms {
            by_deriv.entry(k.deriv).or_default().push((k.wpow, c));
        }
        for (deriv, cs) in by_deriv {
            let d = other.left_deriv(&deriv);
            for (wpow, c) in cs {
                out = out.try_add(&d.left_coeff(c, wpow))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(&self.chart);
        for _ in 0..k {
            acc = acc.compose(self).expect("same chart");
        }
        acc
    }

    /// Graded commutator `[D, E] = DE − (−1)^{D̃Ẽ} ED`, extended bilinearly
    /// to inhomogeneous operands.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = Self::zero(&self.chart);
        for (p, d) in self.split() {
            if d.is_zero() {
                continue;
            }
            for (q, e) in other.split() {
                if e.is_zero() {
                    continue;
                }
                let de = d.compose(&e)?;
                let ed = e.compose(&d)?;
                let term = if p.is_odd() && q.is_odd() { de.try_add(&ed)? } else { de.try_sub(&ed)? };
                out = out.try_add(&term)?;
            }
        }
        Ok(out)
    }

    /// `[D, f·]`.
    pub fn commutator_with(&self, f: &GradedPoly<T>) -> Result<Self> {
        self.commutator(&Self::mult(f))
    }

    /// `e^{−u} ∘ D ∘ e^{u}` for an even order-zero operator `u` (possibly
    /// involving `ŵ`): the terminating series `Σ_k (1/k!) ad_u^k D` with
    /// `ad_u X = [X, u]`.
    pub fn conjugate_by_exp_op(&self, u: &Self) -> Result<Self> {
        same_chart(&self.chart, u.chart())?;
        if u.order_of() > Order::Finite(0) {
            return Err(Error::Precondition("exponent must be a multiplication operator".into()));
        }
        if !u.part(Parity::Odd).is_zero() {
            return Err(Error::Parity("exponent must be even".into()));
        }
        let mut out = self.clone();
        let mut ad = self.clone();
        let mut k = 0u32;
        loop {
            k += 1;
            ad = ad.commutator(u)?;
            if ad.is_zero() {
                break;
            }
            out = out.try_add(&ad.scale(&(T::one() / factorial::<T>(k))))?;
        }
        Ok(out)
    }

    /// `e^{−u} D e^{u}` when `sign > 0`, `e^{u} D e^{−u}` when `sign < 0`.
    pub fn conjugate_by_exp(&self, u: &GradedPoly<T>, sign_: i32) -> Result<Self> {
        match u.parity_of() {
            Grading::Homogeneous(Parity::Even) => {}
            Grading::Homogeneous(Parity::Odd) => {
                return Err(Error::Parity("exponent must be even".into()))
            }
            Grading::Inhomogeneous => {
                return Err(Error::Inhomogeneous("exponent has mixed parity".into()))
            }
        }
        let u = if sign_ < 0 { -u } else { u.clone() };
        self.conjugate_by_exp_op(&Self::mult(&u))
    }

    /// Formal adjoint with `(f·)* = f·`, `(∂_a)* = −∂_a`, `ŵ* = 1 − ŵ` and
    /// `(DE)* = (−1)^{D̃Ẽ} E* D*`.
    ///
    /// For a normal-ordered term `c ŵ^k ∂^α` with `r` odd derivatives this
    /// gives `(−1)^{|α| + c̃ r} ∂^α ∘ (1 − ŵ)^k ∘ c`.
    pub fn formal_adjoint(&self) -> Self {
        let chart = &self.chart;
        let mut out = Self::zero(chart);
        for (k, c) in &self.terms {
            let r = k.deriv.odd_count();
            let n = k.deriv.degree();
            // (1 − ŵ)^k as an operator
            let one_minus_w = Self::identity(chart).try_sub(&Self::weight(chart)).expect("same chart");
            let wfac = one_minus_w.pow(k.wpow);
            for (p, cp) in c.split() {
                if cp.is_zero() {
                    continue;
                }
                let inner = wfac.compose(&Self::mult(&cp)).expect("same chart");
                let mut t = inner.left_deriv(&k.deriv);
                if (n + if p.is_odd() { r } else { 0 }) % 2 == 1 {
                    t = t.scale(&-T::one());
                }
                out = out.try_add(&t).expect("same chart");
            }
        }
        out
    }

    /// Adjoint of a pencil; identical to [`DiffOp::formal_adjoint`], which
    /// already treats `ŵ* = 1 − ŵ`.
    pub fn pencil_adjoint(&self) -> Self {
        self.formal_adjoint()
    }

    /// Substitutes `ŵ := w0`.
    pub fn specialize(&self, w0: &Weight) -> Self {
        let wv = T::from_weight(w0);
        let mut out = Self::zero(&self.chart);
        for (k, c) in &self.terms {
            let f = wv.pow_u32(k.wpow);
            out.add_term(OpKey { deriv: k.deriv, wpow: 0 }, &c.scale(&f));
        }
        out
    }

    /// Coefficient operator of `ŵ^k`.
    pub fn weight_slice(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.chart);
        for (key, c) in &self.terms {
            if key.wpow == k {
                out.add_term(OpKey { deriv: key.deriv, wpow: 0 }, c);
            }
        }
        out
    }

    /// `ŵ^k ∘ self`.
    pub fn times_weight_pow(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.chart);
        for (key, c) in &self.terms {
            out.add_term(OpKey { deriv: key.deriv, wpow: key.wpow + k }, c);
        }
        out
    }

    /// Reconstructs a weight-free operator of order at most `max_order` from
    /// its action on monomials.
    pub fn from_action(
        chart: &Arc<Chart>,
        max_order: u32,
        mut action: impl FnMut(&GradedPoly<T>) -> Result<GradedPoly<T>>,
    ) -> Result<Self> {
        let mut out = Self::zero(chart);
        let mut idx = Monomial::all_up_to(chart, max_order);
        idx.sort_by_key(|m| (m.degree(), *m));
        for alpha in idx {
            let probe = GradedPoly::monomial(chart, alpha, T::one());
            let mut rest = action(&probe)?;
            rest = &rest - &out.apply_poly(&probe)?;
            if rest.is_zero() {
                continue;
            }
            let norm = Self::apply_deriv(chart, &alpha, &probe).constant_term();
            let c = rest.scale(&(T::one() / norm));
            out.add_term(OpKey { deriv: alpha, wpow: 0 }, &c);
        }
        Ok(out)
    }

    /// Maps every coefficient through `f` (keys unchanged).
    pub fn map_coeffs(&self, mut f: impl FnMut(&GradedPoly<T>) -> Result<GradedPoly<T>>) -> Result<Self> {
        let mut out = Self::zero(&self.chart);
        for (k, c) in &self.terms {
            let g = f(c)?;
            out.add_term(*k, &g);
        }
        Ok(out)
    }

    /// Multiplication-operator part `apply(D, 1)`.
    pub fn on_one(&self) -> GradedPoly<T> {
        self.apply_poly(&GradedPoly::one(&self.chart)).expect("same chart")
    }
}

impl<'a, T: Scalar> std::ops::Add for &'a DiffOp<T> {
    type Output = DiffOp<T>;
    fn add(self, rhs: Self) -> DiffOp<T> {
        self.try_add(rhs).expect("chart mismatch")
    }
}

impl<'a, T: Scalar> std::ops::Sub for &'a DiffOp<T> {
    type Output = DiffOp<T>;
    fn sub(self, rhs: Self) -> DiffOp<T> {
        self.try_sub(rhs).expect("chart mismatch")
    }
}

impl<'a, T: Scalar> std::ops::Mul for &'a DiffOp<T> {
    type Output = DiffOp<T>;
    fn mul(self, rhs: Self) -> DiffOp<T> {
        self.compose(rhs).expect("chart mismatch")
    }
}

impl<'a, T: Scalar> std::ops::Neg for &'a DiffOp<T> {
    type Output = DiffOp<T>;
    fn neg(self) -> DiffOp<T> {
        self.scale(&-T::one())
    }
}
