//! Derived brackets in a Lie superalgebra with a projector onto an abelian
//! subalgebra, with two instances: differential operators and their exact
//! matrices on a Grassmann algebra.

use std::sync::Arc;

use crate::chart::{same_chart, Chart, Parity};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{GradedPoly, Grading};
use crate::scalar::Scalar;

use super::koszul::{koszul_sign, shuffles};

/// A Lie superalgebra `g` with a projector `P` whose image is an abelian
/// subalgebra and whose kernel is a subalgebra.
pub trait LieSuperAlgebra {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, a: &Self::Elem, c: i64) -> Self::Elem;
    fn parity(&self, a: &Self::Elem) -> Grading;
    /// Graded commutator `[a, b]`.
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn project(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.scale(b, -1))
    }
}

/// Checks `P² = P`, `[im P, im P] = 0` and `[ker P, ker P] ⊂ ker P` on the
/// given spanning elements.
pub fn check_instance<A: LieSuperAlgebra>(alg: &A, span: &[A::Elem]) -> Result<()> {
    let mut images = Vec::new();
    let mut kernel = Vec::new();
    for a in span {
        let p = alg.project(a)?;
        if alg.project(&p)? != p {
            return Err(Error::Precondition("projector is not idempotent".into()));
        }
        kernel.push(alg.sub(a, &p)?);
        images.push(p);
    }
    for a in &images {
        for b in &images {
            if !alg.is_zero(&alg.bracket(a, b)?) {
                return Err(Error::Precondition("image of the projector is not abelian".into()));
            }
        }
    }
    for a in &kernel {
        for b in &kernel {
            if !alg.is_zero(&alg.project(&alg.bracket(a, b)?)?) {
                return Err(Error::Precondition("kernel of the projector is not a subalgebra".into()));
            }
        }
    }
    Ok(())
}

fn homogeneous<A: LieSuperAlgebra>(alg: &A, a: &A::Elem) -> Result<Parity> {
    match alg.parity(a) {
        Grading::Homogeneous(p) => Ok(p),
        Grading::Inhomogeneous => Err(Error::Inhomogeneous("bracket arguments must be homogeneous".into())),
    }
}

/// `[…[[Δ, a₁], a₂], …, aₙ]` before projection.
pub fn nested_commutator<A: LieSuperAlgebra>(alg: &A, delta: &A::Elem, args: &[A::Elem]) -> Result<A::Elem> {
    let mut out = delta.clone();
    for a in args {
        out = alg.bracket(&out, a)?;
    }
    Ok(out)
}

/// `{a₁, …, aₙ}_Δ = P[…[[Δ, a₁], a₂], …, aₙ]`.
pub fn derived_bracket_abstract<A: LieSuperAlgebra>(alg: &A, delta: &A::Elem, args: &[A::Elem]) -> Result<A::Elem> {
    for a in args {
        if alg.project(a)? != *a {
            return Err(Error::Precondition("derived-bracket arguments must lie in the image of P".into()));
        }
    }
    alg.project(&nested_commutator(alg, delta, args)?)
}

/// `Jⁿ = Σ_{k+l=n} Σ_{(k,l)-shuffles σ} ε(σ) {{a_{σ1},…,a_{σk}}, a_{σ(k+1)},…,a_{σn}}`
/// with `ε` the Koszul sign of the shuffle.
pub fn jacobiator_abstract<A: LieSuperAlgebra>(alg: &A, delta: &A::Elem, args: &[A::Elem]) -> Result<A::Elem> {
    let n = args.len();
    let parities = args.iter().map(|a| homogeneous(alg, a)).collect::<Result<Vec<_>>>()?;
    let mut out = alg.zero();
    for k in 0..=n {
        for perm in shuffles(k, n - k) {
            let sign = koszul_sign(&perm, &parities)?;
            let inner_args: Vec<A::Elem> = perm[..k].iter().map(|&i| args[i].clone()).collect();
            let inner = derived_bracket_abstract(alg, delta, &inner_args)?;
            let mut outer_args = vec![inner];
            outer_args.extend(perm[k..].iter().map(|&i| args[i].clone()));
            let t = derived_bracket_abstract(alg, delta, &outer_args)?;
            out = alg.add(&out, &alg.scale(&t, sign as i64))?;
        }
    }
    Ok(out)
}

/// Differential operators on a chart with `P(D) = apply(D, 1)·`.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra<T> {
    chart: Arc<Chart>,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> OperatorAlgebra<T> {
    /// Builds the instance and checks its laws on coordinate monomials of
    /// degree ≤ 2 and their products with partial derivatives.
    pub fn new(chart: &Arc<Chart>) -> Result<Self> {
        let alg = OperatorAlgebra { chart: chart.clone(), _marker: std::marker::PhantomData };
        let mut span = Vec::new();
        for m in Monomial::all_up_to(chart, 2) {
            let f = GradedPoly::monomial(chart, m, T::one());
            span.push(DiffOp::mult(&f));
            for v in chart.vars() {
                span.push(&DiffOp::mult(&f) * &DiffOp::partial(chart, v));
            }
        }
        check_instance(&alg, &span)?;
        Ok(alg)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }
}

impl<T: Scalar> LieSuperAlgebra for OperatorAlgebra<T> {
    type Elem = DiffOp<T>;

    fn zero(&self) -> DiffOp<T> {
        DiffOp::zero(&self.chart)
    }

    fn add(&self, a: &DiffOp<T>, b: &DiffOp<T>) -> Result<DiffOp<T>> {
        a.try_add(b)
    }

    fn scale(&self, a: &DiffOp<T>, c: i64) -> DiffOp<T> {
        a.scale(&T::from_i64(c))
    }

    fn parity(&self, a: &DiffOp<T>) -> Grading {
        a.parity_of()
    }

    fn bracket(&self, a: &DiffOp<T>, b: &DiffOp<T>) -> Result<DiffOp<T>> {
        a.commutator(b)
    }

    fn project(&self, a: &DiffOp<T>) -> Result<DiffOp<T>> {
        same_chart(&self.chart, a.chart())?;
        Ok(DiffOp::mult(&a.on_one()))
    }
}

/// Exact square matrix acting on the Grassmann algebra of `ℝ^{0|q}` in the
/// monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannMatrix<T> {
    pub entries: Vec<Vec<T>>,
}

/// The operator algebra of `ℝ^{0|q}` (`q ≤ 3`) computed with `2^q × 2^q`
/// matrices; `P(M)` is left multiplication by `M·1`.
#[derive(Debug, Clone)]
pub struct MatrixOracle<T> {
    chart: Arc<Chart>,
    basis: Vec<Monomial>,
    /// `basis[i]·basis[j] = ±basis[k]`, `true` meaning `−`.
    table: Vec<Vec<Option<(usize, bool)>>>,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> MatrixOracle<T> {
    pub fn new(chart: &Arc<Chart>) -> Result<Self> {
        if chart.n_even() != 0 || chart.n_odd() > 3 {
            return Err(Error::InvalidChart("the matrix oracle needs a purely odd chart with q ≤ 3".into()));
        }
        let mut basis = Monomial::all_up_to(chart, chart.n_odd() as u32);
        basis.sort_by_key(|m| (m.degree(), *m));
        let table = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| a.mul(b).map(|(m, neg)| (basis.iter().position(|x| *x == m).expect("closed basis"), neg)))
                    .collect()
            })
            .collect();
        let alg = MatrixOracle { chart: chart.clone(), basis, table, _marker: std::marker::PhantomData };
        let mut span = Vec::new();
        for m in alg.basis.clone() {
            let f = GradedPoly::monomial(chart, m, T::one());
            span.push(alg.left_mult(&f)?);
            for v in chart.vars() {
                span.push(alg.matrix_of(&(&DiffOp::mult(&f) * &DiffOp::partial(chart, v)))?);
            }
        }
        check_instance(&alg, &span)?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, f: &GradedPoly<T>) -> Vec<T> {
        self.basis.iter().map(|m| f.coeff(m)).collect()
    }

    /// Element of the Grassmann algebra with the given coordinates.
    pub fn element(&self, v: &[T]) -> GradedPoly<T> {
        let mut out = GradedPoly::zero(&self.chart);
        for (m, c) in self.basis.iter().zip(v) {
            out = &out + &GradedPoly::monomial(&self.chart, *m, c.clone());
        }
        out
    }

    /// Matrix of an operator, column `j` being the image of basis monomial `j`.
    pub fn matrix_of(&self, d: &DiffOp<T>) -> Result<GrassmannMatrix<T>> {
        same_chart(&self.chart, d.chart())?;
        let cols = self
            .basis
            .iter()
            .map(|m| Ok(self.coords(&d.apply_poly(&GradedPoly::monomial(&self.chart, *m, T::one()))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.from_columns(cols))
    }

    fn from_columns(&self, cols: Vec<Vec<T>>) -> GrassmannMatrix<T> {
        let n = self.dim();
        GrassmannMatrix { entries: (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect() }
    }

    /// Left multiplication by `f`.
    pub fn left_mult(&self, f: &GradedPoly<T>) -> Result<GrassmannMatrix<T>> {
        same_chart(&self.chart, f.chart())?;
        Ok(self.left_mult_coords(&self.coords(f)))
    }

    fn left_mult_coords(&self, v: &[T]) -> GrassmannMatrix<T> {
        let mut out = self.zero();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, slot) in self.table[i].iter().enumerate() {
                if let Some((k, neg)) = slot {
                    let e = &mut out.entries[*k][j];
                    *e = if *neg { e.clone() - c.clone() } else { e.clone() + c.clone() };
                }
            }
        }
        out
    }

    /// `M·1` as an element of the Grassmann algebra.
    pub fn on_one(&self, a: &GrassmannMatrix<T>) -> GradedPoly<T> {
        let col: Vec<T> = a.entries.iter().map(|r| r[0].clone()).collect();
        self.element(&col)
    }

    fn product(&self, a: &GrassmannMatrix<T>, b: &GrassmannMatrix<T>) -> GrassmannMatrix<T> {
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(T::zero(), |acc, k| {
                            let (x, y) = (&a.entries[i][k], &b.entries[k][j]);
                            if x.is_zero() || y.is_zero() {
                                acc
                            } else {
                                acc + x.clone() * y.clone()
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        GrassmannMatrix { entries }
    }

    fn part(&self, a: &GrassmannMatrix<T>, p: Parity) -> GrassmannMatrix<T> {
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if self.basis[i].parity() + self.basis[j].parity() == p {
                            a.entries[i][j].clone()
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        GrassmannMatrix { entries }
    }

    fn combine(&self, a: &GrassmannMatrix<T>, b: &GrassmannMatrix<T>, sb: T) -> GrassmannMatrix<T> {
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone() * sb.clone()).collect())
            .collect();
        GrassmannMatrix { entries }
    }
}

impl<T: Scalar> LieSuperAlgebra for MatrixOracle<T> {
    type Elem = GrassmannMatrix<T>;

    fn zero(&self) -> GrassmannMatrix<T> {
        let n = self.dim();
        GrassmannMatrix { entries: vec![vec![T::zero(); n]; n] }
    }

    fn add(&self, a: &GrassmannMatrix<T>, b: &GrassmannMatrix<T>) -> Result<GrassmannMatrix<T>> {
        Ok(self.combine(a, b, T::one()))
    }

    fn scale(&self, a: &GrassmannMatrix<T>, c: i64) -> GrassmannMatrix<T> {
        let c = T::from_i64(c);
        GrassmannMatrix { entries: a.entries.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect() }
    }

    fn parity(&self, a: &GrassmannMatrix<T>) -> Grading {
        let even = !self.is_zero(&self.part(a, Parity::Even));
        let odd = !self.is_zero(&self.part(a, Parity::Odd));
        match (even, odd) {
            (true, true) => Grading::Inhomogeneous,
            (false, true) => Grading::Homogeneous(Parity::Odd),
            _ => Grading::Homogeneous(Parity::Even),
        }
    }

    /// `[A, B] = AB − BA + 2·B₁A₁` with `X₁` the odd part.
    fn bracket(&self, a: &GrassmannMatrix<T>, b: &GrassmannMatrix<T>) -> Result<GrassmannMatrix<T>> {
        let ab = self.product(a, b);
        let ba = self.product(b, a);
        let odd = self.product(&self.part(b, Parity::Odd), &self.part(a, Parity::Odd));
        Ok(self.combine(&self.combine(&ab, &ba, -T::one()), &odd, T::from_i64(2)))
    }

    fn project(&self, a: &GrassmannMatrix<T>) -> Result<GrassmannMatrix<T>> {
        let col: Vec<T> = a.entries.iter().map(|r| r[0].clone()).collect();
        Ok(self.left_mult_coords(&col))
    }

    fn is_zero(&self, a: &GrassmannMatrix<T>) -> bool {
        a.entries.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }
}
