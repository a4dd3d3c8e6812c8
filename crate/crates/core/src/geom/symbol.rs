//! Fiberwise polynomial functions on the cotangent bundle and the canonical
//! Poisson bracket.

use std::sync::Arc;

use crate::chart::{same_chart, Chart, Var};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

use super::bracket::{principal_tensor, BracketMatrix};
use super::pencil::VBracketData;

/// A polynomial in the base coordinates and the momenta `p_a` (parity of
/// `p_a` = parity of `x^a`), living on [`Chart::cotangent`].
pub type SymbolFn<T> = GradedPoly<T>;

/// Base chart variable `v` as a variable of the cotangent chart.
pub fn base_var(base: &Chart, v: Var) -> Var {
    let (m, _) = (base.n_even(), base.n_odd());
    if v.0 < m {
        v
    } else {
        Var(v.0 + m)
    }
}

/// Momentum `p_v` as a variable of the cotangent chart.
pub fn momentum_var(base: &Chart, v: Var) -> Var {
    let (m, q) = (base.n_even(), base.n_odd());
    if v.0 < m {
        Var(v.0 + m)
    } else {
        Var(v.0 + m + q)
    }
}

/// A function on the base as a symbol.
pub fn lift<T: Scalar>(f: &GradedPoly<T>, cot: &Arc<Chart>) -> GradedPoly<T> {
    let base = f.chart();
    let images: Vec<GradedPoly<T>> = base.vars().map(|v| GradedPoly::var(cot, base_var(base, v))).collect();
    f.substitute(&images, cot).expect("parities agree")
}

fn momentum<T: Scalar>(base: &Chart, cot: &Arc<Chart>, v: Var) -> GradedPoly<T> {
    GradedPoly::var(cot, momentum_var(base, v))
}

/// `½ S^{ab} p_b p_a`.
pub fn tensor_symbol<T: Scalar>(s: &BracketMatrix<T>) -> SymbolFn<T> {
    let base = s.chart();
    let cot = base.cotangent();
    let mut out = GradedPoly::zero(&cot);
    for a in base.vars() {
        for b in base.vars() {
            let sab = s.get(a, b);
            if sab.is_zero() {
                continue;
            }
            out = &out + &(&(&lift(sab, &cot) * &momentum(base, &cot, b)) * &momentum(base, &cot, a));
        }
    }
    out.scale(&(T::one() / T::from_i64(2)))
}

/// `γ^a p_a`.
pub fn vector_symbol<T: Scalar>(base: &Arc<Chart>, gamma: &[GradedPoly<T>]) -> SymbolFn<T> {
    let cot = base.cotangent();
    base.vars().fold(GradedPoly::zero(&cot), |acc, a| &acc + &(&lift(&gamma[a.0], &cot) * &momentum(base, &cot, a)))
}

/// Principal symbol `½ S^{ab} p_b p_a` of an operator of order at most two.
pub fn principal_symbol<T: Scalar>(d: &DiffOp<T>) -> Result<SymbolFn<T>> {
    Ok(tensor_symbol(&principal_tensor(d)?))
}

/// Canonical Poisson bracket on `T*M` with `(p_a, x^b) = δ_a^b`:
/// `(F,G) = Σ_a (−1)^{ã(F̃+1)} ∂_{p_a}F ∂_{x^a}G − (−1)^{ãF̃} ∂_{x^a}F ∂_{p_a}G`.
pub fn tstar_bracket<T: Scalar>(base: &Chart, f: &SymbolFn<T>, g: &SymbolFn<T>) -> Result<SymbolFn<T>> {
    same_chart(f.chart(), g.chart())?;
    let cot = f.chart().clone();
    if cot.dim() != 2 * base.dim() {
        return Err(Error::Precondition("symbols must live on the cotangent chart".into()));
    }
    let mut out = GradedPoly::zero(&cot);
    for (fp, fpart) in f.split() {
        if fpart.is_zero() {
            continue;
        }
        for a in base.vars() {
            let odd_a = base.parity(a).is_odd();
            let (xa, pa) = (base_var(base, a), momentum_var(base, a));
            let first = &fpart.partial(pa) * &g.partial(xa);
            let second = &fpart.partial(xa) * &g.partial(pa);
            out = &out + &if odd_a && !fp.is_odd() { -&first } else { first };
            out = &out - &if odd_a && fp.is_odd() { -&second } else { second };
        }
    }
    Ok(out)
}

/// The four expressions `(S,S)`, `(S,γ)`, `(S,θ) + (γ,γ)`, `(γ,θ)` whose
/// vanishing is equivalent to `ord Δ² ≤ 1` for the canonical pencil.
#[derive(Debug, Clone)]
pub struct JacobiReport<T> {
    pub ss: SymbolFn<T>,
    pub sg: SymbolFn<T>,
    pub st_gg: SymbolFn<T>,
    pub gt: SymbolFn<T>,
}

impl<T: Scalar> JacobiReport<T> {
    pub fn slots(&self) -> [&SymbolFn<T>; 4] {
        [&self.ss, &self.sg, &self.st_gg, &self.gt]
    }

    pub fn all_vanish(&self) -> bool {
        self.slots().iter().all(|s| s.is_zero())
    }
}

pub fn jacobi_report<T: Scalar>(data: &VBracketData<T>) -> Result<JacobiReport<T>> {
    if !data.parity().is_odd() {
        return Err(Error::Parity("the report is defined for odd brackets".into()));
    }
    let base = data.chart();
    let cot = base.cotangent();
    let s = tensor_symbol(data.s());
    let g = vector_symbol(base, data.gamma());
    let th = lift(data.theta(), &cot);
    let br = |a: &SymbolFn<T>, b: &SymbolFn<T>| tstar_bracket(base, a, b);
    Ok(JacobiReport {
        ss: br(&s, &s)?,
        sg: br(&s, &g)?,
        st_gg: &br(&s, &th)? + &br(&g, &g)?,
        gt: br(&g, &th)?,
    })
}
