//! Recovering the "action" of a Laplace–Beltrami datum over a
//! nondegenerate odd bracket.

use crate::chart::same_chart;
use crate::error::{Error, Result};
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

use super::bracket::BracketMatrix;
use super::supermatrix;

/// Solves `γ^a = S^{ab} γ_b` for `γ_b`, where the constant part `C` of `S`
/// is invertible and `C⁻¹(S − C)` is nilpotent.
pub fn lower_index<T: Scalar>(s: &BracketMatrix<T>, gamma: &[GradedPoly<T>]) -> Result<Vec<GradedPoly<T>>> {
    let chart = s.chart();
    let n = chart.dim();
    if gamma.len() != n {
        return Err(Error::Precondition(format!("γ needs {n} components")));
    }
    for g in gamma {
        same_chart(chart, g.chart())?;
    }
    let c: Vec<Vec<T>> = s.rows().iter().map(|r| r.iter().map(GradedPoly::constant_term).collect()).collect();
    let c_inv = supermatrix::const_inverse(&c)?;
    let rest: Vec<Vec<GradedPoly<T>>> = s
        .rows()
        .iter()
        .zip(&c)
        .map(|(r, cr)| r.iter().zip(cr).map(|(x, k)| x - &GradedPoly::constant(chart, k.clone())).collect())
        .collect();
    let apply = |m: &[Vec<GradedPoly<T>>], v: &[GradedPoly<T>]| -> Vec<GradedPoly<T>> {
        m.iter()
            .map(|r| r.iter().zip(v).fold(GradedPoly::zero(chart), |acc, (x, y)| &acc + &(x * y)))
            .collect()
    };
    let apply_const = |v: &[GradedPoly<T>]| -> Vec<GradedPoly<T>> {
        c_inv
            .iter()
            .map(|r| r.iter().zip(v).fold(GradedPoly::zero(chart), |acc, (k, y)| &acc + &y.scale(k)))
            .collect()
    };
    // γ_low = C⁻¹(γ − N γ_low), iterated to its fixed point
    let mut low = apply_const(gamma);
    let cap = n * (chart.n_odd() + 1) + 2 * n + 2;
    for _ in 0..cap {
        let nl = apply(&rest, &low);
        let diff: Vec<GradedPoly<T>> = gamma.iter().zip(&nl).map(|(g, x)| g - x).collect();
        let next = apply_const(&diff);
        if next == low {
            return Ok(low);
        }
        low = next;
    }
    Err(Error::NotInvertible("S is not invertible by a terminating series".into()))
}

/// Potential `A` (zero constant term) of a closed polynomial 1-form
/// `ℓ_b = ∂_b A`, by the Euler homotopy.
pub fn antiderivative<T: Scalar>(form: &[GradedPoly<T>]) -> Result<GradedPoly<T>> {
    let chart = match form.first() {
        Some(f) => f.chart().clone(),
        None => return Err(Error::Precondition("empty 1-form".into())),
    };
    let mut euler = GradedPoly::zero(&chart);
    for (b, l) in chart.vars().zip(form) {
        same_chart(&chart, l.chart())?;
        euler = &euler + &(&GradedPoly::var(&chart, b) * l);
    }
    let mut a = GradedPoly::zero(&chart);
    for (m, c) in euler.terms() {
        let d = m.degree();
        if d == 0 {
            continue;
        }
        a = &a + &GradedPoly::monomial(&chart, *m, c.clone() / T::from_i64(d as i64));
    }
    for (b, l) in chart.vars().zip(form) {
        if a.partial(b) != *l {
            return Err(Error::NoSolution("the lowered 1-form is not closed".into()));
        }
    }
    Ok(a)
}

/// The action `A` with `γ^a = S^{ab} ∂_b A`, so that `ρ = e^{−A} Dx`
/// reproduces `γ` through the Laplace–Beltrami data.
pub fn recover_action<T: Scalar>(s: &BracketMatrix<T>, gamma: &[GradedPoly<T>]) -> Result<GradedPoly<T>> {
    if !s.parity().is_odd() {
        return Err(Error::Parity("recover_action needs an odd bracket".into()));
    }
    if gamma.iter().all(GradedPoly::is_zero) {
        return Ok(GradedPoly::zero(s.chart()));
    }
    antiderivative(&lower_index(s, gamma)?)
}
