//! Odd Laplacians of volume forms, modular vector fields, and their action
//! on densities of arbitrary weight.

use crate::chart::{same_chart, Chart, Parity, Var};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::{GradedPoly, Grading};
use crate::scalar::{Scalar, Weight};

use super::bracket::{check_order, BracketMatrix};

/// Logarithm `σ` of a volume form `ρ = e^σ Dx`.
#[derive(Debug, Clone)]
pub struct LogVolume<T> {
    sigma: GradedPoly<T>,
}

impl<T: Scalar> PartialEq for LogVolume<T> {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma
    }
}

impl<T: Scalar> LogVolume<T> {
    pub fn new(sigma: GradedPoly<T>) -> Result<Self> {
        match sigma.parity_of() {
            Grading::Homogeneous(Parity::Even) => Ok(LogVolume { sigma }),
            _ => Err(Error::Parity("log-volume must be even".into())),
        }
    }

    /// The coordinate volume `Dx`.
    pub fn flat(chart: &std::sync::Arc<Chart>) -> Self {
        LogVolume { sigma: GradedPoly::zero(chart) }
    }

    pub fn sigma(&self) -> &GradedPoly<T> {
        &self.sigma
    }

    /// `e^{σ'} ρ`.
    pub fn shifted(&self, by: &LogVolume<T>) -> Result<Self> {
        Ok(LogVolume { sigma: self.sigma.try_add(&by.sigma)? })
    }
}

// Σ_{a,b} (−1)^{ã(ε+1)} (∂_a + ∂_aσ)∘S^{ab}∘∂_b
fn divergence_form<T: Scalar>(
    chart: &std::sync::Arc<Chart>,
    eps: Parity,
    entry: impl Fn(Var, Var) -> GradedPoly<T>,
    sigma: &GradedPoly<T>,
) -> Result<DiffOp<T>> {
    let mut out = DiffOp::zero(chart);
    for a in chart.vars() {
        let left = DiffOp::partial(chart, a).try_add(&DiffOp::mult(&sigma.partial(a)))?;
        let mut inner = DiffOp::zero(chart);
        for b in chart.vars() {
            let sab = entry(a, b);
            if !sab.is_zero() {
                inner = inner.try_add(&DiffOp::mult(&sab).compose(&DiffOp::partial(chart, b))?)?;
            }
        }
        if inner.is_zero() {
            continue;
        }
        let t = left.compose(&inner)?;
        let neg = chart.parity(a).is_odd() && !eps.is_odd();
        out = if neg { out.try_sub(&t)? } else { out.try_add(&t)? };
    }
    Ok(out)
}

/// `Δ_ρ f = ½ ρ^{−1} ∂_a(ρ S^{ab} ∂_b f)` for an odd tensor `S`.
pub fn odd_laplacian<T: Scalar>(s: &BracketMatrix<T>, sigma: &LogVolume<T>) -> Result<DiffOp<T>> {
    if !s.parity().is_odd() {
        return Err(Error::Parity("odd Laplacian needs an odd bracket".into()));
    }
    laplacian(s, sigma)
}

/// The same divergence construction for a tensor of either parity.
pub fn laplacian<T: Scalar>(s: &BracketMatrix<T>, sigma: &LogVolume<T>) -> Result<DiffOp<T>> {
    same_chart(s.chart(), sigma.sigma().chart())?;
    let d = divergence_form(s.chart(), s.parity(), |a, b| s.get(a, b).clone(), sigma.sigma())?;
    Ok(d.scale(&(T::one() / T::from_i64(2))))
}

/// Modular vector field `f ↦ ρ^{−1} ∂_a(ρ P^{ab} ∂_b f)` of an even
/// bivector `P` (`P^{ab} = −(−1)^{ãb̃} P^{ba}`).
pub fn modular_vf<T: Scalar>(
    chart: &std::sync::Arc<Chart>,
    p: &[Vec<GradedPoly<T>>],
    sigma: &LogVolume<T>,
) -> Result<DiffOp<T>> {
    let n = chart.dim();
    if p.len() != n || p.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition(format!("bivector must be {n}×{n}")));
    }
    for a in chart.vars() {
        for b in chart.vars() {
            let v = &p[a.0][b.0];
            same_chart(chart, v.chart())?;
            let want = chart.parity(a) + chart.parity(b);
            if !v.is_zero() && v.parity_of() != Grading::Homogeneous(want) {
                return Err(Error::Parity(format!(
                    "entry [{}, {}] must be {want}",
                    chart.name(a),
                    chart.name(b)
                )));
            }
            let m = &p[b.0][a.0];
            let mirror = if chart.parity(a).is_odd() && chart.parity(b).is_odd() { m.clone() } else { -m };
            if *v != mirror {
                return Err(Error::Precondition("bivector is not antisymmetric".into()));
            }
        }
    }
    let d = divergence_form(chart, Parity::Even, |a, b| p[a.0][b.0].clone(), sigma.sigma())?;
    check_order(&d, 1, "modular field")?;
    Ok(d)
}

/// `Δ_ρ` acting on densities of weight `w`: `ψ ↦ ρ^w Δ_ρ(ρ^{−w} ψ)`, as an
/// operator on the coefficient of `(Dx)^w`.
pub fn act_on_w_densities<T: Scalar>(s: &BracketMatrix<T>, sigma: &LogVolume<T>, w: &Weight) -> Result<DiffOp<T>> {
    let d = odd_laplacian(s, sigma)?;
    let u = sigma.sigma().scale(&-T::from_weight(w));
    d.conjugate_by_exp(&u, 1)
}

/// `H(ρ′, ρ) = e^{−σ/2} Δ_ρ(e^{σ/2})` for `ρ′ = e^σ ρ`.
pub fn master_discrepancy<T: Scalar>(s: &BracketMatrix<T>, sigma0: &LogVolume<T>, sigma: &LogVolume<T>) -> Result<GradedPoly<T>> {
    let d = odd_laplacian(s, sigma0)?;
    let half = sigma.sigma().scale(&(T::one() / T::from_i64(2)));
    Ok(d.conjugate_by_exp(&half, 1)?.on_one())
}
