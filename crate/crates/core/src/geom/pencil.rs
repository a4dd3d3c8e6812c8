//! Weight-zero brackets on the algebra of densities and their canonical
//! generating pencils.

use std::sync::Arc;

use crate::chart::{same_chart, Chart, Parity, Var};
use crate::density::DensityElement;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{GradedPoly, Grading};
use crate::scalar::Scalar;

use super::bracket::{check_order, coordinate_bracket, principal_tensor, tensor_divergence, BracketMatrix};
use super::laplacian::LogVolume;

/// The triple `(S^{ab}, γ^a, θ)` of a weight-zero bracket on densities.
#[derive(Debug, Clone)]
pub struct VBracketData<T> {
    s: BracketMatrix<T>,
    gamma: Vec<GradedPoly<T>>,
    theta: GradedPoly<T>,
}

impl<T: Scalar> PartialEq for VBracketData<T> {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.gamma == other.gamma && self.theta == other.theta
    }
}

fn check_parity<T: Scalar>(v: &GradedPoly<T>, want: Parity, what: &str) -> Result<()> {
    match v.parity_of() {
        Grading::Homogeneous(p) if p == want || v.is_zero() => Ok(()),
        _ => Err(Error::Parity(format!("{what} must be {want}"))),
    }
}

impl<T: Scalar> VBracketData<T> {
    pub fn new(s: BracketMatrix<T>, gamma: Vec<GradedPoly<T>>, theta: GradedPoly<T>) -> Result<Self> {
        let chart = s.chart().clone();
        let eps = s.parity();
        if gamma.len() != chart.dim() {
            return Err(Error::Precondition(format!("γ needs {} components", chart.dim())));
        }
        for (a, g) in gamma.iter().enumerate() {
            same_chart(&chart, g.chart())?;
            check_parity(g, eps + chart.parity(Var(a)), &format!("γ^{}", chart.name(Var(a))))?;
        }
        same_chart(&chart, theta.chart())?;
        check_parity(&theta, eps, "θ")?;
        Ok(VBracketData { s, gamma, theta })
    }

    /// `(S, 0, 0)`.
    pub fn from_tensor(s: BracketMatrix<T>) -> Self {
        let chart = s.chart().clone();
        VBracketData {
            gamma: vec![GradedPoly::zero(&chart); chart.dim()],
            theta: GradedPoly::zero(&chart),
            s,
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.s.chart()
    }

    pub fn parity(&self) -> Parity {
        self.s.parity()
    }

    pub fn s(&self) -> &BracketMatrix<T> {
        &self.s
    }

    pub fn gamma(&self) -> &[GradedPoly<T>] {
        &self.gamma
    }

    pub fn theta(&self) -> &GradedPoly<T> {
        &self.theta
    }
}

/// The canonical pencil
/// `Δ_w = ½(S^{ab}∂_b∂_a + (∂_bS^{ba}(−1)^{b̃(ε+1)} + (2w−1)γ^a)∂_a
///        + w ∂_aγ^a(−1)^{ã(ε+1)} + w(w−1)θ)`.
pub fn canonical_pencil<T: Scalar>(data: &VBracketData<T>) -> DiffOp<T> {
    let chart = data.chart();
    let eps = data.parity();
    let s = data.s();
    let w = DiffOp::weight(chart);
    let one = DiffOp::identity(chart);
    let two_w_minus_one = &w.scale(&T::from_i64(2)) - &one;
    let mut out = DiffOp::zero(chart);
    for a in chart.vars() {
        for b in chart.vars() {
            let sab = s.get(a, b);
            if sab.is_zero() {
                continue;
            }
            let t = &(&DiffOp::mult(sab) * &DiffOp::partial(chart, b)) * &DiffOp::partial(chart, a);
            out = &out + &t;
        }
    }
    let mut zero_order = GradedPoly::zero(chart);
    for a in chart.vars() {
        let da = DiffOp::partial(chart, a);
        out = &out + &(&DiffOp::mult(&tensor_divergence(s, a)) * &da);
        let g = &data.gamma()[a.0];
        out = &out + &(&(&two_w_minus_one * &DiffOp::mult(g)) * &da);
        let dg = g.partial(a);
        let neg = chart.parity(a).is_odd() && !eps.is_odd();
        zero_order = &zero_order + &if neg { -&dg } else { dg };
    }
    out = &out + &(&w * &DiffOp::mult(&zero_order));
    out = &out + &(&(&w * &(&w - &one)) * &DiffOp::mult(data.theta()));
    out.scale(&(T::one() / T::from_i64(2)))
}

/// Laplace–Beltrami data of a volume form `ρ = e^σ Dx`:
/// `γ^a = −S^{ab}∂_bσ` and `θ = {σ, σ}`, so that the canonical pencil is
/// `w ↦ ρ^w Δ_ρ ρ^{−w}` and its value at `w = 0` is the odd Laplacian.
pub fn lb_data<T: Scalar>(s: &BracketMatrix<T>, sigma: &LogVolume<T>) -> Result<VBracketData<T>> {
    let chart = s.chart();
    same_chart(chart, sigma.sigma().chart())?;
    let sg = sigma.sigma();
    let gamma = chart
        .vars()
        .map(|a| coordinate_bracket(s, sg, &GradedPoly::var(chart, a)).map(|v| -&v))
        .collect::<Result<Vec<_>>>()?;
    let theta = coordinate_bracket(s, sg, sg)?;
    VBracketData::new(s.clone(), gamma, theta)
}

/// Bracket generated by a pencil on densities:
/// `{ψ,χ} = P(ψχ) − (Pψ)χ − (−1)^{εψ̃} ψ(Pχ)`.
pub fn pencil_bracket<T: Scalar>(
    p: &DiffOp<T>,
    psi: &DensityElement<T>,
    chi: &DensityElement<T>,
) -> Result<DensityElement<T>> {
    let eps = p.homogeneous_parity("pencil")?;
    check_order(p, 2, "pencil")?;
    let pchi = p.apply(chi)?;
    let mut out = DensityElement::zero(p.chart());
    for par in [Parity::Even, Parity::Odd] {
        let part = psi.part(par);
        if part.is_zero() {
            continue;
        }
        let mut t = p.apply(&part.multiply(chi)?)?.try_sub(&p.apply(&part)?.multiply(chi)?)?;
        let third = part.multiply(&pchi)?;
        t = if eps.is_odd() && par.is_odd() { t.try_add(&third)? } else { t.try_sub(&third)? };
        out = out.try_add(&t)?;
    }
    Ok(out)
}

/// Inverse of [`canonical_pencil`] on normalized self-adjoint pencils.
pub fn extract_vbracket<T: Scalar>(p: &DiffOp<T>) -> Result<VBracketData<T>> {
    let eps = p.homogeneous_parity("pencil")?;
    let s = principal_tensor(p)?;
    if s.parity() != eps {
        return Err(Error::Parity("principal symbol parity differs from the pencil".into()));
    }
    let chart = p.chart();
    let gamma: Vec<GradedPoly<T>> = chart
        .vars()
        .map(|a| p.coeff(Monomial::var(chart, a), 1))
        .collect();
    let theta = p.coeff(Monomial::ONE, 2).scale(&T::from_i64(2));
    let data = VBracketData::new(s, gamma, theta)?;
    if canonical_pencil(&data) != *p {
        let reason = if !p.specialize(&crate::scalar::Weight::from_integer(0)).on_one().is_zero() {
            "Δ_0(1) ≠ 0"
        } else {
            "pencil is not the self-adjoint generator of its bracket"
        };
        return Err(Error::NotNormalized(reason.into()));
    }
    Ok(data)
}
