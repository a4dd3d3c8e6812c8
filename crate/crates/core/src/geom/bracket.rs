//! Bracket data, brackets generated by operators, and Hamiltonian fields.

use std::sync::Arc;

use crate::chart::{same_chart, Chart, Parity, Var};
use crate::diffop::{DiffOp, Order};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{GradedPoly, Grading};
use crate::scalar::Scalar;

/// A graded-symmetric contravariant 2-tensor `S^{ab}` of parity `ε`:
/// `S^{ab}` has parity `ε + ã + b̃` and `S^{ab} = (−1)^{ãb̃} S^{ba}`.
#[derive(Debug, Clone)]
pub struct BracketMatrix<T> {
    chart: Arc<Chart>,
    parity: Parity,
    entries: Vec<Vec<GradedPoly<T>>>,
}

impl<T: Scalar> PartialEq for BracketMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.parity == other.parity && self.entries == other.entries
    }
}

fn swap_sign_odd(chart: &Chart, a: Var, b: Var) -> bool {
    chart.parity(a).is_odd() && chart.parity(b).is_odd()
}

impl<T: Scalar> BracketMatrix<T> {
    pub fn zero(chart: &Arc<Chart>, parity: Parity) -> Self {
        let n = chart.dim();
        BracketMatrix {
            chart: chart.clone(),
            parity,
            entries: vec![vec![GradedPoly::zero(chart); n]; n],
        }
    }

    /// Builds the tensor from a list of entries; each `(a, b)` entry also sets
    /// its mirror `(b, a)`. Entries that contradict each other or have the
    /// wrong parity are rejected.
    pub fn from_entries(
        chart: &Arc<Chart>,
        parity: Parity,
        entries: impl IntoIterator<Item = (Var, Var, GradedPoly<T>)>,
    ) -> Result<Self> {
        let mut m = Self::zero(chart, parity);
        let mut set = vec![vec![false; chart.dim()]; chart.dim()];
        for (a, b, v) in entries {
            same_chart(chart, v.chart())?;
            let want = parity + chart.parity(a) + chart.parity(b);
            match v.parity_of() {
                Grading::Homogeneous(p) if p == want || v.is_zero() => {}
                _ => {
                    return Err(Error::Parity(format!(
                        "entry [{}, {}] must be {want}",
                        chart.name(a),
                        chart.name(b)
                    )))
                }
            }
            let mirror = if swap_sign_odd(chart, a, b) { -&v } else { v.clone() };
            if a == b && mirror != v {
                return Err(Error::Precondition(format!(
                    "diagonal entry [{0}, {0}] of an odd variable must vanish",
                    chart.name(a)
                )));
            }
            for (i, j, val) in [(a, b, &v), (b, a, &mirror)] {
                if set[i.0][j.0] && m.entries[i.0][j.0] != *val {
                    return Err(Error::Precondition(format!(
                        "entries [{}, {}] are not graded-symmetric",
                        chart.name(a),
                        chart.name(b)
                    )));
                }
                set[i.0][j.0] = true;
                m.entries[i.0][j.0] = val.clone();
            }
        }
        Ok(m)
    }

    /// Checks a full matrix for parity and graded symmetry.
    pub fn from_matrix(chart: &Arc<Chart>, parity: Parity, entries: Vec<Vec<GradedPoly<T>>>) -> Result<Self> {
        let n = chart.dim();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition(format!("tensor must be {n}×{n}")));
        }
        let list = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
        let items: Vec<_> = list.map(|(i, j)| (Var(i), Var(j), entries[i][j].clone())).collect();
        Self::from_entries(chart, parity, items)
    }

    /// The standard odd symplectic tensor pairing the i-th even variable with
    /// the i-th odd variable (`S^{x_i ξ_i} = S^{ξ_i x_i} = 1`).
    pub fn standard_odd(chart: &Arc<Chart>) -> Self {
        let k = chart.n_even().min(chart.n_odd());
        let entries = (0..k).map(|i| (Var(i), Var(chart.n_even() + i), GradedPoly::one(chart)));
        Self::from_entries(chart, Parity::Odd, entries.collect::<Vec<_>>()).expect("valid")
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn get(&self, a: Var, b: Var) -> &GradedPoly<T> {
        &self.entries[a.0][b.0]
    }

    pub fn rows(&self) -> &[Vec<GradedPoly<T>>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(GradedPoly::is_zero)
    }

    /// Maps every entry, keeping the parity.
    pub fn map_entries(&self, mut f: impl FnMut(&GradedPoly<T>) -> Result<GradedPoly<T>>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(&mut f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BracketMatrix { chart: self.chart.clone(), parity: self.parity, entries })
    }
}

/// The coordinate bracket `{f,g} = S^{ab} ∂_b f ∂_a g (−1)^{ã f̃}`.
pub fn coordinate_bracket<T: Scalar>(s: &BracketMatrix<T>, f: &GradedPoly<T>, g: &GradedPoly<T>) -> Result<GradedPoly<T>> {
    same_chart(s.chart(), f.chart())?;
    same_chart(s.chart(), g.chart())?;
    let chart = s.chart();
    let mut out = GradedPoly::zero(chart);
    let dg: Vec<GradedPoly<T>> = chart.vars().map(|a| g.partial(a)).collect();
    for (fp, fpart) in f.split() {
        if fpart.is_zero() {
            continue;
        }
        for b in chart.vars() {
            let dfb = fpart.partial(b);
            if dfb.is_zero() {
                continue;
            }
            for a in chart.vars() {
                let sab = s.get(a, b);
                if sab.is_zero() || dg[a.0].is_zero() {
                    continue;
                }
                let mut t = &(sab * &dfb) * &dg[a.0];
                if chart.parity(a).is_odd() && fp.is_odd() {
                    t = -&t;
                }
                out = &out + &t;
            }
        }
    }
    Ok(out)
}

/// The odd Poisson bracket `{f,g}_P = (−1)^{f̃+1} {f,g}` associated with an
/// odd tensor; with it the odd Laplacian satisfies
/// `Δ(fg) = (Δf)g + (−1)^{f̃} f(Δg) + (−1)^{f̃+1}{f,g}_P`.
pub fn odd_poisson_bracket<T: Scalar>(s: &BracketMatrix<T>, f: &GradedPoly<T>, g: &GradedPoly<T>) -> Result<GradedPoly<T>> {
    let mut out = GradedPoly::zero(s.chart());
    for (p, fp) in f.split() {
        if fp.is_zero() {
            continue;
        }
        let b = coordinate_bracket(s, &fp, g)?;
        out = &out + &if p.is_odd() { b } else { -&b };
    }
    Ok(out)
}

/// Bracket generated by an operator:
/// `{f,g} = Δ(fg) − (Δf)g − (−1)^{εf̃} f(Δg) + Δ(1)fg`.
pub fn bracket_from_operator<T: Scalar>(d: &DiffOp<T>, f: &GradedPoly<T>, g: &GradedPoly<T>) -> Result<GradedPoly<T>> {
    let eps = d.homogeneous_parity("generating operator")?;
    same_chart(d.chart(), f.chart())?;
    same_chart(d.chart(), g.chart())?;
    let d0 = d.weight_slice(0);
    let one = d0.on_one();
    let dg = d0.apply_poly(g)?;
    let mut out = GradedPoly::zero(d.chart());
    for (fp, fpart) in f.split() {
        if fpart.is_zero() {
            continue;
        }
        let fg = &fpart * g;
        let mut t = &d0.apply_poly(&fg)? - &(&d0.apply_poly(&fpart)? * g);
        let third = &fpart * &dg;
        t = if eps.is_odd() && fp.is_odd() { &t + &third } else { &t - &third };
        t = &t + &(&one * &fg);
        out = &out + &t;
    }
    Ok(out)
}

/// Principal symbol `S^{ab}` of an operator of order at most two, read from
/// the second-order coefficients of its weight-free part.
pub fn principal_tensor<T: Scalar>(d: &DiffOp<T>) -> Result<BracketMatrix<T>> {
    let eps = d.homogeneous_parity("operator")?;
    let d0 = d.weight_slice(0);
    check_order(&d0, 2, "operator")?;
    let chart = d.chart();
    let mut entries = Vec::new();
    for a in chart.vars() {
        for b in chart.vars() {
            if b < a {
                continue;
            }
            let key = match Monomial::var(chart, a).mul(&Monomial::var(chart, b)) {
                Some((m, _)) => m,
                None => continue,
            };
            let c = d0.coeff(key, 0);
            if c.is_zero() {
                continue;
            }
            // coefficient of ∂_a∂_b (a ≤ b) is S^{ba}, or ½S^{aa} on the diagonal
            let v = if a == b { c.scale(&T::from_i64(2)) } else { c };
            entries.push((b, a, v));
        }
    }
    BracketMatrix::from_entries(chart, eps, entries)
}

pub(crate) fn check_order<T: Scalar>(d: &DiffOp<T>, max: u32, what: &str) -> Result<()> {
    match d.order_of() {
        Order::Finite(k) if k > max => Err(Error::OrderTooHigh { what: what.into(), order: k, max }),
        _ => Ok(()),
    }
}

/// `∂_b S^{ba} (−1)^{b̃(ε+1)}`, the divergence term of the canonical form.
pub(crate) fn tensor_divergence<T: Scalar>(s: &BracketMatrix<T>, a: Var) -> GradedPoly<T> {
    let chart = s.chart();
    let mut out = GradedPoly::zero(chart);
    for b in chart.vars() {
        let t = s.get(b, a).partial(b);
        let neg = chart.parity(b).is_odd() && !s.parity().is_odd();
        out = &out + &if neg { -&t } else { t };
    }
    out
}

/// Subprincipal symbol `γ^a = ∂_b S^{ba}(−1)^{b̃(ε+1)} − 2T^a` of a
/// normalized operator of order at most two.
pub fn subprincipal<T: Scalar>(d: &DiffOp<T>) -> Result<Vec<GradedPoly<T>>> {
    let s = principal_tensor(d)?;
    if !d.is_weight_free() {
        return Err(Error::Precondition("subprincipal symbol is defined for operators on functions".into()));
    }
    if !d.on_one().is_zero() {
        return Err(Error::NotNormalized("Δ(1) ≠ 0".into()));
    }
    let chart = d.chart();
    Ok(chart
        .vars()
        .map(|a| {
            let t = d.coeff(Monomial::var(chart, a), 0);
            &tensor_divergence(&s, a) - &t.scale(&T::from_i64(2))
        })
        .collect())
}

/// Hamiltonian vector field `X_f` with `X_f(g) = {f,g}` for the coordinate
/// bracket of `s`.
pub fn hamiltonian_vf<T: Scalar>(s: &BracketMatrix<T>, f: &GradedPoly<T>) -> Result<DiffOp<T>> {
    same_chart(s.chart(), f.chart())?;
    let chart = s.chart();
    let mut out = DiffOp::zero(chart);
    for (fp, fpart) in f.split() {
        if fpart.is_zero() {
            continue;
        }
        for a in chart.vars() {
            let mut c = GradedPoly::zero(chart);
            for b in chart.vars() {
                c = &c + &(s.get(a, b) * &fpart.partial(b));
            }
            if chart.parity(a).is_odd() && fp.is_odd() {
                c = -&c;
            }
            out = out.try_add(&DiffOp::term(&c, Monomial::var(chart, a), 0))?;
        }
    }
    Ok(out)
}

/// Coordinate divergence `Σ_a (−1)^{ã(X̃+1)} ∂_a X^a` of a vector field.
pub fn divergence<T: Scalar>(x: &DiffOp<T>) -> Result<GradedPoly<T>> {
    if !x.is_weight_free() || x.order_of() > Order::Finite(1) || !x.on_one().is_zero() {
        return Err(Error::Precondition("divergence needs a vector field".into()));
    }
    let chart = x.chart();
    let mut out = GradedPoly::zero(chart);
    for (p, xp) in x.split() {
        for a in chart.vars() {
            let t = xp.coeff(Monomial::var(chart, a), 0).partial(a);
            let neg = chart.parity(a).is_odd() && !p.is_odd();
            out = &out + &if neg { -&t } else { t };
        }
    }
    Ok(out)
}

/// Lie derivative along a vector field acting on densities of weight `w`
/// (coordinate trivialization): `X + w·div X`.
pub fn lie_derivative<T: Scalar>(x: &DiffOp<T>, w: &crate::scalar::Weight) -> Result<DiffOp<T>> {
    let div = divergence(x)?;
    x.try_add(&DiffOp::mult(&div.scale(&T::from_weight(w))))
}

/// Symbol of a bracket on coordinate functions, for tests: `{x^a, x^b}`.
pub fn coordinate_values<T: Scalar>(
    chart: &Arc<Chart>,
    mut bracket: impl FnMut(&GradedPoly<T>, &GradedPoly<T>) -> Result<GradedPoly<T>>,
) -> Result<Vec<Vec<GradedPoly<T>>>> {
    let xs: Vec<GradedPoly<T>> = chart.vars().map(|v| GradedPoly::var(chart, v)).collect();
    xs.iter()
        .map(|a| xs.iter().map(|b| bracket(a, b)).collect())
        .collect()
}
