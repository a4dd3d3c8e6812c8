//! The algebra of densities: finite sums `Σ_w ψ_w t^w`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::{same_chart, Chart};
use crate::error::Result;
use crate::poly::{GradedPoly, Grading};
use crate::scalar::{Scalar, Weight};

#[derive(Debug, Clone)]
pub struct DensityElement<T> {
    chart: Arc<Chart>,
    parts: BTreeMap<Weight, GradedPoly<T>>,
}

impl<T: Scalar> PartialEq for DensityElement<T> {
    fn eq(&self, other: &Self) -> bool {
        *self.chart == *other.chart && self.parts == other.parts
    }
}

impl<T: Scalar> From<GradedPoly<T>> for DensityElement<T> {
    fn from(p: GradedPoly<T>) -> Self {
        DensityElement::weighted(p, Weight::zero())
    }
}

impl<T: Scalar> DensityElement<T> {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        DensityElement { chart: chart.clone(), parts: BTreeMap::new() }
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        GradedPoly::one(chart).into()
    }

    /// `f · t^w`.
    pub fn weighted(f: GradedPoly<T>, w: Weight) -> Self {
        let chart = f.chart().clone();
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(w, f);
        }
        DensityElement { chart, parts }
    }

    /// The coordinate volume element `t = Dx` (weight one).
    pub fn volume(chart: &Arc<Chart>) -> Self {
        Self::weighted(GradedPoly::one(chart), Weight::one())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Weight, &GradedPoly<T>)> {
        self.parts.iter()
    }

    pub fn component(&self, w: Weight) -> GradedPoly<T> {
        self.parts.get(&w).cloned().unwrap_or_else(|| GradedPoly::zero(&self.chart))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub(crate) fn add_part(&mut self, w: Weight, f: &GradedPoly<T>) {
        if f.is_zero() {
            return;
        }
        let sum = match self.parts.get(&w) {
            Some(g) => g + f,
            None => f.clone(),
        };
        if sum.is_zero() {
            self.parts.remove(&w);
        } else {
            self.parts.insert(w, sum);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = self.clone();
        for (w, f) in &other.parts {
            out.add_part(*w, f);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(&self.chart);
        for (w, f) in &self.parts {
            out.add_part(*w, &f.scale(c));
        }
        out
    }

    /// Product in the density algebra; weights add.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = Self::zero(&self.chart);
        for (u, f) in &self.parts {
            for (v, g) in &other.parts {
                out.add_part(u + v, &(f * g));
            }
        }
        Ok(out)
    }

    /// Parity (the weight variable `t` is even).
    pub fn parity_of(&self) -> Grading {
        let mut seen = None;
        for f in self.parts.values() {
            match f.parity_of() {
                Grading::Inhomogeneous => return Grading::Inhomogeneous,
                Grading::Homogeneous(p) => match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return Grading::Inhomogeneous,
                    _ => {}
                },
            }
        }
        Grading::Homogeneous(seen.unwrap_or(crate::chart::Parity::Even))
    }

    pub fn part(&self, p: crate::chart::Parity) -> Self {
        let mut out = Self::zero(&self.chart);
        for (w, f) in &self.parts {
            out.add_part(*w, &f.part(p));
        }
        out
    }
}

/// Integrand of the invariant scalar product: the weight-one component of
/// `ψχ`, i.e. `Res(t^{-2} ψ(x,t) χ(x,t))`.
pub fn residue_pair<T: Scalar>(psi: &DensityElement<T>, chi: &DensityElement<T>) -> Result<GradedPoly<T>> {
    Ok(psi.multiply(chi)?.component(Weight::one()))
}

/// `⟨ψ, χ⟩` on a purely odd chart: Berezin integral of [`residue_pair`].
pub fn scalar_product<T: Scalar>(psi: &DensityElement<T>, chi: &DensityElement<T>) -> Result<T> {
    residue_pair(psi, chi)?.berezin_integral()
}
