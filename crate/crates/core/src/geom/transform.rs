//! Coordinate changes with constant linear body and nilpotent corrections,
//! and their action on operators, pencils and bracket data.

use std::sync::Arc;

use crate::chart::{same_chart, Chart, Var};
use crate::diffop::{DiffOp, Order};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{GradedPoly, Grading};
use crate::scalar::Scalar;

use super::bracket::{coordinate_bracket, BracketMatrix};
use super::laplacian::LogVolume;
use super::pencil::VBracketData;
use super::supermatrix::{self, PolyMatrix};

/// An invertible change of coordinates `x ↦ x′(x)` with explicit inverse.
#[derive(Debug, Clone)]
pub struct CoordChange<T> {
    source: Arc<Chart>,
    target: Arc<Chart>,
    forward: Vec<GradedPoly<T>>,
    inverse: Vec<GradedPoly<T>>,
    ber_const: T,
    log_ber: GradedPoly<T>,
}

fn check_images<T: Scalar>(images: &[GradedPoly<T>], on: &Arc<Chart>, of: &Chart, what: &str) -> Result<()> {
    if images.len() != of.dim() {
        return Err(Error::Precondition(format!("{what} needs {} components", of.dim())));
    }
    for (i, f) in images.iter().enumerate() {
        same_chart(on, f.chart())?;
        let want = of.parity(Var(i));
        match f.parity_of() {
            Grading::Homogeneous(p) if p == want && !f.is_zero() => {}
            _ => return Err(Error::Parity(format!("{what}: image of `{}` must be a nonzero {want} element", of.name(Var(i))))),
        }
    }
    Ok(())
}

impl<T: Scalar> PartialEq for CoordChange<T> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.forward == other.forward && self.inverse == other.inverse
    }
}

impl<T: Scalar> CoordChange<T> {
    /// `forward[c]` expresses the new coordinate `x′^c` in the old ones;
    /// `inverse[a]` expresses `x^a` in the new ones.
    pub fn new(
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        forward: Vec<GradedPoly<T>>,
        inverse: Vec<GradedPoly<T>>,
    ) -> Result<Self> {
        check_images(&forward, source, target, "forward map")?;
        check_images(&inverse, target, source, "inverse map")?;
        for a in source.vars() {
            if inverse[a.0].substitute(&forward, source)? != GradedPoly::var(source, a) {
                return Err(Error::Precondition("supplied inverse fails the round trip".into()));
            }
        }
        for c in target.vars() {
            if forward[c.0].substitute(&inverse, target)? != GradedPoly::var(target, c) {
                return Err(Error::Precondition("supplied inverse fails the round trip".into()));
            }
        }
        let mut out = CoordChange {
            source: source.clone(),
            target: target.clone(),
            forward,
            inverse,
            ber_const: T::one(),
            log_ber: GradedPoly::zero(source),
        };
        let (c, l) = out.compute_berezinian()?;
        out.ber_const = c;
        out.log_ber = l;
        Ok(out)
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        let xs: Vec<GradedPoly<T>> = chart.vars().map(|v| GradedPoly::var(chart, v)).collect();
        Self::new(chart, chart, xs.clone(), xs).expect("identity is a valid change")
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn forward(&self) -> &[GradedPoly<T>] {
        &self.forward
    }

    pub fn inverse(&self) -> &[GradedPoly<T>] {
        &self.inverse
    }

    /// `M_{ab} = ∂_a x′^b`.
    pub fn jacobian_matrix(&self) -> PolyMatrix<T> {
        self.source
            .vars()
            .map(|a| self.forward.iter().map(|f| f.partial(a)).collect())
            .collect()
    }

    fn compute_berezinian(&self) -> Result<(T, GradedPoly<T>)> {
        let m = self.jacobian_matrix();
        let ne = self.source.n_even();
        let block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| -> PolyMatrix<T> {
            rows.map(|i| m[i][cols.clone()].to_vec()).collect()
        };
        let n = self.source.dim();
        let a = block(0..ne, 0..ne);
        let b = block(0..ne, ne..n);
        let c = block(ne..n, 0..ne);
        let d = block(ne..n, ne..n);
        let schur = if d.is_empty() {
            a
        } else {
            let d_inv = supermatrix::inverse(&self.source, &d)?;
            let bdc = supermatrix::mul(&self.source, &supermatrix::mul(&self.source, &b, &d_inv), &c);
            supermatrix::sub(&a, &bdc)
        };
        let (ca, la) = supermatrix::log_det(&self.source, &schur)?;
        let (cd, ld) = supermatrix::log_det(&self.source, &d)?;
        if ca.is_zero() || cd.is_zero() {
            return Err(Error::NotInvertible("Jacobian body is singular".into()));
        }
        Ok((ca / cd, &la - &ld))
    }

    /// Constant factor `c` of the Berezinian `J = c·e^{ℓ}`.
    pub fn berezinian_constant(&self) -> &T {
        &self.ber_const
    }

    /// Nilpotent part `ℓ = ln J − ln c` of the log-Berezinian.
    pub fn log_berezinian(&self) -> &GradedPoly<T> {
        &self.log_ber
    }

    /// The Berezinian `J = Dx′/Dx` as a function of the old coordinates.
    pub fn berezinian(&self) -> Result<GradedPoly<T>> {
        Ok(self.log_ber.exp_nilpotent()?.scale(&self.ber_const))
    }

    /// `f ∘ x(x′)`: a function of the old coordinates rewritten in the new ones.
    pub fn push_poly(&self, f: &GradedPoly<T>) -> Result<GradedPoly<T>> {
        same_chart(&self.source, f.chart())?;
        f.substitute(&self.inverse, &self.target)
    }

    /// `g ∘ x′(x)`.
    pub fn pull_poly(&self, g: &GradedPoly<T>) -> Result<GradedPoly<T>> {
        same_chart(&self.target, g.chart())?;
        g.substitute(&self.forward, &self.source)
    }

    /// The same operator (or pencil) written in the new coordinates; the
    /// weight symbol acts on `(Dx′)^w`.
    pub fn push_op(&self, d: &DiffOp<T>) -> Result<DiffOp<T>> {
        same_chart(&self.source, d.chart())?;
        let u = DiffOp::term(&self.log_ber, Monomial::ONE, 1);
        let e = d.conjugate_by_exp_op(&u)?;
        let order = match e.order_of() {
            Order::Zero => 0,
            Order::Finite(k) => k,
        };
        let mut out = DiffOp::zero(&self.target);
        for k in 0..=e.weight_degree() {
            let slice = e.weight_slice(k);
            if slice.is_zero() {
                continue;
            }
            let moved = DiffOp::from_action(&self.target, order, |g| self.push_poly(&slice.apply_poly(&self.pull_poly(g)?)?))?;
            out = out.try_add(&moved.times_weight_pow(k))?;
        }
        Ok(out)
    }

    /// `S′^{cd} = {x′^c, x′^d}` in the new coordinates.
    pub fn push_tensor(&self, s: &BracketMatrix<T>) -> Result<BracketMatrix<T>> {
        same_chart(&self.source, s.chart())?;
        let rows = self
            .forward
            .iter()
            .map(|fc| {
                self.forward
                    .iter()
                    .map(|fd| self.push_poly(&coordinate_bracket(s, fc, fd)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BracketMatrix::from_matrix(&self.target, s.parity(), rows)
    }

    /// `γ′^c = (γ^a + S^{ab}∂_b ℓ) ∂_a x′^c`, where `ℓ` is the log-Berezinian.
    pub fn push_gamma(&self, s: &BracketMatrix<T>, gamma: &[GradedPoly<T>]) -> Result<Vec<GradedPoly<T>>> {
        same_chart(&self.source, s.chart())?;
        self.forward
            .iter()
            .map(|fc| {
                let mut v = coordinate_bracket(s, &self.log_ber, fc)?;
                for a in self.source.vars() {
                    v = &v + &(&gamma[a.0] * &fc.partial(a));
                }
                self.push_poly(&v)
            })
            .collect()
    }

    /// Bracket data in the new coordinates; `θ′ = θ + 2γ(ℓ) + {ℓ, ℓ}`.
    pub fn push_data(&self, data: &VBracketData<T>) -> Result<VBracketData<T>> {
        let s = data.s();
        let gl = self
            .source
            .vars()
            .fold(GradedPoly::zero(&self.source), |acc, a| &acc + &(&data.gamma()[a.0] * &self.log_ber.partial(a)));
        let theta = data.theta() + &(&gl.scale(&T::from_i64(2)) + &coordinate_bracket(s, &self.log_ber, &self.log_ber)?);
        VBracketData::new(self.push_tensor(s)?, self.push_gamma(s, data.gamma())?, self.push_poly(&theta)?)
    }

    /// `σ′ = σ − ℓ` in the new coordinates (up to the additive constant
    /// `ln c`, which no operator sees).
    pub fn push_log_volume(&self, sigma: &LogVolume<T>) -> Result<LogVolume<T>> {
        LogVolume::new(self.push_poly(&(sigma.sigma() - &self.log_ber))?)
    }
}
