//! Certification of the Jacobi identities of the derived brackets of an odd
//! operator against the order of its square.

use std::sync::Arc;

use crate::chart::{Chart, Parity};
use crate::diffop::{DiffOp, Order};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

use super::derived::jacobiator;

/// Default bound on the number of argument tuples tried per arity.
pub const TUPLE_LIMIT: usize = 500;
/// Default bound on the degree of a single argument monomial.
pub const MAX_ARG_DEGREE: u32 = 3;

/// A nonvanishing Jacobiator value.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T: Scalar> {
    pub args: Vec<GradedPoly<T>>,
    pub value: GradedPoly<T>,
}

/// Outcome of checking one arity.
#[derive(Debug, Clone, PartialEq)]
pub struct ArityCheck<T: Scalar> {
    pub n: usize,
    pub tuples: usize,
    /// Every multiset of monomials within the degree bound was tried.
    pub exhaustive: bool,
    pub witness: Option<Witness<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinftyReport<T: Scalar> {
    /// `ord Δ²`, `Order::Zero` when `Δ² = 0`.
    pub square_order: Order,
    pub arities: Vec<ArityCheck<T>>,
}

impl<T: Scalar> LinftyReport<T> {
    fn expected_to_vanish(&self, n: usize) -> bool {
        match self.square_order {
            Order::Zero => true,
            Order::Finite(r) => n > r as usize,
        }
    }

    /// All arities above `ord Δ²` vanish on the tuples tried.
    pub fn identities_hold(&self) -> bool {
        self.arities.iter().filter(|a| self.expected_to_vanish(a.n)).all(|a| a.witness.is_none())
    }

    /// Some arity `≤ ord Δ²` has a witness, or `Δ² = 0`.
    pub fn sharp(&self) -> bool {
        match self.square_order {
            Order::Zero => true,
            Order::Finite(_) => self.arities.iter().any(|a| !self.expected_to_vanish(a.n) && a.witness.is_some()),
        }
    }

    /// `Δ² = 0` and every identity checked holds.
    pub fn is_linfty(&self) -> bool {
        self.square_order == Order::Zero && self.identities_hold()
    }
}

/// Multisets of `n` nonconstant monomials of degree `≤ max_deg`, in order of
/// increasing total degree, at most `limit` of them. The flag is `true` when
/// the list is complete.
pub fn monomial_tuples(chart: &Arc<Chart>, n: usize, max_deg: u32, limit: usize) -> (Vec<Vec<Monomial>>, bool) {
    let mut pool: Vec<Monomial> = Monomial::all_up_to(chart, max_deg).into_iter().filter(|m| !m.is_one()).collect();
    pool.sort_by_key(|m| (m.degree(), *m));
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, n: usize, pool: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>, cap: usize) -> bool {
        if cur.len() == n {
            all.push(cur.clone());
            return all.len() < cap;
        }
        for i in start..pool {
            cur.push(i);
            let go = rec(i, n, pool, cur, all, cap);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    const ENUMERATION_CAP: usize = 200_000;
    let complete = rec(0, n, pool.len(), &mut cur, &mut all, ENUMERATION_CAP);
    all.sort_by_key(|t| t.iter().map(|&i| pool[i].degree()).sum::<u32>());
    let exhaustive = complete && all.len() <= limit;
    all.truncate(limit);
    (all.into_iter().map(|t| t.into_iter().map(|i| pool[i]).collect()).collect(), exhaustive)
}

/// Computes `r = ord Δ²` and evaluates `Jⁿ_Δ` on monomial tuples for
/// `0 ≤ n ≤ n_max`, recording the first nonzero value per arity.
pub fn linfty_check<T: Scalar>(delta: &DiffOp<T>, n_max: usize) -> Result<LinftyReport<T>> {
    linfty_check_bounded(delta, n_max, MAX_ARG_DEGREE, TUPLE_LIMIT)
}

pub fn linfty_check_bounded<T: Scalar>(
    delta: &DiffOp<T>,
    n_max: usize,
    max_deg: u32,
    limit: usize,
) -> Result<LinftyReport<T>> {
    if delta.homogeneous_parity("operator")? != Parity::Odd {
        return Err(Error::Parity("the L∞ check needs an odd operator".into()));
    }
    let chart = delta.chart();
    let square_order = delta.compose(delta)?.order_of();
    let mut arities = Vec::new();
    for n in 0..=n_max {
        let (tuples, exhaustive) = monomial_tuples(chart, n, max_deg, limit);
        let mut witness = None;
        for t in &tuples {
            let args: Vec<GradedPoly<T>> = t.iter().map(|m| GradedPoly::monomial(chart, *m, T::one())).collect();
            let value = jacobiator(delta, &args)?;
            if !value.is_zero() {
                witness = Some(Witness { args, value });
                break;
            }
        }
        arities.push(ArityCheck { n, tuples: tuples.len(), exhaustive, witness });
    }
    Ok(LinftyReport { square_order, arities })
}
