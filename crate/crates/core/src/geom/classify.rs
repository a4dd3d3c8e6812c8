//! Classification of a normalized odd second-order operator by the order of
//! its square, cross-checked against the literal Jacobi identities.

use std::fmt;

use crate::brackets::{higher_bracket, monomial_tuples};
use crate::chart::Parity;
use crate::diffop::{DiffOp, Order};
use crate::error::{Error, Result};
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

/// Finest `k` with `ord Δ² ≤ k`; `Le0` means `Δ² = 0` since `Δ1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SquareLevel {
    Le0,
    Le1,
    Le2,
    Le3,
}

impl fmt::Display for SquareLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self {
            SquareLevel::Le0 => 0,
            SquareLevel::Le1 => 1,
            SquareLevel::Le2 => 2,
            SquareLevel::Le3 => 3,
        };
        write!(f, "<={k}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClassification {
    pub level: SquareLevel,
    pub square_order: Order,
    /// `Δ² = 0`.
    pub jacobi1: bool,
    /// `Δ` is a derivation of its bracket, checked on monomial pairs.
    pub jacobi2: bool,
    /// The shuffle sum of nested binary brackets vanishes on monomial triples.
    pub jacobi3: bool,
    /// The literal checks agree with the level.
    pub consistent: bool,
}

const TUPLE_LIMIT: usize = 1500;

fn flip<T: Scalar>(neg: bool, f: GradedPoly<T>) -> GradedPoly<T> {
    if neg {
        -&f
    } else {
        f
    }
}

fn bracket<T: Scalar>(d: &DiffOp<T>, a: &GradedPoly<T>, b: &GradedPoly<T>) -> Result<GradedPoly<T>> {
    higher_bracket(d, &[a.clone(), b.clone()])
}

/// `Δ{a,b} + {Δa,b} + (−1)^{ãb̃}{Δb,a}`.
pub fn derivation_defect<T: Scalar>(d: &DiffOp<T>, a: &GradedPoly<T>, b: &GradedPoly<T>) -> Result<GradedPoly<T>> {
    let (pa, pb) = (a.homogeneous_parity("argument")?, b.homogeneous_parity("argument")?);
    let first = d.apply_poly(&bracket(d, a, b)?)?;
    let second = bracket(d, &d.apply_poly(a)?, b)?;
    let third = flip(pa.is_odd() && pb.is_odd(), bracket(d, &d.apply_poly(b)?, a)?);
    Ok(&(&first + &second) + &third)
}

/// `{{a,b},c} + (−1)^{b̃c̃}{{a,c},b} + (−1)^{ã(b̃+c̃)}{{b,c},a}`.
pub fn binary_jacobiator<T: Scalar>(
    d: &DiffOp<T>,
    a: &GradedPoly<T>,
    b: &GradedPoly<T>,
    c: &GradedPoly<T>,
) -> Result<GradedPoly<T>> {
    let pa = a.homogeneous_parity("argument")?;
    let pb = b.homogeneous_parity("argument")?;
    let pc = c.homogeneous_parity("argument")?;
    let t1 = bracket(d, &bracket(d, a, b)?, c)?;
    let t2 = flip(pb.is_odd() && pc.is_odd(), bracket(d, &bracket(d, a, c)?, b)?);
    let t3 = flip(pa.is_odd() && (pb + pc).is_odd(), bracket(d, &bracket(d, b, c)?, a)?);
    Ok(&(&t1 + &t2) + &t3)
}

/// Level of an odd operator of order `≤ 2` with `Δ1 = 0` by `ord Δ²`,
/// together with the literal identities on monomials of degree `≤ 2`.
pub fn classify_square<T: Scalar>(d: &DiffOp<T>) -> Result<SquareClassification> {
    if d.homogeneous_parity("operator")? != Parity::Odd {
        return Err(Error::Parity("classify_square needs an odd operator".into()));
    }
    if !d.is_weight_free() {
        return Err(Error::Precondition("classify_square needs an operator without the weight symbol".into()));
    }
    if let Order::Finite(k) = d.order_of() {
        if k > 2 {
            return Err(Error::OrderTooHigh { what: "operator".into(), order: k, max: 2 });
        }
    }
    if !d.on_one().is_zero() {
        return Err(Error::NotNormalized("Δ1 ≠ 0".into()));
    }
    let square = d.compose(d)?;
    let square_order = square.order_of();
    let level = match square_order {
        Order::Zero | Order::Finite(0) => SquareLevel::Le0,
        Order::Finite(1) => SquareLevel::Le1,
        Order::Finite(2) => SquareLevel::Le2,
        Order::Finite(_) => SquareLevel::Le3,
    };
    let chart = d.chart();
    let to_polys = |t: &Vec<crate::monomial::Monomial>| -> Vec<GradedPoly<T>> {
        t.iter().map(|m| GradedPoly::monomial(chart, *m, T::one())).collect()
    };
    let jacobi1 = square.is_zero();
    let mut jacobi2 = true;
    for t in monomial_tuples(chart, 2, 2, TUPLE_LIMIT).0.iter().map(to_polys) {
        if !derivation_defect(d, &t[0], &t[1])?.is_zero() {
            jacobi2 = false;
            break;
        }
    }
    let mut jacobi3 = true;
    for t in monomial_tuples(chart, 3, 2, TUPLE_LIMIT).0.iter().map(to_polys) {
        if !binary_jacobiator(d, &t[0], &t[1], &t[2])?.is_zero() {
            jacobi3 = false;
            break;
        }
    }
    let consistent = jacobi1 == (level <= SquareLevel::Le0)
        && jacobi2 == (level <= SquareLevel::Le1)
        && jacobi3 == (level <= SquareLevel::Le2);
    Ok(SquareClassification { level, square_order, jacobi1, jacobi2, jacobi3, consistent })
}
