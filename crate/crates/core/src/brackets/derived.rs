//! Higher derived brackets of a differential operator on functions.

use std::collections::HashMap;

use crate::chart::{same_chart, Parity};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

use super::koszul::{koszul_sign, shuffles};

fn weight_free<T: Scalar>(delta: &DiffOp<T>) -> Result<()> {
    if !delta.is_weight_free() {
        return Err(Error::Precondition("derived brackets need an operator without the weight symbol".into()));
    }
    Ok(())
}

/// `{a₁, …, aₙ}_Δ = […[[Δ, a₁], a₂], …, aₙ](1)`; multilinear, so the
/// arguments may be inhomogeneous. For `n = 0` this is `Δ(1)`.
pub fn higher_bracket<T: Scalar>(delta: &DiffOp<T>, args: &[GradedPoly<T>]) -> Result<GradedPoly<T>> {
    weight_free(delta)?;
    for a in args {
        same_chart(delta.chart(), a.chart())?;
    }
    let mut out = GradedPoly::zero(delta.chart());
    for (dp, d) in delta.split() {
        if d.is_zero() {
            continue;
        }
        for parts in homogeneous_expansions(args) {
            let parities = parts.iter().map(|a| a.homogeneous_parity("bracket argument")).collect::<Result<Vec<_>>>()?;
            let one = GradedPoly::one(delta.chart());
            out = out.try_add(&nested_on(&d, dp, &parts, &parities, &one)?)?;
        }
    }
    Ok(out)
}

/// `[…[D, a₁], …, aₖ](f)` through `[E, a](f) = E(af) − (−1)^{Ẽã} a E(f)`.
fn nested_on<T: Scalar>(
    d: &DiffOp<T>,
    dp: Parity,
    args: &[GradedPoly<T>],
    parities: &[Parity],
    f: &GradedPoly<T>,
) -> Result<GradedPoly<T>> {
    let Some((a, rest)) = args.split_last() else {
        return d.apply_poly(f);
    };
    let (pa, prest) = parities.split_last().expect("lengths agree");
    let inner_parity = prest.iter().fold(dp, |acc, &p| acc + p);
    let first = nested_on(d, dp, rest, prest, &a.multiply(f)?)?;
    let second = a.multiply(&nested_on(d, dp, rest, prest, f)?)?;
    if inner_parity.is_odd() && pa.is_odd() {
        first.try_add(&second)
    } else {
        first.try_sub(&second)
    }
}

/// Failure of `{a₁, …, aₖ, ·}_Δ` to be a derivation in its last slot:
/// `{a…, bc} − {a…, b}c − (−1)^{p b̃} b{a…, c}` with `p = Δ̃ + Σ ãᵢ`.
/// It equals `{a…, b, c}_Δ`.
pub fn leibniz_obstruction<T: Scalar>(
    delta: &DiffOp<T>,
    args: &[GradedPoly<T>],
    b: &GradedPoly<T>,
    c: &GradedPoly<T>,
) -> Result<GradedPoly<T>> {
    let mut p = delta.homogeneous_parity("operator")?;
    for a in args {
        p = p + a.homogeneous_parity("bracket argument")?;
    }
    let pb = b.homogeneous_parity("bracket argument")?;
    let with = |x: &GradedPoly<T>| {
        let mut v = args.to_vec();
        v.push(x.clone());
        higher_bracket(delta, &v)
    };
    let bc = b.multiply(c)?;
    let mut out = with(&bc)?.try_sub(&with(b)?.multiply(c)?)?;
    let second = b.multiply(&with(c)?)?;
    out = if p.is_odd() && pb.is_odd() { out.try_add(&second)? } else { out.try_sub(&second)? };
    Ok(out)
}

/// Derived-bracket Jacobiator `Jⁿ_Δ(a₁, …, aₙ)`: the sum over `k + l = n`
/// and `(k, l)`-shuffles `σ` of `ε(σ)·{{a_{σ1},…,a_{σk}}_Δ, a_{σ(k+1)},…}_Δ`.
/// Inhomogeneous arguments are split into homogeneous parts first.
pub fn jacobiator<T: Scalar>(delta: &DiffOp<T>, args: &[GradedPoly<T>]) -> Result<GradedPoly<T>> {
    weight_free(delta)?;
    for a in args {
        same_chart(delta.chart(), a.chart())?;
    }
    let mut out = GradedPoly::zero(delta.chart());
    for parts in homogeneous_expansions(args) {
        out = out.try_add(&jacobiator_homogeneous(delta, &parts)?)?;
    }
    Ok(out)
}

fn jacobiator_homogeneous<T: Scalar>(delta: &DiffOp<T>, args: &[GradedPoly<T>]) -> Result<GradedPoly<T>> {
    let n = args.len();
    let parities = args.iter().map(|a| a.homogeneous_parity("bracket argument")).collect::<Result<Vec<_>>>()?;
    let mut inner: HashMap<Vec<usize>, GradedPoly<T>> = HashMap::new();
    let mut out = GradedPoly::zero(delta.chart());
    for k in 0..=n {
        for perm in shuffles(k, n - k) {
            let head = perm[..k].to_vec();
            let value = match inner.get(&head) {
                Some(v) => v.clone(),
                None => {
                    let v = higher_bracket(delta, &head.iter().map(|&i| args[i].clone()).collect::<Vec<_>>())?;
                    inner.insert(head, v.clone());
                    v
                }
            };
            if value.is_zero() {
                continue;
            }
            let mut outer = vec![value];
            outer.extend(perm[k..].iter().map(|&i| args[i].clone()));
            let t = higher_bracket(delta, &outer)?;
            out = if koszul_sign(&perm, &parities)? < 0 { out.try_sub(&t)? } else { out.try_add(&t)? };
        }
    }
    Ok(out)
}

fn homogeneous_expansions<T: Scalar>(args: &[GradedPoly<T>]) -> Vec<Vec<GradedPoly<T>>> {
    let mut out: Vec<Vec<GradedPoly<T>>> = vec![Vec::new()];
    for a in args {
        let parts: Vec<GradedPoly<T>> = a.split().into_iter().map(|(_, f)| f).filter(|f| !f.is_zero()).collect();
        if parts.is_empty() {
            return Vec::new();
        }
        out = out
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |f| {
                    let mut v = prefix.clone();
                    v.push(f.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// `{a_{σ1}, …, a_{σn}}` compared with `ε(σ){a₁, …, aₙ}`: returns the
/// difference, which vanishes by graded symmetry.
pub fn symmetry_defect<T: Scalar>(delta: &DiffOp<T>, args: &[GradedPoly<T>], perm: &[usize]) -> Result<GradedPoly<T>> {
    let parities = args.iter().map(|a| a.homogeneous_parity("bracket argument")).collect::<Result<Vec<Parity>>>()?;
    let sign = koszul_sign(perm, &parities)?;
    let permuted: Vec<GradedPoly<T>> = perm.iter().map(|&i| args[i].clone()).collect();
    let lhs = higher_bracket(delta, &permuted)?;
    let rhs = higher_bracket(delta, args)?.scale(&T::from_i64(sign as i64));
    lhs.try_sub(&rhs)
}
