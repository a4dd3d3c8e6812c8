//! Higher derived brackets: symmetry, vanishing threshold, the Leibniz
//! chain, the Jacobiator identity and the order characterization of the
//! Jacobi identities.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use superdelta::brackets::*;
use superdelta::{sample, Chart, Monomial, Op, Order, Parity, Poly, Rational};
use superdelta::One;

use super::{check, lift};

fn random_args(chart: &Arc<Chart>, rng: &mut ChaCha8Rng, n: usize) -> Vec<Poly> {
    (0..n)
        .map(|_| {
            let p = sample::parity(rng);
            let f = sample::poly(chart, rng, 2, 2, Some(p));
            if f.is_zero() {
                Poly::one(chart)
            } else {
                f
            }
        })
        .collect()
}

/// Charts of the Jacobiator suite; the purely odd ones also run through the
/// matrix oracle.
pub fn jacobiator_charts() -> Vec<Arc<Chart>> {
    vec![Chart::standard(1, 1), Chart::standard(1, 2), Chart::standard(0, 2), Chart::standard(0, 3)]
}

/// Monomial tuples per arity checked for each operator, drawn from all
/// monomials of degree `≤ 2` including `1`.
pub const MONOMIAL_TUPLES: usize = 4;

fn monomial_args(chart: &Arc<Chart>, rng: &mut ChaCha8Rng, n: usize) -> Vec<Poly> {
    let pool = Monomial::all_up_to(chart, 2);
    (0..n).map(|_| Poly::monomial(chart, *pool.choose(rng).unwrap(), Rational::one())).collect()
}

/// `Jⁿ_Δ(a) = {a}_{Δ²}` for `n ≤ n_max`, on random polynomials and on
/// monomial tuples, through the symbolic path and, when available, the
/// matrix oracle. Returns the number of monomial tuples checked.
pub fn jacobiator_identity(
    delta: &Op,
    oracle: Option<&MatrixOracle<Rational>>,
    rng: &mut ChaCha8Rng,
    n_max: usize,
) -> Result<usize, String> {
    let chart = delta.chart();
    let square = lift(delta.compose(delta))?;
    let dm = oracle.map(|o| lift(o.matrix_of(delta))).transpose()?;
    let mut tuples = 0;
    for n in 0..=n_max {
        for _ in 0..MONOMIAL_TUPLES {
            let args = monomial_args(chart, rng, n);
            let lhs = lift(jacobiator(delta, &args))?;
            check(lhs == lift(higher_bracket(&square, &args))?, || format!("J^{n} differs on monomials {args:?}"))?;
            tuples += 1;
        }
        let args = random_args(chart, rng, n);
        let lhs = lift(jacobiator(delta, &args))?;
        let rhs = lift(higher_bracket(&square, &args))?;
        check(lhs == rhs, || format!("J^{n} differs from the bracket of the square on {args:?}"))?;
        if let (Some(o), Some(dm)) = (oracle, &dm) {
            let margs = args.iter().map(|a| lift(o.left_mult(a))).collect::<Result<Vec<_>, _>>()?;
            let jm = o.on_one(&lift(jacobiator_abstract(o, dm, &margs))?);
            check(jm == lhs, || format!("matrix Jacobiator J^{n} disagrees with the symbolic one"))?;
            let bm = o.on_one(&lift(derived_bracket_abstract(o, dm, &margs))?);
            check(bm == lift(higher_bracket(delta, &args))?, || format!("matrix {n}-bracket disagrees"))?;
        }
    }
    Ok(tuples)
}

/// Graded symmetry under a random permutation, vanishing above the order,
/// and the Leibniz chain `{a…, bc} − … = {a…, b, c}`.
pub fn bracket_laws(delta: &Op, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let chart = delta.chart();
    let order = match delta.order_of() {
        Order::Zero => 0,
        Order::Finite(k) => k as usize,
    };
    for n in 1..=4 {
        let args = random_args(chart, rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        check(lift(symmetry_defect(delta, &args, &perm))?.is_zero(), || format!("bracket not symmetric under {perm:?}"))?;
    }
    let above = random_args(chart, rng, order + 1);
    check(lift(higher_bracket(delta, &above))?.is_zero(), || "bracket above the order does not vanish".into())?;
    for k in 0..=2 {
        let args = random_args(chart, rng, k);
        let bc = random_args(chart, rng, 2);
        let obstruction = lift(leibniz_obstruction(delta, &args, &bc[0], &bc[1]))?;
        let mut longer = args.clone();
        longer.extend(bc.iter().cloned());
        check(obstruction == lift(higher_bracket(delta, &longer))?, || format!("Leibniz chain fails at k = {k}"))?;
    }
    if order >= 1 {
        let top = random_args(chart, rng, order - 1);
        let bc = random_args(chart, rng, 2);
        let obstruction = lift(leibniz_obstruction(delta, &top, &bc[0], &bc[1]))?;
        check(obstruction.is_zero(), || "top bracket is not a derivation".into())?;
    }
    Ok(())
}

#[derive(Debug, Default)]
pub struct JacobiatorSummary {
    pub operators: usize,
    pub matrix_checked: usize,
    pub monomial_tuples: usize,
}

/// `per_chart` random odd operators of order `≤ 3` on every Jacobiator chart.
pub fn jacobiator_suite(rng: &mut ChaCha8Rng, per_chart: usize) -> Result<JacobiatorSummary, String> {
    let mut out = JacobiatorSummary::default();
    for chart in jacobiator_charts() {
        let oracle = if chart.n_even() == 0 { Some(lift(MatrixOracle::new(&chart))?) } else { None };
        for _ in 0..per_chart {
            let delta: Op = sample::op(&chart, rng, 3, 2, 4, Parity::Odd);
            out.monomial_tuples += jacobiator_identity(&delta, oracle.as_ref(), rng, 4)?;
            out.operators += 1;
            out.matrix_checked += oracle.is_some() as usize;
        }
    }
    Ok(out)
}

fn ddx(chart: &Arc<Chart>, k: u32) -> Op {
    let x = chart.even_vars().next().expect("an even variable");
    Op::partial(chart, x).pow(k)
}

/// Operators with prescribed `ord Δ²`, the first entry `None` standing for
/// `Δ² = 0`.
pub fn constructed(chart: &Arc<Chart>) -> Vec<(Option<u32>, Op)> {
    let x = Poly::var(chart, chart.even_vars().next().unwrap());
    let xi = chart.odd_vars().next().unwrap();
    let dxi = Op::partial(chart, xi);
    let mxi = Op::mult(&Poly::var(chart, xi));
    let mut out = vec![
        (None, &ddx(chart, 1) * &dxi),
        (None, &mxi * &ddx(chart, 1)),
        (None, &(&ddx(chart, 2) * &dxi) + &(&Op::mult(&x) * &dxi)),
        (Some(0), &dxi + &(&mxi * &Op::mult(&(&x * &x)))),
    ];
    for k in 1..=3 {
        out.push((Some(k), &dxi + &(&mxi * &ddx(chart, k))));
    }
    out
}

#[derive(Debug, Default)]
pub struct OrderSummary {
    pub operators: usize,
    pub levels_seen: [usize; 5],
}

fn level_index(r: Order) -> usize {
    match r {
        Order::Zero => 0,
        Order::Finite(k) => 1 + k.min(3) as usize,
    }
}

/// `ord Δ² ≤ r ⟺ Jⁿ ≡ 0 for n > r`: identities above `r` hold on every
/// tuple tried and some arity `≤ r` has a witness.
pub fn order_characterization(delta: &Op, expected: Option<Option<u32>>, n_max: usize) -> Result<Order, String> {
    let report = lift(linfty_check(delta, n_max))?;
    if let Some(e) = expected {
        let want = e.map_or(Order::Zero, Order::Finite);
        check(report.square_order == want, || format!("ord Δ² = {}, expected {want}", report.square_order))?;
    }
    check(report.identities_hold(), || format!("a Jacobi identity above ord Δ² = {} fails", report.square_order))?;
    check(report.sharp(), || format!("no witness at or below ord Δ² = {}", report.square_order))?;
    if let Order::Finite(r) = report.square_order {
        if (r as usize) <= n_max {
            check(report.arities[r as usize].witness.is_some(), || format!("J^{r} has no witness"))?;
        }
    }
    Ok(report.square_order)
}

pub fn order_suite(rng: &mut ChaCha8Rng, random_per_chart: usize) -> Result<OrderSummary, String> {
    let mut out = OrderSummary::default();
    let charts = [Chart::standard(1, 1), Chart::standard(1, 2), Chart::standard(2, 1)];
    for chart in &charts {
        for (e, delta) in constructed(chart) {
            let r = order_characterization(&delta, Some(e), 4)?;
            out.levels_seen[level_index(r)] += 1;
            out.operators += 1;
        }
        for _ in 0..random_per_chart {
            let order = rng.gen_range(1..=2);
            let delta: Op = loop {
                let d = sample::op(chart, rng, order, 1, 3, Parity::Odd);
                if !d.is_zero() {
                    break d;
                }
            };
            let r = order_characterization(&delta, None, 4)?;
            out.levels_seen[level_index(r)] += 1;
            out.operators += 1;
        }
    }
    Ok(out)
}

/// Every multiset of coordinate monomials in the bound is a witness-free
/// tuple exactly when the matrix oracle says the multilinear map vanishes.
pub fn exhaustive_vanishing_matches_oracle(delta: &Op, oracle: &MatrixOracle<Rational>, n: usize) -> Result<(), String> {
    let chart = delta.chart();
    let square = lift(delta.compose(delta))?;
    let (tuples, exhaustive) = monomial_tuples(chart, n, chart.n_odd() as u32, usize::MAX);
    check(exhaustive, || "tuple enumeration incomplete".into())?;
    let dm = lift(oracle.matrix_of(&square))?;
    let mut all_zero = true;
    for t in &tuples {
        let args: Vec<Poly> = t.iter().map(|m| Poly::monomial(chart, *m, Rational::one())).collect();
        let margs = args.iter().map(|a| lift(oracle.left_mult(a))).collect::<Result<Vec<_>, _>>()?;
        let v = oracle.on_one(&lift(derived_bracket_abstract(oracle, &dm, &margs))?);
        all_zero &= v.is_zero();
    }
    let sym = tuples.iter().all(|t| {
        let args: Vec<Poly> = t.iter().map(|m: &Monomial| Poly::monomial(chart, *m, Rational::one())).collect();
        jacobiator(delta, &args).map_or(false, |j| j.is_zero())
    });
    check(all_zero == sym, || format!("exhaustive J^{n} vanishing disagrees with the oracle"))
}

/// `classify_square` agrees with the literal identities on random normalized
/// odd operators of order `≤ 2`; returns how often each level occurred.
pub fn classification(rng: &mut ChaCha8Rng, per_chart: usize) -> Result<[usize; 4], String> {
    use superdelta::geom::{classify_square, SquareLevel};
    let mut seen = [0; 4];
    for chart in [Chart::standard(1, 1), Chart::standard(1, 2), Chart::standard(2, 1)] {
        let mut constructed: Vec<Op> = constructed(&chart).into_iter().map(|(_, d)| d).filter(|d| d.order_of() <= Order::Finite(2)).collect();
        for _ in 0..per_chart {
            constructed.push(sample::op(&chart, rng, 2, 1, 3, Parity::Odd));
        }
        for d in constructed {
            let normalized = lift(d.try_sub(&Op::mult(&d.on_one())))?;
            if normalized.is_zero() {
                continue;
            }
            let k = lift(classify_square(&normalized))?;
            check(k.consistent, || format!("classification {k:?} disagrees with the literal identities"))?;
            seen[match k.level {
                SquareLevel::Le0 => 0,
                SquareLevel::Le1 => 1,
                SquareLevel::Le2 => 2,
                SquareLevel::Le3 => 3,
            }] += 1;
        }
    }
    Ok(seen)
}
