//! Equivalences between Jacobi-type conditions on bracket data and the order
//! of the square of the generating operator.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use superdelta::geom::symbol::{tensor_symbol, vector_symbol};
use superdelta::geom::*;
use superdelta::{sample, Chart, Op, Order, Parity, Poly, Rational, Weight};

use super::{check, lift};

type S = BracketMatrix<Rational>;

fn jacobi_s(s: &S) -> Result<bool, String> {
    let t = tensor_symbol(s);
    Ok(lift(tstar_bracket(s.chart(), &t, &t))?.is_zero())
}

/// Graded antisymmetry, Leibniz rule and Jacobi identity of the canonical
/// bracket on `T*M`.
pub fn tstar_laws(chart: &Arc<Chart>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let cot = chart.cotangent();
    let hom = |rng: &mut ChaCha8Rng| {
        let p = sample::parity(rng);
        (p, sample::poly::<Rational, _>(&cot, rng, 3, 3, Some(p)))
    };
    let (fp, f) = hom(rng);
    let (gp, g) = hom(rng);
    let (_, h) = hom(rng);
    let br = |a: &Poly, b: &Poly| lift(tstar_bracket(chart, a, b));
    let fg = br(&f, &g)?;
    let gf = br(&g, &f)?;
    let sign_fg = fp.is_odd() && gp.is_odd();
    check(fg == if sign_fg { gf.clone() } else { -&gf }, || "T*M bracket is not graded antisymmetric".into())?;
    let lhs = br(&f, &br(&g, &h)?)?;
    let rhs = &br(&fg, &h)? + &{
        let t = br(&g, &br(&f, &h)?)?;
        if sign_fg {
            -&t
        } else {
            t
        }
    };
    check(lhs == rhs, || "T*M bracket violates Jacobi".into())?;
    let lhs = br(&f, &(&g * &h))?;
    let t = &g * &br(&f, &h)?;
    let rhs = &(&fg * &h) + &if sign_fg { -&t } else { t };
    check(lhs == rhs, || "T*M bracket violates Leibniz".into())
}

/// A normalized odd operator of order ≤ 2 on functions with the given
/// principal tensor.
fn operator_with(s: &S, rng: &mut ChaCha8Rng, flat_gamma: bool) -> Result<Op, String> {
    let c = s.chart();
    let sigma = sample::log_volume(c, rng, 3, 3);
    let mut d = lift(odd_laplacian(s, &sigma))?;
    if !flat_gamma {
        for a in c.vars() {
            if rng.gen_bool(0.4) {
                let t = sample::poly(c, rng, 2, 2, Some(Parity::Odd + c.parity(a)));
                d = lift(d.try_add(&(&Op::mult(&t) * &Op::partial(c, a))))?;
            }
        }
    }
    Ok(d)
}

/// For an operator on functions: `ord Δ² ≤ 2 ⟺ (S,S) = 0` and
/// `ord Δ² ≤ 1 ⟺ (S,S) = 0 ∧ (S,γ) = 0` with `γ` the subprincipal symbol.
/// Returns how many instances landed on each side.
pub fn function_level(chart: &Arc<Chart>, rng: &mut ChaCha8Rng) -> Result<[bool; 2], String> {
    let s: S = if rng.gen_bool(0.6) { sample::jacobi_tensor(chart, rng) } else { sample::bracket_matrix(chart, rng, Parity::Odd, 2, 0.5) };
    let flat = rng.gen_bool(0.5);
    let d = operator_with(&s, rng, flat)?;
    let sq = lift(d.compose(&d))?;
    let ss = jacobi_s(&s)?;
    check((sq.order_of() <= Order::Finite(2)) == ss, || "ord Δ² ≤ 2 ⟺ (S,S) = 0 fails".into())?;
    let gamma = lift(subprincipal(&d))?;
    let sg = lift(tstar_bracket(chart, &tensor_symbol(&s), &vector_symbol(chart, &gamma)))?.is_zero();
    check((sq.order_of() <= Order::Finite(1)) == (ss && sg), || "ord Δ² ≤ 1 ⟺ (S,S) = (S,γ) = 0 fails".into())?;
    Ok([ss, ss && sg])
}

/// For a canonical pencil: the four-slot report vanishes iff
/// `ord Δ² ≤ 1` (weight symbol counted with order one), and `ord Δ² ≤ 2`
/// already forces `ord Δ² ≤ 1`.
pub fn pencil_level(chart: &Arc<Chart>, rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let data = match rng.gen_range(0..3) {
        0 => sample::vbracket::<Rational, _>(chart, rng, Parity::Odd, 2),
        1 => {
            let s = sample::jacobi_tensor(chart, rng);
            let sigma = sample::log_volume(chart, rng, 3, 3);
            lift(lb_data(&s, &sigma))?
        }
        _ => {
            let s = sample::jacobi_tensor(chart, rng);
            let sigma = sample::log_volume(chart, rng, 3, 3);
            let lb = lift(lb_data(&s, &sigma))?;
            let mut theta = lb.theta().clone();
            if rng.gen_bool(0.5) {
                theta = &theta + &sample::poly(chart, rng, 2, 1, Some(Parity::Odd));
            }
            let mut gamma = lb.gamma().to_vec();
            if rng.gen_bool(0.5) {
                let a = rng.gen_range(0..chart.dim());
                gamma[a] = &gamma[a] + &sample::poly(chart, rng, 1, 1, Some(Parity::Odd + chart.parity(superdelta::Var(a))));
            }
            lift(VBracketData::new(s, gamma, theta))?
        }
    };
    let p = canonical_pencil(&data);
    let sq = lift(p.compose(&p))?;
    let ord = sq.order_in_densities();
    let report = lift(jacobi_report(&data))?;
    check(report.all_vanish() == (ord <= Order::Finite(1)), || format!("report/order mismatch: ord = {ord}"))?;
    check(!(ord <= Order::Finite(2)) || ord <= Order::Finite(1), || "Jacobi₃ without Jacobi₂ on densities".into())?;
    Ok(report.all_vanish())
}

/// `recover_action ∘ lb_data = id` on volume forms, for nondegenerate odd
/// tensors.
pub fn action_round_trip(chart: &Arc<Chart>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let std: S = BracketMatrix::standard_odd(chart);
    let s = if rng.gen_bool(0.5) { std } else { lift(sample::coord_change(chart, rng, 3).push_tensor(&std))? };
    let sigma = sample::log_volume(chart, rng, 3, 3);
    let data = lift(lb_data(&s, &sigma))?;
    let a = lift(recover_action(&s, data.gamma()))?;
    let want = sigma.sigma() - &Poly::constant(chart, sigma.sigma().constant_term());
    check(a == -&want, || "recovered action differs from −σ".into())
}

pub struct Summary {
    pub function_cases: usize,
    pub jacobi3: usize,
    pub jacobi2: usize,
    pub pencils: usize,
    pub pencil_flat: usize,
    pub actions: usize,
}

pub fn run(rng: &mut ChaCha8Rng, per_chart: usize) -> Result<Summary, String> {
    let mut s = Summary { function_cases: 0, jacobi3: 0, jacobi2: 0, pencils: 0, pencil_flat: 0, actions: 0 };
    for chart in super::charts() {
        for _ in 0..per_chart {
            tstar_laws(&chart, rng)?;
            let [j3, j2] = function_level(&chart, rng)?;
            s.function_cases += 1;
            s.jacobi3 += j3 as usize;
            s.jacobi2 += j2 as usize;
            s.pencil_flat += pencil_level(&chart, rng)? as usize;
            s.pencils += 1;
            if chart.n_even() == chart.n_odd() {
                action_round_trip(&chart, rng)?;
                s.actions += 1;
            }
        }
    }
    let _ = Weight::from_integer(0);
    Ok(s)
}
