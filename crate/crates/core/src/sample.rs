//! Random generators for property tests and the law suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chart::{Chart, Parity};
use crate::diffop::{DiffOp, OpKey};
use crate::geom::{BracketMatrix, CoordChange, LogVolume, VBracketData};
use crate::monomial::Monomial;
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

/// Small nonzero rational: mostly integers in `[-3, 3]`, sometimes halves
/// and thirds.
pub fn coeff<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let mut n = rng.gen_range(1..=3i64);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    let d = *[1i64, 1, 1, 2, 3].choose(rng).unwrap();
    T::from_i64(n) / T::from_i64(d)
}

/// Random polynomial with up to `n_terms` monomials of degree `≤ max_deg`,
/// restricted to one parity when `parity` is given.
pub fn poly<T: Scalar, R: Rng + ?Sized>(
    chart: &Arc<Chart>,
    rng: &mut R,
    max_deg: u32,
    n_terms: usize,
    parity: Option<Parity>,
) -> GradedPoly<T> {
    let pool: Vec<Monomial> = Monomial::all_up_to(chart, max_deg)
        .into_iter()
        .filter(|m| parity.map_or(true, |p| m.parity() == p))
        .collect();
    let mut out = GradedPoly::zero(chart);
    if pool.is_empty() {
        return out;
    }
    let k = rng.gen_range(1..=n_terms.max(1));
    for _ in 0..k {
        let m = *pool.choose(rng).unwrap();
        out.add_term(m, coeff(rng));
    }
    out
}

/// Random weight-free operator of order `≤ max_order` and the given parity.
pub fn op<T: Scalar, R: Rng + ?Sized>(
    chart: &Arc<Chart>,
    rng: &mut R,
    max_order: u32,
    coeff_deg: u32,
    n_terms: usize,
    parity: Parity,
) -> DiffOp<T> {
    let derivs = Monomial::all_up_to(chart, max_order);
    let mut out = DiffOp::zero(chart);
    let k = rng.gen_range(1..=n_terms.max(1));
    for _ in 0..k {
        let d = *derivs.choose(rng).unwrap();
        let cp = parity + d.parity();
        let c = poly(chart, rng, coeff_deg, 2, Some(cp));
        out.add_term(OpKey { deriv: d, wpow: 0 }, &c);
    }
    out
}

/// Random operator possibly involving the weight symbol.
pub fn pencil<T: Scalar, R: Rng + ?Sized>(
    chart: &Arc<Chart>,
    rng: &mut R,
    max_order: u32,
    max_wpow: u32,
    coeff_deg: u32,
    n_terms: usize,
    parity: Parity,
) -> DiffOp<T> {
    let derivs = Monomial::all_up_to(chart, max_order);
    let mut out = DiffOp::zero(chart);
    let k = rng.gen_range(1..=n_terms.max(1));
    for _ in 0..k {
        let d = *derivs.choose(rng).unwrap();
        let wpow = rng.gen_range(0..=max_wpow);
        let c = poly(chart, rng, coeff_deg, 2, Some(parity + d.parity()));
        out.add_term(OpKey { deriv: d, wpow }, &c);
    }
    out
}

/// A random homogeneous parity.
pub fn parity<R: Rng + ?Sized>(rng: &mut R) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Random graded-symmetric tensor of parity `eps`; each upper-triangular
/// entry is nonzero with probability `density`.
pub fn bracket_matrix<T: Scalar, R: Rng + ?Sized>(
    chart: &Arc<Chart>,
    rng: &mut R,
    eps: Parity,
    coeff_deg: u32,
    density: f64,
) -> BracketMatrix<T> {
    let mut entries = Vec::new();
    for a in chart.vars() {
        for b in chart.vars() {
            if b < a || (a == b && chart.parity(a).is_odd()) || !rng.gen_bool(density) {
                continue;
            }
            let want = eps + chart.parity(a) + chart.parity(b);
            entries.push((a, b, poly(chart, rng, coeff_deg, 2, Some(want))));
        }
    }
    BracketMatrix::from_entries(chart, eps, entries).expect("sampled entries are consistent")
}

/// Random bracket data `(S, γ, θ)` of parity `eps`.
pub fn vbracket<T: Scalar, R: Rng + ?Sized>(
    chart: &Arc<Chart>,
    rng: &mut R,
    eps: Parity,
    coeff_deg: u32,
) -> VBracketData<T> {
    let s = bracket_matrix(chart, rng, eps, coeff_deg, 0.5);
    let gamma = chart
        .vars()
        .map(|a| {
            if rng.gen_bool(0.6) {
                poly(chart, rng, coeff_deg, 2, Some(eps + chart.parity(a)))
            } else {
                GradedPoly::zero(chart)
            }
        })
        .collect();
    let theta = if rng.gen_bool(0.6) { poly(chart, rng, coeff_deg, 2, Some(eps)) } else { GradedPoly::zero(chart) };
    VBracketData::new(s, gamma, theta).expect("sampled data has the right parities")
}

/// Random even log-volume.
pub fn log_volume<T: Scalar, R: Rng + ?Sized>(chart: &Arc<Chart>, rng: &mut R, max_deg: u32, n_terms: usize) -> LogVolume<T> {
    LogVolume::new(poly(chart, rng, max_deg, n_terms, Some(Parity::Even))).expect("even by construction")
}

fn mentions(chart: &Chart, m: &Monomial, v: crate::chart::Var) -> bool {
    let ne = chart.n_even();
    if v.0 < ne {
        m.exp(v.0) > 0
    } else {
        m.odd_mask() & (1 << (v.0 - ne)) != 0
    }
}

fn compose<T: Scalar>(chart: &Arc<Chart>, first: &CoordChange<T>, fwd: Vec<GradedPoly<T>>, inv: Vec<GradedPoly<T>>) -> CoordChange<T> {
    let forward = fwd.iter().map(|f| f.substitute(first.forward(), chart).expect("parities agree")).collect();
    let inverse = first.inverse().iter().map(|f| f.substitute(&inv, chart).expect("parities agree")).collect();
    CoordChange::new(chart, chart, forward, inverse).expect("composite of valid changes")
}

/// Random coordinate change of the chart onto itself: a composite of
/// scalings, linear shears and nilpotent shears `v ↦ v + h` with `h`
/// independent of `v`.
pub fn coord_change<T: Scalar, R: Rng + ?Sized>(chart: &Arc<Chart>, rng: &mut R, steps: usize) -> CoordChange<T> {
    let xs: Vec<GradedPoly<T>> = chart.vars().map(|v| GradedPoly::var(chart, v)).collect();
    let mut out = CoordChange::identity(chart);
    let vars: Vec<crate::chart::Var> = chart.vars().collect();
    for _ in 0..steps {
        let v = *vars.choose(rng).unwrap();
        let p = chart.parity(v);
        let mut fwd = xs.clone();
        let mut inv = xs.clone();
        match rng.gen_range(0..3) {
            0 => {
                let (a, b) = *[(2, 1), (-1, 1), (1, 2), (3, 1), (-2, 3)].choose(rng).unwrap();
                let l = T::from_i64(a) / T::from_i64(b);
                inv[v.0] = xs[v.0].scale(&(T::one() / l.clone()));
                fwd[v.0] = xs[v.0].scale(&l);
            }
            1 => {
                let others: Vec<_> = vars.iter().copied().filter(|&u| u != v && chart.parity(u) == p).collect();
                let Some(&u) = others.choose(rng) else { continue };
                let c: T = coeff(rng);
                fwd[v.0] = &xs[v.0] + &xs[u.0].scale(&c);
                inv[v.0] = &xs[v.0] - &xs[u.0].scale(&c);
            }
            _ => {
                let min_odd = if p.is_odd() { 3 } else { 2 };
                let pool: Vec<Monomial> = Monomial::all_up_to(chart, 4)
                    .into_iter()
                    .filter(|m| m.parity() == p && m.odd_count() >= min_odd && !mentions(chart, m, v))
                    .collect();
                if pool.is_empty() {
                    continue;
                }
                let mut h = GradedPoly::zero(chart);
                for _ in 0..rng.gen_range(1..=2) {
                    h.add_term(*pool.choose(rng).unwrap(), coeff(rng));
                }
                fwd[v.0] = &xs[v.0] + &h;
                inv[v.0] = &xs[v.0] - &h;
            }
        }
        let step = CoordChange::new(chart, chart, fwd, inv).expect("elementary change is valid");
        out = compose(chart, &out, step.forward().to_vec(), step.inverse().to_vec());
    }
    out
}

/// Random odd tensor satisfying the Jacobi identity `(S, S) = 0`: either a
/// sparse random tensor that happens to satisfy it, or a constant tensor
/// written in random curvilinear coordinates.
pub fn jacobi_tensor<T: Scalar, R: Rng + ?Sized>(chart: &Arc<Chart>, rng: &mut R) -> BracketMatrix<T> {
    if chart.n_even() == 0 || rng.gen_bool(0.3) {
        for _ in 0..200 {
            let s = bracket_matrix(chart, rng, Parity::Odd, 2, 0.35);
            if s.is_zero() {
                continue;
            }
            let sym = crate::geom::symbol::tensor_symbol(&s);
            if crate::geom::tstar_bracket(chart, &sym, &sym).expect("same chart").is_zero() {
                return s;
            }
        }
    }
    let c: BracketMatrix<T> = bracket_matrix(chart, rng, Parity::Odd, 0, 0.8);
    coord_change(chart, rng, 3).push_tensor(&c).expect("same chart")
}
