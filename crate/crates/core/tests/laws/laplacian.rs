//! Identities of the odd Laplacian of a volume form and of its action on
//! densities.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use superdelta::geom::*;
use superdelta::{sample, Chart, Monomial, Op, Order, Parity, Poly, Rational, Scalar, Weight};

use super::{check, lift};

type S = BracketMatrix<Rational>;
type L = LogVolume<Rational>;

pub fn weights() -> [Weight; 5] {
    [Weight::new(0, 1), Weight::new(1, 3), Weight::new(1, 2), Weight::new(1, 1), Weight::new(2, 1)]
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn rat(w: &Weight) -> Rational {
    Rational::from_weight(w)
}

fn homogeneous(chart: &Arc<Chart>, rng: &mut ChaCha8Rng) -> (Parity, Poly) {
    let p = sample::parity(rng);
    (p, sample::poly(chart, rng, 3, 3, Some(p)))
}

fn koszul(neg: bool, f: Poly) -> Poly {
    if neg {
        -&f
    } else {
        f
    }
}

/// `Δ(fg) = (Δf)g + (−1)^{f̃} fΔg + {f,g}` and its odd Poisson form.
pub fn leibniz(s: &S, sigma: &L, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = s.chart();
    let d = lift(odd_laplacian(s, sigma))?;
    let (fp, f) = homogeneous(c, rng);
    let (_, g) = homogeneous(c, rng);
    let lhs = lift(d.apply_poly(&(&f * &g)))?;
    let base = &(&lift(d.apply_poly(&f))? * &g) + &koszul(fp.is_odd(), &f * &lift(d.apply_poly(&g))?);
    let sym = lift(coordinate_bracket(s, &f, &g))?;
    check(lhs == &base + &sym, || "Leibniz discrepancy differs from the coordinate bracket".into())?;
    let odd = lift(odd_poisson_bracket(s, &f, &g))?;
    check(lhs == &base + &koszul(!fp.is_odd(), odd), || "odd Poisson form of the discrepancy fails".into())?;
    check(lift(bracket_from_operator(&d, &f, &g))? == sym, || "generated bracket differs".into())
}

/// `Δ_{e^σρ} = Δ_ρ + ½X_σ`.
pub fn shift_law(s: &S, sigma0: &L, sigma: &L) -> Result<(), String> {
    let lhs = lift(odd_laplacian(s, &lift(sigma0.shifted(sigma))?))?;
    let x = lift(hamiltonian_vf(s, sigma.sigma()))?;
    let rhs = lift(lift(odd_laplacian(s, sigma0))?.try_add(&x.scale(&half())))?;
    check(lhs == rhs, || "Δ_ρ′ ≠ Δ_ρ + ½X_σ".into())
}

/// `Δ{f,g} = {Δf,g} + (−1)^{f̃+1}{f,Δg}` for the odd Poisson bracket;
/// returns whether it held.
pub fn derivation_holds(s: &S, sigma: &L, rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let c = s.chart();
    let d = lift(odd_laplacian(s, sigma))?;
    let (fp, f) = homogeneous(c, rng);
    let (_, g) = homogeneous(c, rng);
    let br = |a: &Poly, b: &Poly| lift(odd_poisson_bracket(s, a, b));
    let lhs = lift(d.apply_poly(&br(&f, &g)?))?;
    let rhs = &br(&lift(d.apply_poly(&f))?, &g)? + &koszul(!fp.is_odd(), br(&f, &lift(d.apply_poly(&g))?)?);
    Ok(lhs == rhs)
}

/// `Δ_{ρ′}² = Δ_ρ² − X_H` with `H = H(ρ′, ρ)`, and `ord Δ_ρ² ≤ 1`, for a
/// Jacobi tensor.
pub fn square_law(s: &S, sigma0: &L, sigma: &L) -> Result<(), String> {
    let d0 = lift(odd_laplacian(s, sigma0))?;
    let d1 = lift(odd_laplacian(s, &lift(sigma0.shifted(sigma))?))?;
    let sq0 = lift(d0.compose(&d0))?;
    let sq1 = lift(d1.compose(&d1))?;
    check(sq0.order_of() <= Order::Finite(1), || format!("ord Δ² = {}", sq0.order_of()))?;
    let h = lift(master_discrepancy(s, sigma0, sigma))?;
    let xh = lift(hamiltonian_vf(s, &h))?;
    check(sq1 == lift(sq0.try_sub(&xh))?, || "Δ_ρ′² ≠ Δ_ρ² − X_H".into())
}

/// `Δ_ρ²{f,g} = {Δ_ρ²f, g} + {f, Δ_ρ²g}` for a Jacobi tensor.
pub fn square_is_poisson(s: &S, sigma: &L, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = s.chart();
    let d = lift(odd_laplacian(s, sigma))?;
    let sq = lift(d.compose(&d))?;
    let (_, f) = homogeneous(c, rng);
    let (_, g) = homogeneous(c, rng);
    let br = |a: &Poly, b: &Poly| lift(odd_poisson_bracket(s, a, b));
    let lhs = lift(sq.apply_poly(&br(&f, &g)?))?;
    let rhs = &br(&lift(sq.apply_poly(&f))?, &g)? + &br(&f, &lift(sq.apply_poly(&g))?)?;
    check(lhs == rhs, || "Δ_ρ² is not a derivation of the bracket".into())
}

/// `[Δ_ρ, f] = L_{X_f} + (1 − 2w)(Δ_ρ f)` on densities of weight `w`.
pub fn commutator_law(s: &S, sigma: &L, w: &Weight, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = s.chart();
    let dw = lift(act_on_w_densities(s, sigma, w))?;
    let (_, f) = homogeneous(c, rng);
    let lhs = lift(dw.commutator_with(&f))?;
    let lie = lift(lie_derivative(&lift(hamiltonian_vf(s, &f))?, w))?;
    let df = lift(lift(odd_laplacian(s, sigma))?.apply_poly(&f))?;
    let k = Rational::from_i64(1) - rat(w) * Rational::from_i64(2);
    let rhs = lift(lie.try_add(&Op::mult(&df.scale(&k))))?;
    check(lhs == rhs, || format!("commutator law fails at w = {w}"))
}

/// `Δ_{ρ′} = Δ_ρ + (½ − w) L_{X_σ} − 4w(1 − w) H(ρ′, ρ)` on densities of
/// weight `w`.
pub fn weight_law(s: &S, sigma0: &L, sigma: &L, w: &Weight) -> Result<(), String> {
    let a = lift(act_on_w_densities(s, &lift(sigma0.shifted(sigma))?, w))?;
    let b = lift(act_on_w_densities(s, sigma0, w))?;
    let lie = lift(lie_derivative(&lift(hamiltonian_vf(s, sigma.sigma()))?, w))?;
    let h = lift(master_discrepancy(s, sigma0, sigma))?;
    let wt = rat(w);
    let one = Rational::from_i64(1);
    let hk = Rational::from_i64(-4) * &wt * (&one - &wt);
    let rhs = lift(lift(b.try_add(&lie.scale(&(half() - &wt))))?.try_add(&Op::mult(&h.scale(&hk))))?;
    check(a == rhs, || format!("weight-w transformation law fails at w = {w}"))
}

/// `H(ρ″, ρ) = H(ρ″, ρ′) + H(ρ′, ρ)`.
pub fn cocycle(s: &S, sigma0: &L, sigma: &L, sigma1: &L) -> Result<(), String> {
    let h01 = lift(master_discrepancy(s, sigma0, sigma))?;
    let h12 = lift(master_discrepancy(s, &lift(sigma0.shifted(sigma))?, sigma1))?;
    let h02 = lift(master_discrepancy(s, sigma0, &lift(sigma.shifted(sigma1))?))?;
    check(h02 == &h01 + &h12, || "master discrepancy is not additive".into())
}

/// A log-volume change `σ` solving the master equation `Δ_ρ e^{σ/2} = 0`:
/// `e^{σ/2} = 1 + n` with `n` a random nilpotent element of `ker Δ_ρ`.
pub fn master_solution(s: &S, sigma0: &L, rng: &mut ChaCha8Rng) -> Result<Option<L>, String> {
    let c = s.chart();
    let d = lift(odd_laplacian(s, sigma0))?;
    let basis: Vec<Poly> = Monomial::all_up_to(c, 4)
        .into_iter()
        .filter(|m| m.parity() == Parity::Even && m.odd_mask() != 0)
        .map(|m| Poly::monomial(c, m, Rational::from_i64(1)))
        .collect();
    let images = basis.iter().map(|b| lift(d.apply_poly(b))).collect::<Result<Vec<_>, _>>()?;
    let ker = super::linalg::kernel(&images);
    if ker.is_empty() {
        return Ok(None);
    }
    let mut n = Poly::zero(c);
    for _ in 0..2 {
        let v = &ker[rng.gen_range(0..ker.len())];
        let k: Rational = sample::coeff(rng);
        for (b, x) in basis.iter().zip(v) {
            n = &n + &b.scale(&(x * &k));
        }
    }
    if n.is_zero() {
        return Ok(None);
    }
    let g = &n + &Poly::one(c);
    let sigma = lift(LogVolume::new(lift(g.log_unipotent())?.scale(&Rational::from_i64(2))))?;
    check(lift(master_discrepancy(s, sigma0, &sigma))?.is_zero(), || "constructed σ does not solve the master equation".into())?;
    Ok(Some(sigma))
}

/// Master-groupoid composition and ρ-independence of Δ on half-densities
/// along master orbits.
pub fn master_orbits(s: &S, rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let c = s.chart();
    let flat = LogVolume::flat(c);
    let Some(sigma0) = master_solution(s, &flat, rng)? else { return Ok(false) };
    let Some(sigma) = master_solution(s, &sigma0, rng)? else { return Ok(false) };
    let rho1 = lift(sigma0.shifted(&sigma))?;
    let Some(sigma1) = master_solution(s, &rho1, rng)? else { return Ok(false) };
    let total = lift(sigma.shifted(&sigma1))?;
    check(lift(master_discrepancy(s, &sigma0, &total))?.is_zero(), || "master groupoid does not compose".into())?;
    let w = Weight::new(1, 2);
    let a = lift(act_on_w_densities(s, &sigma0, &w))?;
    let b = lift(act_on_w_densities(s, &rho1, &w))?;
    check(a == b, || "Δ on half-densities moves along a master orbit".into())?;
    Ok(true)
}

/// The transformation law on half-densities, `Δ_{ρ′} = Δ_ρ − H(ρ′, ρ)`.
pub fn half_density_sign(s: &S, sigma0: &L, sigma: &L) -> Result<(), String> {
    let w = Weight::new(1, 2);
    let a = lift(act_on_w_densities(s, &lift(sigma0.shifted(sigma))?, &w))?;
    let b = lift(act_on_w_densities(s, sigma0, &w))?;
    let h = lift(master_discrepancy(s, sigma0, sigma))?;
    check(a == lift(b.try_sub(&Op::mult(&h)))?, || "Δ_ρ′ ≠ Δ_ρ − H on half-densities".into())
}

pub struct Summary {
    pub instances: usize,
    pub derivation_with_jacobi: usize,
    pub derivation_without_jacobi_failures: usize,
    pub master_orbits: usize,
}

/// Runs every law on `per_chart` random instances per chart.
pub fn run(rng: &mut ChaCha8Rng, per_chart: usize) -> Result<Summary, String> {
    let mut sum = Summary { instances: 0, derivation_with_jacobi: 0, derivation_without_jacobi_failures: 0, master_orbits: 0 };
    for chart in super::charts() {
        for _ in 0..per_chart {
            let s: S = sample::bracket_matrix(&chart, rng, Parity::Odd, 2, 0.5);
            let jac: S = sample::jacobi_tensor(&chart, rng);
            let flat_jac: S = sample::bracket_matrix(&chart, rng, Parity::Odd, 0, 0.7);
            let sigma0: L = sample::log_volume(&chart, rng, 3, 3);
            let sigma: L = sample::log_volume(&chart, rng, 3, 3);
            let sigma1: L = sample::log_volume(&chart, rng, 3, 3);
            leibniz(&s, &sigma0, rng)?;
            shift_law(&s, &sigma0, &sigma)?;
            if derivation_holds(&jac, &sigma0, rng)? {
                sum.derivation_with_jacobi += 1;
            } else {
                return Err("Δ_ρ is not a derivation of a Jacobi bracket".into());
            }
            if !derivation_holds(&s, &sigma0, rng)? {
                sum.derivation_without_jacobi_failures += 1;
            }
            square_law(&jac, &sigma0, &sigma)?;
            square_is_poisson(&jac, &sigma0, rng)?;
            for w in weights() {
                commutator_law(&s, &sigma0, &w, rng)?;
                weight_law(&s, &sigma0, &sigma, &w)?;
            }
            half_density_sign(&s, &sigma0, &sigma)?;
            cocycle(&s, &sigma0, &sigma, &sigma1)?;
            if rng.gen_bool(0.5) && master_orbits(&flat_jac, rng)? {
                sum.master_orbits += 1;
            }
            sum.instances += 1;
        }
    }
    Ok(sum)
}
