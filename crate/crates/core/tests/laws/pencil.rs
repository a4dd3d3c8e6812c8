//! The canonical pencil of bracket data: normalization, self-adjointness,
//! reproduction of the data, extraction and uniqueness.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use superdelta::geom::*;
use superdelta::{sample, Chart, Density, Monomial, Op, Parity, Poly, Rational, Var, Weight};

use super::linalg::sparse_kernel;
use super::{check, lift};

pub fn pencil_charts() -> Vec<Arc<Chart>> {
    vec![Chart::standard(1, 1), Chart::standard(1, 2), Chart::standard(2, 2)]
}

fn coord(chart: &Arc<Chart>, a: Var) -> Density {
    Density::from(Poly::var(chart, a))
}

/// `P1|_{w=0} = 0`, `P* = P`, `{xᵃ,xᵇ} = Sᵃᵇ`, `{xᵃ,t} = γᵃt`, `{t,t} = θt²`,
/// and `extract_vbracket(P) = data`.
pub fn pencil_data_laws(data: &VBracketData<Rational>) -> Result<(), String> {
    let chart = data.chart();
    let p = canonical_pencil(data);
    check(p.specialize(&Weight::from_integer(0)).on_one().is_zero(), || "pencil is not normalized".into())?;
    check(p.pencil_adjoint() == p, || "pencil is not self-adjoint".into())?;
    let t = Density::volume(chart);
    for a in chart.vars() {
        for b in chart.vars() {
            let br = lift(pencil_bracket(&p, &coord(chart, a), &coord(chart, b)))?;
            check(br == Density::from(data.s().get(a, b).clone()), || format!("{{x^{},x^{}}} ≠ S", a.0, b.0))?;
        }
        let br = lift(pencil_bracket(&p, &coord(chart, a), &t))?;
        let want = Density::weighted(data.gamma()[a.0].clone(), Weight::from_integer(1));
        check(br == want, || format!("{{x^{},t}} ≠ γt", a.0))?;
    }
    let tt = lift(pencil_bracket(&p, &t, &t))?;
    check(tt == Density::weighted(data.theta().clone(), Weight::from_integer(2)), || "{t,t} ≠ θt²".into())?;
    let back = lift(extract_vbracket(&p))?;
    check(back == *data, || "extraction does not invert the canonical pencil".into())
}

type Key = (usize, Weight, Monomial, Monomial);

fn sparse(tag: usize, d: &Density) -> Vec<(Key, Rational)> {
    d.parts().flat_map(|(w, f)| f.terms().map(move |(m, c)| ((tag, *w, Monomial::ONE, *m), c.clone()))).collect()
}

/// Dimension of the space of operators `R` of parity `eps`, order `≤ 2` on
/// densities and coefficients of degree `≤ deg` that are normalized,
/// self-adjoint and generate the zero bracket; it is 0 by uniqueness.
/// Without self-adjointness the derivations of densities survive.
pub fn ambiguity_dimension(chart: &Arc<Chart>, eps: Parity, deg: u32, self_adjoint: bool) -> Result<usize, String> {
    let coeffs: Vec<Monomial> = Monomial::all_up_to(chart, deg);
    let mut basis: Vec<Op> = Vec::new();
    for wpow in 0..=2u32 {
        for d in Monomial::all_up_to(chart, 2 - wpow) {
            for m in &coeffs {
                if m.parity() + d.parity() == eps {
                    basis.push(Op::term(&Poly::monomial(chart, *m, Rational::from_integer(1.into())), d, wpow));
                }
            }
        }
    }
    let t = Density::volume(chart);
    let mut gens: Vec<Density> = chart.vars().map(|a| coord(chart, a)).collect();
    gens.push(t);
    let mut images = Vec::with_capacity(basis.len());
    for r in &basis {
        let adj = lift(r.pencil_adjoint().try_sub(r))?;
        let mut v: Vec<(Key, Rational)> = if !self_adjoint {
            Vec::new()
        } else {
            adj
            .terms()
            .flat_map(|(k, c)| {
                c.terms().map(move |(m, x)| ((0, Weight::from_integer(k.wpow as i64), k.deriv, *m), x.clone()))
            })
            .collect()
        };
        let normal = r.specialize(&Weight::from_integer(0)).on_one();
        v.extend(sparse(1, &Density::from(normal)));
        let mut tag = 2;
        for (i, g) in gens.iter().enumerate() {
            for h in &gens[i..] {
                v.extend(sparse(tag, &lift(pencil_bracket(r, g, h))?));
                tag += 1;
            }
        }
        images.push(v);
    }
    Ok(sparse_kernel(&images).len())
}

#[derive(Debug, Default)]
pub struct Summary {
    pub data: usize,
}

pub fn run(rng: &mut ChaCha8Rng, per_chart: usize) -> Result<Summary, String> {
    let mut out = Summary::default();
    for chart in pencil_charts() {
        for i in 0..per_chart {
            let eps = if i % 2 == 0 { Parity::Odd } else { Parity::Even };
            let data: VBracketData<Rational> = sample::vbracket(&chart, rng, eps, 2);
            pencil_data_laws(&data)?;
            out.data += 1;
        }
    }
    Ok(out)
}
