//! Canonical text for core values; the output parses back to the same value.

use num_traits::{One, Signed, Zero};

use super::elaborate::{Item, Module};
use crate::chart::{Chart, Var};
use crate::geom::{BracketMatrix, CoordChange, LogVolume};
use crate::monomial::Monomial;
use crate::{Density, Op, Poly, Rational, Weight};

fn monomial_factors(chart: &Chart, m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for v in chart.vars() {
        let k = m.count(chart, v);
        match k {
            0 => {}
            1 => out.push(chart.name(v).to_string()),
            k => out.push(format!("{}^{k}", chart.name(v))),
        }
    }
    out
}

fn weight_factor(w: &Weight) -> Option<String> {
    if w.is_zero() {
        None
    } else if w.is_one() {
        Some("t".into())
    } else if w.is_integer() && w.is_positive() {
        Some(format!("t^{w}"))
    } else {
        Some(format!("t^({w})"))
    }
}

/// Joins signed terms `c·f₁*f₂*…` into a sum, or `0`.
fn join(terms: Vec<(Rational, Vec<String>)>) -> String {
    let mut out = String::new();
    for (c, factors) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        let body = if factors.is_empty() {
            a.to_string()
        } else {
            let head = if a.is_one() {
                String::new()
            } else if a.is_integer() {
                format!("{a}*")
            } else {
                format!("({a})*")
            };
            format!("{head}{}", factors.join("*"))
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn render_poly(f: &Poly) -> String {
    let chart = f.chart();
    join(f.terms().rev().map(|(m, c)| (c.clone(), monomial_factors(chart, m))).collect())
}

pub fn render_density(d: &Density) -> String {
    let chart = d.chart();
    let parts: Vec<_> = d.parts().collect();
    let mut terms = Vec::new();
    for (w, f) in parts.into_iter().rev() {
        for (m, c) in f.terms().rev() {
            let mut factors = monomial_factors(chart, m);
            factors.extend(weight_factor(w));
            terms.push((c.clone(), factors));
        }
    }
    join(terms)
}

/// Terms `c*W^k*mono*d(x)^2*d(xi)`, derivatives in descending order.
pub fn render_op(d: &Op) -> String {
    let chart = d.chart();
    let mut keyed: Vec<_> = d.terms().flat_map(|(k, c)| c.terms().map(move |(m, x)| (*k, *m, x.clone()))).collect();
    keyed.sort_by(|a, b| (b.0.deriv, b.0.wpow, b.1).cmp(&(a.0.deriv, a.0.wpow, a.1)));
    let terms = keyed
        .into_iter()
        .map(|(k, m, x)| {
            let mut factors = Vec::new();
            match k.wpow {
                0 => {}
                1 => factors.push("W".to_string()),
                p => factors.push(format!("W^{p}")),
            }
            factors.extend(monomial_factors(chart, &m));
            for v in chart.vars() {
                match k.deriv.count(chart, v) {
                    0 => {}
                    1 => factors.push(format!("d({})", chart.name(v))),
                    p => factors.push(format!("d({})^{p}", chart.name(v))),
                }
            }
            (x, factors)
        })
        .collect();
    join(terms)
}

pub fn render_chart(name: &str, chart: &Chart) -> String {
    let mut out = format!("chart {name} {{");
    if !chart.even_names().is_empty() {
        out.push_str(&format!(" even {};", chart.even_names().join(", ")));
    }
    if !chart.odd_names().is_empty() {
        out.push_str(&format!(" odd {};", chart.odd_names().join(", ")));
    }
    out.push_str(" }");
    out
}

pub fn render_tensor(name: &str, chart_name: &str, s: &BracketMatrix<Rational>) -> String {
    let chart = s.chart();
    let mut out = format!("tensor {name} on {chart_name} parity {} {{", s.parity());
    for a in chart.vars() {
        for b in chart.vars().filter(|b| b.0 >= a.0) {
            let v = s.get(a, b);
            if !v.is_zero() {
                out.push_str(&format!(" [{}, {}] = {};", chart.name(a), chart.name(b), render_poly(v)));
            }
        }
    }
    out.push_str(" }");
    out
}

fn assignments(chart: &Chart, images: &[Poly], skip: impl Fn(Var, &Poly) -> bool) -> String {
    let mut out = String::from("{");
    for v in chart.vars() {
        let f = &images[v.0];
        if !skip(v, f) {
            out.push_str(&format!(" {} = {};", chart.name(v), render_poly(f)));
        }
    }
    out.push_str(" }");
    out
}

pub fn render_vector(name: &str, chart_name: &str, gamma: &[Poly]) -> String {
    let chart = gamma.first().map(|g| g.chart().clone());
    match chart {
        Some(c) => format!("vector {name} on {chart_name} {}", assignments(&c, gamma, |_, f| f.is_zero())),
        None => format!("vector {name} on {chart_name} {{ }}"),
    }
}

pub fn render_volume(name: &str, chart_name: &str, sigma: &LogVolume<Rational>) -> String {
    format!("density {name} on {chart_name} = {};", render_poly(sigma.sigma()))
}

pub fn render_map(name: &str, chart_name: &str, map: &CoordChange<Rational>) -> String {
    let (s, t) = (map.source(), map.target());
    format!(
        "map {name} on {chart_name} {} inverse {}",
        assignments(t, map.forward(), |v, f| *f == Poly::var(s, v)),
        assignments(s, map.inverse(), |v, f| *f == Poly::var(t, v))
    )
}

pub fn render_item(name: &str, chart_name: &str, item: &Item) -> String {
    match item {
        Item::Tensor(s) => render_tensor(name, chart_name, s),
        Item::Vector(g) => render_vector(name, chart_name, g),
        Item::Volume(v) => render_volume(name, chart_name, v),
        Item::Element(d) => format!("element {name} on {chart_name} = {};", render_density(d)),
        Item::Operator(o) => format!("operator {name} on {chart_name} = {};", render_op(o)),
        Item::Map(m) => render_map(name, chart_name, m),
    }
}

/// The whole module, one declaration per line.
pub fn render_module(m: &Module) -> String {
    let mut out = render_chart(&m.chart_name, &m.chart);
    out.push('\n');
    for (name, item) in &m.items {
        out.push_str(&render_item(name, &m.chart_name, item));
        out.push('\n');
    }
    out
}
