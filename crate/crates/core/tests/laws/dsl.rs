//! Rendering followed by parsing and elaboration is the identity.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superdelta::dsl::{load, render_item, render_module, Item, Module};
use superdelta::{sample, Chart, Density, Op, Poly, Rational, Weight};

use super::charts;

/// A random item of a kind chosen by `kind`.
pub fn random_item(chart: &std::sync::Arc<Chart>, rng: &mut ChaCha8Rng, kind: u8) -> Item {
    match kind % 7 {
        0 => {
            let p = sample::parity(rng);
            Item::Element(Density::from(sample::poly::<Rational, _>(chart, rng, 4, 5, Some(p))))
        }
        1 => {
            let mut d = Density::zero(chart);
            for w in [Weight::new(0, 1), Weight::new(1, 2), Weight::new(1, 1), Weight::new(-1, 3), Weight::new(2, 1)] {
                if rng.gen_bool(0.5) {
                    let f: Poly = sample::poly(chart, rng, 3, 3, None);
                    d = d.try_add(&Density::weighted(f, w)).unwrap();
                }
            }
            Item::Element(d)
        }
        2 => {
            let p = sample::parity(rng);
            Item::Operator(sample::pencil::<Rational, _>(chart, rng, 3, 2, 2, 4, p))
        }
        3 => {
            let p = sample::parity(rng);
            Item::Tensor(sample::bracket_matrix(chart, rng, p, 2, 0.5))
        }
        4 => {
            let p = sample::parity(rng);
            Item::Vector(sample::vbracket::<Rational, _>(chart, rng, p, 2).gamma().to_vec())
        }
        5 => Item::Volume(sample::log_volume(chart, rng, 3, 4)),
        _ => Item::Map(sample::coord_change(chart, rng, 2)),
    }
}

fn check_round_trip(m: &Module) -> Result<(), TestCaseError> {
    let text = render_module(m);
    let back = load(&text).map_err(|d| TestCaseError::fail(format!("{}\n{text}", d.render(&text, false))))?;
    prop_assert_eq!(&back, m, "round trip changed the value:\n{}", text);
    prop_assert_eq!(render_module(&back), text);
    Ok(())
}

/// Runs `cases` round trips of random modules holding one to three items.
pub fn round_trips(cases: u32) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let count = std::cell::Cell::new(0u32);
    let all = charts();
    runner
        .run(&(any::<u64>(), 0..all.len(), proptest::collection::vec(any::<u8>(), 1..4)), |(seed, ci, kinds)| {
            let chart = &all[ci];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let items: Vec<(String, Item)> = kinds
                .iter()
                .enumerate()
                .map(|(i, k)| (format!("v{i}"), random_item(chart, &mut rng, *k)))
                .collect();
            let twin = if seed % 2 == 0 {
                items[0].1.clone()
            } else {
                random_item(chart, &mut rng, kinds[0])
            };
            prop_assert_eq!(
                render_item("v0", "C", &items[0].1) == render_item("v0", "C", &twin),
                items[0].1 == twin
            );
            let m = Module { chart_name: "C".into(), chart: chart.clone(), items };
            count.set(count.get() + 1);
            check_round_trip(&m)
        })
        .map_err(|e| e.to_string())?;
    Ok(count.get())
}

/// Operators built from the parser agree with the core constructors.
pub fn parsed_operator(chart: &std::sync::Arc<Chart>, src: &str) -> Op {
    let m = load(&format!("{} operator D = {src};", superdelta::dsl::render_chart("C", chart))).unwrap();
    match m.get("D") {
        Some(Item::Operator(o)) => o.clone(),
        _ => unreachable!(),
    }
}
