//! Packed monomials `x^α ξ_A`.
//!
//! Even exponents are packed one byte per variable into a `u64`, variable 0
//! in the most significant byte so that the integer order is lexicographic.
//! The odd part is a bitmask; the monomial stands for the product of the odd
//! generators in increasing index order.

use crate::chart::{Chart, Parity, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub(crate) even: u64,
    pub(crate) odd: u32,
}

#[inline]
fn shift(i: usize) -> u32 {
    (56 - 8 * i) as u32
}

impl Monomial {
    pub const ONE: Monomial = Monomial { even: 0, odd: 0 };

    pub fn var(chart: &Chart, v: Var) -> Monomial {
        if v.0 < chart.n_even() {
            Monomial { even: 1u64 << shift(v.0), odd: 0 }
        } else {
            Monomial { even: 0, odd: 1u32 << (v.0 - chart.n_even()) }
        }
    }

    pub fn from_parts(exps: &[u32], odd: u32) -> Monomial {
        let mut m = Monomial { even: 0, odd };
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent overflow");
            m.even |= (e as u64) << shift(i);
        }
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.even >> shift(i)) & 0xff) as u32
    }

    pub fn odd_mask(&self) -> u32 {
        self.odd
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn even_degree(&self) -> u32 {
        (0..8).map(|i| self.exp(i)).sum()
    }

    pub fn degree(&self) -> u32 {
        self.even_degree() + self.odd_count()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd_count())
    }

    pub fn is_one(&self) -> bool {
        self.even == 0 && self.odd == 0
    }

    /// Product of two monomials together with the Koszul sign of bringing the
    /// odd factors into canonical order; `None` when an odd generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut even = 0u64;
        for i in 0..8 {
            let e = self.exp(i) + other.exp(i);
            assert!(e < 256, "exponent overflow");
            even |= (e as u64) << shift(i);
        }
        Some((Monomial { even, odd: self.odd | other.odd }, reorder_sign(self.odd, other.odd)))
    }

    /// Left derivative by variable `v`: coefficient multiplier (integer, with
    /// sign) and resulting monomial.
    pub fn partial(&self, chart: &Chart, v: Var) -> Option<(i64, Monomial)> {
        if v.0 < chart.n_even() {
            let e = self.exp(v.0);
            if e == 0 {
                return None;
            }
            let even = self.even - (1u64 << shift(v.0));
            Some((e as i64, Monomial { even, odd: self.odd }))
        } else {
            let bit = 1u32 << (v.0 - chart.n_even());
            if self.odd & bit == 0 {
                return None;
            }
            let before = (self.odd & (bit - 1)).count_ones();
            let s = if before % 2 == 0 { 1 } else { -1 };
            Some((s, Monomial { even: self.even, odd: self.odd & !bit }))
        }
    }

    /// Multiplicity of variable `v` in the monomial (0 or 1 for odd ones).
    pub fn count(&self, chart: &Chart, v: Var) -> u32 {
        if v.0 < chart.n_even() {
            self.exp(v.0)
        } else {
            (self.odd >> (v.0 - chart.n_even())) & 1
        }
    }

    /// Enumerates all monomials on `chart` of total degree at most `max_deg`.
    pub fn all_up_to(chart: &Chart, max_deg: u32) -> Vec<Monomial> {
        let m = chart.n_even();
        let q = chart.n_odd();
        let mut out = Vec::new();
        let mut exps = vec![0u32; m];
        for odd in 0u32..(1u32 << q) {
            let od = odd.count_ones();
            if od > max_deg {
                continue;
            }
            enumerate_even(&mut exps, 0, max_deg - od, &mut |e| {
                out.push(Monomial::from_parts(e, odd));
            });
        }
        out.sort();
        out
    }
}

fn enumerate_even(exps: &mut Vec<u32>, i: usize, budget: u32, f: &mut dyn FnMut(&[u32])) {
    if i == exps.len() {
        f(exps);
        return;
    }
    for e in 0..=budget {
        exps[i] = e;
        enumerate_even(exps, i + 1, budget - e, f);
    }
    exps[i] = 0;
}

/// Sign of `ξ_A ξ_B → ξ_{A∪B}`: parity of the number of pairs `(i ∈ A, j ∈ B)`
/// with `i > j`. Returns `true` for a negative sign.
pub(crate) fn reorder_sign(a: u32, b: u32) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> j >> 1).count_ones();
    }
    inversions % 2 == 1
}
