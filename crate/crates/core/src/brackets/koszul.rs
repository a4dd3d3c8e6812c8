//! Koszul signs and shuffle permutations.

use crate::chart::Parity;
use crate::error::{Error, Result};

/// Sign acquired by reordering `a_1, …, a_n` into `a_{perm[0]}, …,
/// a_{perm[n−1]}`: one factor −1 per inverted pair of odd elements.
pub fn koszul_sign(perm: &[usize], parities: &[Parity]) -> Result<i32> {
    if perm.len() != parities.len() {
        return Err(Error::Precondition("permutation and parity list differ in length".into()));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Precondition("not a permutation".into()));
        }
    }
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && parities[perm[i]].is_odd() && parities[perm[j]].is_odd() {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// All `(k, l)`-shuffles of `0..k+l` in lexicographic order: permutations
/// increasing on the first `k` and on the last `l` positions.
pub fn shuffles(k: usize, l: usize) -> Vec<Vec<usize>> {
    let n = k + l;
    let mut out = Vec::new();
    let mut first = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, first: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if first.len() == k {
            let mut perm = first.clone();
            perm.extend((0..n).filter(|i| !first.contains(i)));
            out.push(perm);
            return;
        }
        for i in start..n {
            first.push(i);
            rec(i + 1, n, k, first, out);
            first.pop();
        }
    }
    rec(0, n, k, &mut first, &mut out);
    out
}
