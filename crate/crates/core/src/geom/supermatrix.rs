//! Matrices of polynomials: inverses and log-determinants in the
//! "constant invertible + nilpotent" regime.

use std::sync::Arc;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::GradedPoly;
use crate::scalar::Scalar;

pub type PolyMatrix<T> = Vec<Vec<GradedPoly<T>>>;

pub fn identity<T: Scalar>(chart: &Arc<Chart>, n: usize) -> PolyMatrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { GradedPoly::one(chart) } else { GradedPoly::zero(chart) }).collect())
        .collect()
}

pub fn mul<T: Scalar>(chart: &Arc<Chart>, a: &PolyMatrix<T>, b: &PolyMatrix<T>) -> PolyMatrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(GradedPoly::zero(chart), |acc, k| &acc + &(&row[k] * &b[k][j])))
                .collect()
        })
        .collect()
}

pub fn add<T: Scalar>(a: &PolyMatrix<T>, b: &PolyMatrix<T>) -> PolyMatrix<T> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn neg<T: Scalar>(a: &PolyMatrix<T>) -> PolyMatrix<T> {
    a.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

pub fn sub<T: Scalar>(a: &PolyMatrix<T>, b: &PolyMatrix<T>) -> PolyMatrix<T> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn is_zero<T: Scalar>(a: &PolyMatrix<T>) -> bool {
    a.iter().all(|r| r.iter().all(GradedPoly::is_zero))
}

/// Inverse of a constant square matrix by Gauss–Jordan elimination.
pub fn const_inverse<T: Scalar>(m: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or_else(|| Error::NotInvertible("constant part of the matrix is singular".into()))?;
        a.swap(c, p);
        let inv = T::one() / a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let t = a[c][k].clone() * f.clone();
                    a[i][k] = a[i][k].clone() - t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Splits `M` into its constant part and the rest.
fn split_constant<T: Scalar>(chart: &Arc<Chart>, m: &PolyMatrix<T>) -> (Vec<Vec<T>>, PolyMatrix<T>) {
    let c: Vec<Vec<T>> = m.iter().map(|r| r.iter().map(GradedPoly::constant_term).collect()).collect();
    let rest = m
        .iter()
        .zip(&c)
        .map(|(r, cr)| r.iter().zip(cr).map(|(x, k)| x - &GradedPoly::constant(chart, k.clone())).collect())
        .collect();
    (c, rest)
}

fn lift<T: Scalar>(chart: &Arc<Chart>, m: &[Vec<T>]) -> PolyMatrix<T> {
    m.iter().map(|r| r.iter().map(|x| GradedPoly::constant(chart, x.clone())).collect()).collect()
}

/// `M0^{-1}` and `K = M0^{-1}(M − M0)` for the constant part `M0`.
fn normalize<T: Scalar>(chart: &Arc<Chart>, m: &PolyMatrix<T>) -> Result<(PolyMatrix<T>, PolyMatrix<T>)> {
    let (c, rest) = split_constant(chart, m);
    let c_inv = lift(chart, &const_inverse(&c)?);
    let k = mul(chart, &c_inv, &rest);
    Ok((c_inv, k))
}

/// Inverse of `M = M0 + N` with `M0` constant invertible and `M0^{-1}N`
/// nilpotent, by the terminating Neumann series.
pub fn inverse<T: Scalar>(chart: &Arc<Chart>, m: &PolyMatrix<T>) -> Result<PolyMatrix<T>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (c_inv, k) = normalize(chart, m)?;
    let cap = n * (chart.n_odd() + 1) + 1;
    let mut sum = identity(chart, n);
    let mut pw = identity(chart, n);
    for _ in 0..cap {
        // pw = (−K)^i
        pw = neg(&mul(chart, &pw, &k));
        if is_zero(&pw) {
            return Ok(mul(chart, &sum, &c_inv));
        }
        sum = add(&sum, &pw);
    }
    Err(Error::NotInvertible("Neumann series does not terminate".into()))
}

/// `(det M0, tr ln(1 + K))` for `M = M0(1 + K)`; `K` must have nilpotent
/// entries so the logarithm terminates.
pub fn log_det<T: Scalar>(chart: &Arc<Chart>, m: &PolyMatrix<T>) -> Result<(T, GradedPoly<T>)> {
    let n = m.len();
    if n == 0 {
        return Ok((T::one(), GradedPoly::zero(chart)));
    }
    let (c, _) = split_constant(chart, m);
    let det0 = const_det(&c);
    let (_, k) = normalize(chart, m)?;
    if !k.iter().all(|r| r.iter().all(GradedPoly::is_nilpotent)) {
        return Err(Error::NotInvertible("determinant is not constant times 1 + nilpotent".into()));
    }
    let mut out = GradedPoly::zero(chart);
    let mut pw = identity(chart, n);
    let mut i = 0i64;
    loop {
        i += 1;
        pw = mul(chart, &pw, &k);
        if is_zero(&pw) {
            return Ok((det0, out));
        }
        let tr = (0..n).fold(GradedPoly::zero(chart), |acc, j| &acc + &pw[j][j]);
        let t = tr.scale(&(T::one() / T::from_i64(i)));
        out = if i % 2 == 1 { &out + &t } else { &out - &t };
    }
}

/// Determinant of a constant matrix by elimination.
pub fn const_det<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return T::zero() };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det = det * a[c][c].clone();
        for i in c + 1..n {
            let f = a[i][c].clone() / a[c][c].clone();
            for k in c..n {
                let t = a[c][k].clone() * f.clone();
                a[i][k] = a[i][k].clone() - t;
            }
        }
    }
    det
}
