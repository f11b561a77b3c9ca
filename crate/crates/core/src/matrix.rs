//! Dense matrices over a [`Ring`], stored row-major as `Vec<Vec<_>>`.
//!
//! Determinants and characteristic polynomials use Berkowitz's algorithm,
//! which needs no division and therefore works unchanged over the local
//! instance and over étale algebras with zero divisors.

use crate::error::{Error, Result};
use crate::scalar::Ring;

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

pub fn transpose<E: Clone>(a: &Matrix<E>) -> Matrix<E> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (k, x) in row.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(x, &b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
        })
        .collect()
}

/// Coefficients of `det(λI - A)`, highest degree first (leading entry 1).
pub fn charpoly_desc<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = a.len();
    let mut v = vec![ring.one()];
    for r in 0..n {
        // q = [1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C]
        let mut q = Vec::with_capacity(r + 2);
        q.push(ring.one());
        q.push(ring.neg(&a[r][r]));
        let mut col: Vec<R::Elem> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let dot = (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&a[r][j], &col[j])));
            q.push(ring.neg(&dot));
            col = (0..r)
                .map(|i| (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&a[i][j], &col[j]))))
                .collect();
        }
        // v <- T v with T lower-triangular Toeplitz built from q
        let next: Vec<R::Elem> = (0..r + 2)
            .map(|i| {
                let mut acc = ring.zero();
                for (j, vj) in v.iter().enumerate() {
                    if i >= j {
                        acc = ring.add(&acc, &ring.mul(&q[i - j], vj));
                    }
                }
                acc
            })
            .collect();
        v = next;
    }
    v
}

pub fn det<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    let n = a.len();
    let cp = charpoly_desc(ring, a);
    if n % 2 == 0 {
        cp[n].clone()
    } else {
        ring.neg(&cp[n])
    }
}

pub fn trace<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    (0..a.len()).fold(ring.zero(), |acc, i| ring.add(&acc, &a[i][i]))
}

/// Solves `A X = B` by elimination with unit pivots.
///
/// A unit pivot exists in every column exactly when `det A` is a unit, for
/// fields and for local rings alike; otherwise `NotAUnit` is returned.
pub fn solve<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    let width = if n == 0 { 0 } else { b[0].len() };
    let mut aug: Matrix<R::Elem> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&r| ring.is_unit(&aug[r][c])).ok_or(Error::NotAUnit)?;
        aug.swap(c, pivot);
        let inv = ring.inverse(&aug[c][c])?;
        for x in aug[c].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for r in 0..n {
            if r == c || ring.is_zero(&aug[r][c]) {
                continue;
            }
            let factor = aug[r][c].clone();
            for k in c..n + width {
                let t = ring.mul(&factor, &aug[c][k]);
                aug[r][k] = ring.sub(&aug[r][k], &t);
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn inverse<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    solve(ring, a, &identity(ring, a.len()))
}
