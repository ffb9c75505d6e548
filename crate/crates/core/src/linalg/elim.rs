//! Fraction-free determinant, rank and characteristic polynomial.

use crate::linalg::{Matrix, Poly};
use crate::scalar::Scalar;

/// Bareiss elimination. Every division is exact.
pub fn det<T: Scalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "det of a non-square matrix");
    let n = m.dim();
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[(i, j)].clone() * pivot.clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = v / prev.clone();
            }
            a[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank over the rationals, via fraction-free row echelon form.
pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let pivot = a[(r, c)].clone();
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = a[(i, j)].clone() * pivot.clone() - a[(i, c)].clone() * a[(r, j)].clone();
                a[(i, j)] = v / prev.clone();
            }
            a[(i, c)] = T::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// `det(xI - A)` by Berkowitz' division-free recursion.
///
/// Builds the characteristic polynomial of each leading principal submatrix
/// from the previous one through a Toeplitz product, so no intermediate
/// value ever leaves the integers.
pub fn char_poly<T: Scalar>(m: &Matrix<T>) -> Poly<T> {
    assert!(m.is_square(), "char_poly of a non-square matrix");
    let n = m.dim();
    // descending coefficients of the current leading block
    let mut q: Vec<T> = vec![T::one()];
    for r in 0..n {
        // block M = A[0..r][0..r], row R = A[r][0..r], column S = A[0..r][r]
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(T::one());
        toeplitz.push(-m[(r, r)].clone());
        let mut s: Vec<T> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for _ in 0..r {
            let rs = (0..r).fold(T::zero(), |acc, j| acc + m[(r, j)].clone() * s[j].clone());
            toeplitz.push(-rs);
            s = (0..r)
                .map(|i| (0..r).fold(T::zero(), |acc, j| acc + m[(i, j)].clone() * s[j].clone()))
                .collect();
        }
        let mut next = vec![T::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, qj) in q.iter().enumerate() {
                if i >= j {
                    *slot = slot.clone() + toeplitz[i - j].clone() * qj.clone();
                }
            }
        }
        q = next;
    }
    q.reverse();
    Poly::new(q)
}
