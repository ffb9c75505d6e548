//! Hermite and Smith normal forms with explicit unimodular transforms.

use crate::linalg::Matrix;
use crate::scalar::{rem_nonneg, Scalar};

/// `U * M = H` with `U` unimodular and `H` in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult<T: Scalar> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// Column index of the pivot in each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl<T: Scalar> HnfResult<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `U * M * V = S` with `S` diagonal and `d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult<T: Scalar> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SnfResult<T> {
    /// Diagonal entries of `s`, including trailing zeros.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn smallest_nonzero_in_column<T: Scalar>(m: &Matrix<T>, col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for i in from..m.rows() {
        let v = m[(i, col)].abs();
        if v.is_zero() {
            continue;
        }
        // strict comparison keeps the lowest row on ties
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Row-style Hermite normal form.
///
/// Upper (echelon) shape, positive pivots, entries above each pivot reduced
/// into `[0, pivot)`. The working pivot is always the entry of smallest
/// absolute value in its column, ties broken by the lowest row index.
pub fn hnf<T: Scalar>(m: &Matrix<T>) -> HnfResult<T> {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = Matrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols() {
        if r == rows {
            break;
        }
        let mut found = false;
        while let Some(p) = smallest_nonzero_in_column(&h, col, r) {
            found = true;
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(r, col)]);
                h.add_row_multiple(i, r, &-q.clone());
                u.add_row_multiple(i, r, &-q);
                clean &= h[(i, col)].is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, col)].clone();
        for i in 0..r {
            let q = h[(i, col)].div_floor(&pivot);
            h.add_row_multiple(i, r, &-q.clone());
            u.add_row_multiple(i, r, &-q);
        }
        pivots.push(col);
        r += 1;
    }
    HnfResult { h, u, pivots }
}

/// Smith normal form by alternating row/column Euclid steps.
pub fn snf<T: Scalar>(m: &Matrix<T>) -> SnfResult<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize, T)> = None;
            for i in t..rows {
                for j in t..cols {
                    let a = s[(i, j)].abs();
                    if !a.is_zero() && best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                        best = Some((i, j, a));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return SnfResult { s, u, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &-q.clone());
                u.add_row_multiple(i, t, &-q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &-q.clone());
                v.add_col_multiple(j, t, &-q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !rem_nonneg(&s[(i, j)], &pivot).is_zero()));
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &T::one());
                    u.add_row_multiple(t, i, &T::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { s, u, v }
}
