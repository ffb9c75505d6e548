//! Integer kernels, saturation and basis completion.
//!
//! Lattice bases are matrices whose rows are the basis vectors.

use crate::error::{Error, Result};
use crate::linalg::{det, hnf, rank, Matrix};
use crate::scalar::Scalar;

/// Canonical basis of the row lattice: the nonzero rows of its HNF.
pub fn canonical_basis<T: Scalar>(basis: &Matrix<T>) -> Matrix<T> {
    let res = hnf(basis);
    res.h.submatrix(0, 0, res.rank(), basis.cols())
}

/// Saturated basis of `{v in Z^k : M v = 0}`, returned as rows in HNF.
pub fn integer_kernel<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let k = m.cols();
    let res = hnf(&m.transpose());
    let r = res.rank();
    // u * M^T = h, and the rows of h past the rank vanish
    let kernel = res.u.submatrix(r, 0, k - r, k);
    canonical_basis(&kernel)
}

/// `span_Q(L) ∩ Z^n` for linearly independent rows `L`.
pub fn saturate<T: Scalar>(l: &Matrix<T>) -> Result<Matrix<T>> {
    if rank(l) != l.rows() {
        return Err(Error::DependentVectors);
    }
    let orth = integer_kernel(l);
    Ok(integer_kernel(&orth))
}

/// Saturation of the column space of `m`.
pub fn saturated_image<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    // Im(M)^perp = ker(M^T); the saturation is the annihilator of that
    let orth = integer_kernel(&m.transpose());
    integer_kernel(&orth)
}

/// True when the row lattice is primitive (all Smith invariants equal to 1).
pub fn is_primitive<T: Scalar>(basis: &Matrix<T>) -> bool {
    let res = hnf(&basis.transpose());
    let s = basis.rows();
    res.rank() == s && (0..s).all(|i| res.h[(i, i)].is_one())
}

/// Inverse of a matrix with determinant ±1.
pub fn inverse_unimodular<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let res = hnf(m);
    if res.h != Matrix::identity(m.dim()) {
        return Err(Error::InvalidInput("matrix is not unimodular".into()));
    }
    Ok(res.u)
}

/// Square unimodular matrix whose first rows are `basis`.
///
/// `basis` must be primitive. When rows are added, the last one is negated if
/// needed so that the determinant is `+1`.
pub fn complete_basis<T: Scalar>(basis: &Matrix<T>) -> Result<Matrix<T>> {
    let (s, n) = (basis.rows(), basis.cols());
    if s > n {
        return Err(Error::DimensionMismatch(format!("{s} vectors in Z^{n}")));
    }
    // U * B^T = [I_s; 0] exactly when B is primitive, so B^T = U^{-1}[I_s; 0]
    let res = hnf(&basis.transpose());
    let expected = Matrix::from_fn(n, s, |i, j| if i == j { T::one() } else { T::zero() });
    if res.h != expected {
        return Err(Error::InvalidInput("basis does not span a primitive sublattice".into()));
    }
    let mut full = inverse_unimodular(&res.u)?.transpose();
    debug_assert!(full.submatrix(0, 0, s, n) == *basis);
    if s < n && det(&full).is_negative() {
        full.negate_row(n - 1);
    }
    Ok(full)
}

/// Coordinates of `w` in the primitive basis `basis`, if `w` lies in its span.
pub fn coordinates<T: Scalar>(basis: &Matrix<T>, w: &[T]) -> Option<Vec<T>> {
    let (r, n) = (basis.rows(), basis.cols());
    let res = hnf(&basis.transpose());
    let col = Matrix::new(n, 1, w.to_vec()).ok()?;
    let c = &res.u * &col;
    if (r..n).any(|i| !c[(i, 0)].is_zero()) {
        return None;
    }
    let coords: Vec<T> = (0..r).map(|i| c[(i, 0)].clone()).collect();
    // res.h must be [I_r; 0] for the coordinates to be integral solutions
    let back = (0..n)
        .map(|j| (0..r).fold(T::zero(), |acc, i| acc + coords[i].clone() * basis[(i, j)].clone()))
        .collect::<Vec<_>>();
    (back == w).then_some(coords)
}

/// Extend the rows of `inner` to a basis of the primitive lattice `outer`.
///
/// The result has `outer.rows()` rows, the first of which are `inner`.
pub fn extend_within<T: Scalar>(inner: &Matrix<T>, outer: &Matrix<T>) -> Result<Matrix<T>> {
    let mut coords = Vec::with_capacity(inner.rows() * outer.rows());
    for i in 0..inner.rows() {
        let c = coordinates(outer, inner.row(i))
            .ok_or_else(|| Error::Internal("inner lattice is not contained in outer".into()))?;
        coords.extend(c);
    }
    let c = Matrix::new(inner.rows(), outer.rows(), coords)?;
    let full = complete_basis(&c)?;
    let out = &full * outer;
    debug_assert!(out.submatrix(0, 0, inner.rows(), inner.cols()) == *inner);
    Ok(out)
}
