mod elim;
mod lattice;
mod matrix;
mod normal;
mod poly;
pub mod text;

pub use elim::{char_poly, det, rank};
pub use lattice::{
    canonical_basis, complete_basis, coordinates, extend_within, integer_kernel,
    inverse_unimodular, is_primitive, saturate, saturated_image,
};
pub use matrix::{mat_mul, Matrix};
pub use normal::{hnf, snf, HnfResult, SnfResult};
pub use poly::Poly;

/// `g * a * g^{-1}`; `g` must be unimodular.
pub fn conjugate<T: crate::Scalar>(g: &Matrix<T>, a: &Matrix<T>) -> crate::Result<Matrix<T>> {
    let g_inv = inverse_unimodular(g)?;
    Ok(&(g * a) * &g_inv)
}
