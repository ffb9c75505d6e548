//! Reduction of `A` with `χ_A = (x-1)^a (x+1)^b` to upper block form
//!
//! ```text
//! g A g^{-1} = [[I_a + X, B], [0, -I_b + Y]]
//! ```
//! with `X`, `Y` strictly upper triangular and `det g = 1`.

mod bounded;
mod jordan;
mod normalize;

pub use bounded::{band_bound_check, bounded_conjugator, BandAudit, BoundedConjugation};
pub use jordan::{jordan_type, jordan_type_unchecked, JordanType, Partition};
pub use normalize::normalize_jordan;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    char_poly, complete_basis, det, integer_kernel, inverse_unimodular, Matrix,
};
use crate::scalar::Scalar;
use crate::spec::SplitPolySpec;
use crate::IntegerMatrix;

/// Checks shape and characteristic polynomial against `spec`.
pub(crate) fn validate<T: Scalar>(a: &Matrix<T>, spec: SplitPolySpec) -> Result<()> {
    if !a.is_square() || a.dim() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a degree {} polynomial",
            a.rows(),
            a.cols(),
            spec.n()
        )));
    }
    let chi = char_poly(a);
    let expected = spec.poly::<T>();
    if chi != expected {
        return Err(Error::CharPolyMismatch { expected: expected.to_string(), found: chi.to_string() });
    }
    Ok(())
}

/// Saturated generalized eigenlattices of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimarySplit {
    /// Rows span `ker (A - I)^n ∩ Z^n`.
    pub plus: IntegerMatrix,
    /// Rows span `ker (A + I)^n ∩ Z^n`.
    pub minus: IntegerMatrix,
    /// `[Z^n : L+ ⊕ L-]`. Both lattices are primitive, but their sum is only
    /// of finite index in general (e.g. `T(0,0,1)` gives index 2).
    pub index: BigInt,
}

pub fn primary_split(a: &IntegerMatrix, spec: SplitPolySpec) -> Result<PrimarySplit> {
    validate(a, spec)?;
    let n = a.dim() as u32;
    let one = BigInt::one();
    let plus = integer_kernel(&a.shift(&-one.clone()).pow(n));
    let minus = integer_kernel(&a.shift(&one).pow(n));
    if plus.rows() != spec.a() {
        return Err(Error::RankError { expected: spec.a(), found: plus.rows() });
    }
    if minus.rows() != spec.b() {
        return Err(Error::RankError { expected: spec.b(), found: minus.rows() });
    }
    let stacked = Matrix::from_rows(plus.row_vecs().into_iter().chain(minus.row_vecs()).collect())?;
    let index = det(&stacked).abs();
    Ok(PrimarySplit { plus, minus, index })
}

/// Conjugator plus the blocks of the upper block form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockNormalForm {
    pub spec: SplitPolySpec,
    pub g: IntegerMatrix,
    pub x: IntegerMatrix,
    pub y: IntegerMatrix,
    pub b: IntegerMatrix,
}

impl BlockNormalForm {
    /// `[[I_a + X, B], [0, -I_b + Y]]`
    pub fn assemble(&self) -> IntegerMatrix {
        let one = BigInt::one();
        let (a, b) = (self.spec.a(), self.spec.b());
        Matrix::from_blocks(&self.x.shift(&one), &self.b, &Matrix::zeros(b, a), &self.y.shift(&-one))
            .expect("block shapes are fixed by spec")
    }

    /// Reads the blocks off a matrix already in upper block form.
    pub fn from_parts(spec: SplitPolySpec, g: IntegerMatrix, m: &IntegerMatrix) -> Result<Self> {
        let (a, b) = (spec.a(), spec.b());
        let one = BigInt::one();
        if !m.submatrix(a, 0, b, a).is_zero() {
            return Err(Error::Internal("lower-left block is not zero".into()));
        }
        let x = m.submatrix(0, 0, a, a).shift(&-one.clone());
        let y = m.submatrix(a, a, b, b).shift(&one);
        if !x.is_strictly_upper() || !y.is_strictly_upper() {
            return Err(Error::Internal("diagonal blocks are not triangular".into()));
        }
        Ok(BlockNormalForm { spec, g, x, y, b: m.submatrix(0, a, a, b) })
    }

    /// Every structural invariant, checked exactly against the original `A`.
    pub fn verify(&self, a: &IntegerMatrix) -> Result<()> {
        if !self.x.is_strictly_upper() || !self.y.is_strictly_upper() {
            return Err(Error::Internal("X or Y is not strictly upper triangular".into()));
        }
        if !det(&self.g).is_one() {
            return Err(Error::Internal("conjugator does not have determinant 1".into()));
        }
        let g_inv = inverse_unimodular(&self.g)?;
        if &(&self.g * a) * &g_inv != self.assemble() {
            return Err(Error::Internal("conjugation identity fails".into()));
        }
        validate(&self.assemble(), self.spec)
    }
}

fn block_diag(top: &IntegerMatrix, bottom: &IntegerMatrix) -> IntegerMatrix {
    Matrix::from_blocks(top, &Matrix::zeros(top.rows(), bottom.cols()), &Matrix::zeros(bottom.rows(), top.cols()), bottom)
        .expect("square blocks")
}

/// Unimodular `h` (det 1) making `h m h^{-1}` upper triangular with constant
/// diagonal `eigenvalue`. Peels off one primitive eigenvector at a time.
fn triangularize(m: &IntegerMatrix, eigenvalue: &BigInt) -> Result<IntegerMatrix> {
    let size = m.rows();
    if size <= 1 {
        return Ok(Matrix::identity(size));
    }
    let kernel = integer_kernel(&m.shift(&-eigenvalue.clone()));
    if kernel.rows() == 0 {
        return Err(Error::Internal("no eigenvector in a primary block".into()));
    }
    let basis = complete_basis(&kernel.submatrix(0, 0, 1, size))?;
    // columns of basis^T are the new coordinates
    let h1 = inverse_unimodular(&basis.transpose())?;
    let m1 = &(&h1 * m) * &basis.transpose();
    if !(1..size).all(|i| m1[(i, 0)].is_zero()) {
        return Err(Error::Internal("eigenvector did not split off".into()));
    }
    let rest = triangularize(&m1.submatrix(1, 1, size - 1, size - 1), eigenvalue)?;
    let h2 = block_diag(&Matrix::identity(1), &rest);
    Ok(&h2 * &h1)
}

/// Primary decomposition, basis completion and triangularization within the
/// two diagonal blocks.
pub fn block_reduce(a: &IntegerMatrix, spec: SplitPolySpec) -> Result<BlockNormalForm> {
    let split = primary_split(a, spec)?;
    let (na, nb) = (spec.a(), spec.b());
    let one = BigInt::one();

    let basis = complete_basis(&split.plus)
        .map_err(|e| Error::Internal(format!("basis completion failed: {e}")))?;
    let mut g = inverse_unimodular(&basis.transpose())?;
    let m = &(&g * a) * &basis.transpose();

    let h_plus = triangularize(&m.submatrix(0, 0, na, na), &one)?;
    let h_minus = triangularize(&m.submatrix(na, na, nb, nb), &-one)?;
    let h = block_diag(&h_plus, &h_minus);
    g = &h * &g;
    if det(&g).is_negative() {
        return Err(Error::Internal("conjugator has determinant -1".into()));
    }
    let m = &(&g * a) * &inverse_unimodular(&g)?;
    BlockNormalForm::from_parts(spec, g, &m)
}

/// Serializable view with decimal-string entries.
#[derive(Clone, Debug, Serialize)]
pub struct BlockNormalFormView {
    pub a: usize,
    pub b: usize,
    pub g: Vec<Vec<String>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<String>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b_block: Vec<Vec<String>>,
}

fn strings(m: &IntegerMatrix) -> Vec<Vec<String>> {
    m.row_vecs().into_iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

impl From<&BlockNormalForm> for BlockNormalFormView {
    fn from(f: &BlockNormalForm) -> Self {
        BlockNormalFormView {
            a: f.spec.a(),
            b: f.spec.b(),
            g: strings(&f.g),
            x: strings(&f.x),
            y: strings(&f.y),
            b_block: strings(&f.b),
        }
    }
}
