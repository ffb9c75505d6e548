//! Exact counting and normal forms for integer matrices of determinant one
//! whose characteristic polynomial is `(x-1)^a (x+1)^b`.
//!
//! The linear algebra is generic over [`Scalar`] (`i64`, `i128`, [`BigInt`]);
//! the aliases below fix the common choices.
//!
//! ```
//! use splitcount::{block_reduce, IntegerMatrix, SplitPolySpec};
//!
//! let a = IntegerMatrix::from_i64_rows(&[vec![3, -4], vec![1, -1]]);
//! let form = block_reduce(&a, SplitPolySpec::unipotent(2)).unwrap();
//! assert!(form.verify(&a).is_ok());
//! ```

pub mod conj3;
pub mod counting;
pub mod density;
mod error;
pub mod linalg;
pub mod normal_form;
pub mod random;
mod scalar;
mod spec;

use num_bigint::BigInt;

pub use error::{Error, Result};
pub use linalg::{Matrix, Poly};
pub use normal_form::{block_reduce, jordan_type, normalize_jordan, primary_split, BlockNormalForm, JordanType, Partition};
pub use scalar::Scalar;
pub use spec::{free_params, SplitPolySpec};

/// Arbitrary-precision integer matrix.
pub type IntegerMatrix = Matrix<BigInt>;
/// Machine-word matrix for enumeration loops.
pub type Matrix64 = Matrix<i64>;
/// Arbitrary-precision integer polynomial.
pub type IntegerPoly = Poly<BigInt>;
