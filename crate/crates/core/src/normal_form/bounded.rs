//! Triangularization of unipotents along the saturated image flag of `N = A - I`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{canonical_basis, char_poly, det, extend_within, inverse_unimodular, saturated_image, Matrix, Poly};
use crate::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedConjugation {
    /// Unimodular, det 1.
    pub g: IntegerMatrix,
    /// `g A g^{-1}`, upper unitriangular.
    pub u: IntegerMatrix,
    pub g_sup: BigInt,
    pub u_sup: BigInt,
}

impl BoundedConjugation {
    /// `sup(U) / sup(A)`, the empirical height distortion.
    pub fn height_ratio(&self, a: &IntegerMatrix) -> f64 {
        ratio(&self.u_sup, &a.sup_norm())
    }
}

fn ratio(num: &BigInt, den: &BigInt) -> f64 {
    num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY)
}

fn check_unipotent(a: &IntegerMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("non-square matrix".into()));
    }
    let chi = char_poly(a);
    if chi != Poly::split(a.dim(), 0) {
        return Err(Error::NotUnipotent(chi.to_string()));
    }
    Ok(())
}

/// Conjugates a unipotent `A` to upper unitriangular form.
///
/// The new basis runs through the saturated images of `N^k`, deepest first:
/// `N` maps `sat(Im N^k)` into `sat(Im N^{k+1})`, so it becomes strictly upper
/// triangular. Each layer is extended inside the next with unimodular moves.
pub fn bounded_conjugator(a: &IntegerMatrix) -> Result<BoundedConjugation> {
    check_unipotent(a)?;
    let n = a.dim();
    if a.is_unitriangular() {
        let g = Matrix::identity(n);
        return Ok(BoundedConjugation { g_sup: BigInt::one(), u_sup: a.sup_norm(), g, u: a.clone() });
    }
    let nil = a.shift(&-BigInt::one());
    let mut layers = vec![Matrix::identity(n)];
    let mut power = nil.clone();
    while !power.is_zero() {
        layers.push(canonical_basis(&saturated_image(&power)));
        power = &power * &nil;
    }
    let mut basis: IntegerMatrix = layers.pop().expect("at least Z^n");
    while let Some(outer) = layers.pop() {
        basis = extend_within(&basis, &outer)?;
    }
    if det(&basis).is_negative() {
        // the last vector lives in the outermost layer only
        basis.negate_row(n - 1);
    }
    let cols = basis.transpose();
    let g = inverse_unimodular(&cols)?;
    let u = &(&g * a) * &cols;
    if !u.is_unitriangular() {
        return Err(Error::Internal("flag basis did not triangularize".into()));
    }
    Ok(BoundedConjugation { g_sup: g.sup_norm(), u_sup: u.sup_norm(), g, u })
}

/// Per-band maxima of the triangularized nilpotent part, divided by `H`.
#[derive(Clone, Debug, Serialize)]
pub struct BandAudit {
    pub height: u64,
    /// `(d, max_{j-i=d} |n_ij| / H)` for `d = 1..n-1`.
    pub bands: Vec<(usize, f64)>,
    pub max_ratio: f64,
    pub conjugator_sup: String,
}

pub fn band_bound_check(a: &IntegerMatrix, height: u64) -> Result<BandAudit> {
    check_unipotent(a)?;
    if height == 0 {
        return Err(Error::InvalidInput("height must be positive".into()));
    }
    let h = BigInt::from(height);
    if a.sup_norm() > h {
        return Err(Error::InvalidInput(format!("sup norm {} exceeds H = {height}", a.sup_norm())));
    }
    let conj = bounded_conjugator(a)?;
    let n = a.dim();
    let bands: Vec<(usize, f64)> = (1..n)
        .map(|d| {
            let m = (0..n - d).map(|i| conj.u[(i, i + d)].abs()).max().unwrap_or_default();
            (d, ratio(&m, &h))
        })
        .collect();
    let max_ratio = bands.iter().map(|&(_, r)| r).fold(0.0, f64::max);
    Ok(BandAudit { height, bands, max_ratio, conjugator_sup: conj.g_sup.to_string() })
}
