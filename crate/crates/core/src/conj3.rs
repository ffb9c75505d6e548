//! Closed-form 3x3 conjugation formulas and the height boxes used by the
//! parametrized sweeps.
//!
//! ```text
//! T(a,b,c) = [[-1, a, b], [0, -1, c], [0, 0, 1]]   (mixed)
//! U(a,b,c) = [[ 1, a, b], [0,  1, c], [0, 0, 1]]   (unipotent)
//! L(u,v,w) = [[ 1, 0, 0], [u,  1, 0], [v, w, 1]]
//! ```

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{inverse_unimodular, Matrix};
use crate::random::stream_rng;
use crate::scalar::Scalar;

/// Upper triangular parameters `(a, b, c)` of `T` or `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TriParams<T = i64> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// Lower unipotent parameters `(u, v, w) = (u21, u31, u32)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LowerParams<T = i64> {
    pub u: T,
    pub v: T,
    pub w: T,
}

impl<T> TriParams<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        TriParams { a, b, c }
    }
}

impl<T> LowerParams<T> {
    pub fn new(u: T, v: T, w: T) -> Self {
        LowerParams { u, v, w }
    }
}

fn upper3<T: Scalar>(d: [i64; 3], p: &TriParams<T>) -> Matrix<T> {
    let z = T::zero;
    Matrix::from_rows(vec![
        vec![T::of(d[0]), p.a.clone(), p.b.clone()],
        vec![z(), T::of(d[1]), p.c.clone()],
        vec![z(), z(), T::of(d[2])],
    ])
    .expect("3x3")
}

/// `T(a, b, c)`, diagonal `(-1, -1, 1)`.
pub fn mixed_t<T: Scalar>(p: &TriParams<T>) -> Matrix<T> {
    upper3([-1, -1, 1], p)
}

/// `U(a, b, c)`, upper unitriangular.
pub fn unipotent_u<T: Scalar>(p: &TriParams<T>) -> Matrix<T> {
    upper3([1, 1, 1], p)
}

pub fn lower_l<T: Scalar>(l: &LowerParams<T>) -> Matrix<T> {
    let (z, o) = (T::zero, T::one);
    Matrix::from_rows(vec![
        vec![o(), z(), z()],
        vec![l.u.clone(), o(), z()],
        vec![l.v.clone(), l.w.clone(), o()],
    ])
    .expect("3x3")
}

/// `U(x,y,z) T(a,b,c) U(x,y,z)^{-1} = T(a, b + cx - az + 2y, c + 2z)`.
pub fn conj_upper_closed<T: Scalar>(t: &TriParams<T>, x: &T, y: &T, z: &T) -> TriParams<T> {
    let two = T::of(2);
    TriParams {
        a: t.a.clone(),
        b: t.b.clone() + t.c.clone() * x.clone() - t.a.clone() * z.clone() + two.clone() * y.clone(),
        c: t.c.clone() + two * z.clone(),
    }
}

/// Same action on `U(a,b,c)`: `U(a, b + cx - az, c)`.
pub fn conj_upper_unipotent<T: Scalar>(t: &TriParams<T>, x: &T, _y: &T, z: &T) -> TriParams<T> {
    TriParams {
        a: t.a.clone(),
        b: t.b.clone() + t.c.clone() * x.clone() - t.a.clone() * z.clone(),
        c: t.c.clone(),
    }
}

/// `L(u,v,w) T(a,b,c) L(u,v,w)^{-1}` entry by entry:
///
/// ```text
/// B11 = -1 - a u + b(u w - v)       B12 = a - b w              B13 = b
/// B21 = -a u^2 + (b u + c)(u w - v) B22 = -1 + a u - w(b u + c) B23 = b u + c
/// B31 = -a u v + u w - v + (u w - v)(b v + c w + 1)
/// B32 = a v - w(b v + c w + 2)      B33 = 1 + b v + c w
/// ```
pub fn conj_lower_closed<T: Scalar>(t: &TriParams<T>, l: &LowerParams<T>) -> Matrix<T> {
    let (a, b, c) = (t.a.clone(), t.b.clone(), t.c.clone());
    let (u, v, w) = (l.u.clone(), l.v.clone(), l.w.clone());
    let (one, two) = (T::one(), T::of(2));
    let uw_v = u.clone() * w.clone() - v.clone();
    let bu_c = b.clone() * u.clone() + c.clone();
    let bv_cw = b.clone() * v.clone() + c.clone() * w.clone();

    let b11 = -one.clone() - a.clone() * u.clone() + b.clone() * uw_v.clone();
    let b12 = a.clone() - b.clone() * w.clone();
    let b13 = b;
    let b21 = -(a.clone() * u.clone() * u.clone()) + bu_c.clone() * uw_v.clone();
    let b22 = -one.clone() + a.clone() * u.clone() - w.clone() * bu_c.clone();
    let b23 = bu_c;
    let b31 = -(a.clone() * u.clone() * v.clone()) + uw_v.clone() + uw_v * (bv_cw.clone() + one.clone());
    let b32 = a * v - w * (bv_cw.clone() + two);
    let b33 = one + bv_cw;
    Matrix::new(3, 3, vec![b11, b12, b13, b21, b22, b23, b31, b32, b33]).expect("3x3")
}

/// `L(u,v,w) U(a,b,c) L(u,v,w)^{-1}`:
///
/// ```text
/// B11 = 1 - a u + b(u w - v)        B12 = a - b w              B13 = b
/// B21 = -a u^2 + (b u + c)(u w - v) B22 = 1 + a u - w(b u + c)  B23 = b u + c
/// B31 = -a u v + (u w - v)(b v + c w)
/// B32 = a v - w(b v + c w)          B33 = 1 + b v + c w
/// ```
pub fn conj_lower_unipotent<T: Scalar>(t: &TriParams<T>, l: &LowerParams<T>) -> Matrix<T> {
    let (a, b, c) = (t.a.clone(), t.b.clone(), t.c.clone());
    let (u, v, w) = (l.u.clone(), l.v.clone(), l.w.clone());
    let one = T::one();
    let uw_v = u.clone() * w.clone() - v.clone();
    let bu_c = b.clone() * u.clone() + c.clone();
    let bv_cw = b.clone() * v.clone() + c.clone() * w.clone();

    let b11 = one.clone() - a.clone() * u.clone() + b.clone() * uw_v.clone();
    let b12 = a.clone() - b.clone() * w.clone();
    let b13 = b;
    let b21 = -(a.clone() * u.clone() * u.clone()) + bu_c.clone() * uw_v.clone();
    let b22 = one.clone() + a.clone() * u.clone() - w.clone() * bu_c.clone();
    let b23 = bu_c;
    let b31 = -(a.clone() * u * v.clone()) + uw_v * bv_cw.clone();
    let b32 = a * v - w * bv_cw.clone();
    let b33 = one + bv_cw;
    Matrix::new(3, 3, vec![b11, b12, b13, b21, b22, b23, b31, b32, b33]).expect("3x3")
}

/// Symmetric range `[-m, m]` for each of `u, v, w`, with
/// `m = ceil(K H / (1 + |a| + |c|))`.
pub fn u_box(a: i64, c: i64, height: i64, k: i64) -> i64 {
    let num = k * height;
    let den = 1 + a.abs() + c.abs();
    (num + den - 1) / den
}

/// Admissible `|b|` bound: `H` when `w = 0`, otherwise
/// `min(H, floor((|a| + H) / |w|))` from `|a - b w| <= H`.
pub fn b_range(a: i64, w: i64, height: i64) -> i64 {
    if w == 0 {
        height
    } else {
        ((a.abs() + height) / w.abs()).min(height)
    }
}

/// Outcome of comparing the closed forms with direct multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub exhaustive_box: i64,
    pub exhaustive_cases: u64,
    pub trials: u64,
    pub range: i64,
    pub seed: u64,
    pub mismatches: u64,
    pub max_entry: String,
}

/// Compares every closed form with `g M g^{-1}` computed by exact
/// multiplication for one sextuple; returns the largest entry seen, or
/// `None` on a mismatch.
pub fn check_sextuple(s: [i64; 6]) -> Option<BigInt> {
    let t = TriParams::new(BigInt::from(s[0]), BigInt::from(s[1]), BigInt::from(s[2]));
    let l = LowerParams::new(BigInt::from(s[3]), BigInt::from(s[4]), BigInt::from(s[5]));
    let lm = lower_l(&l);
    let l_inv = inverse_unimodular(&lm).expect("unitriangular");

    let direct_mixed = &(&lm * &mixed_t(&t)) * &l_inv;
    let direct_uni = &(&lm * &unipotent_u(&t)) * &l_inv;
    let closed_mixed = conj_lower_closed(&t, &l);
    let closed_uni = conj_lower_unipotent(&t, &l);

    // upper action, reusing (u, v, w) as (x, y, z)
    let um = unipotent_u(&TriParams::new(l.u.clone(), l.v.clone(), l.w.clone()));
    let um_inv = inverse_unimodular(&um).expect("unitriangular");
    let direct_up = &(&um * &mixed_t(&t)) * &um_inv;
    let closed_up = mixed_t(&conj_upper_closed(&t, &l.u, &l.v, &l.w));
    let direct_up_uni = &(&um * &unipotent_u(&t)) * &um_inv;
    let closed_up_uni = unipotent_u(&conj_upper_unipotent(&t, &l.u, &l.v, &l.w));

    let ok = direct_mixed == closed_mixed
        && direct_uni == closed_uni
        && direct_up == closed_up
        && direct_up_uni == closed_up_uni;
    ok.then(|| {
        [closed_mixed, closed_uni, closed_up, closed_up_uni]
            .iter()
            .map(Matrix::sup_norm)
            .max()
            .unwrap_or_default()
    })
}

const CHUNK: u64 = 4096;

/// Exhaustive check over `[-box_radius, box_radius]^6` followed by `trials`
/// seeded random sextuples in `[-range, range]^6`.
///
/// Random trials are cut into fixed chunks, each with its own stream of the
/// seeded generator, so the result does not depend on the thread count.
pub fn verify_conjugation_formulas(box_radius: i64, trials: u64, range: i64, seed: u64) -> VerifyReport {
    let side = (2 * box_radius + 1) as u64;
    let exhaustive_cases = side.pow(6);
    let fold = |acc: (u64, BigInt), r: Option<BigInt>| match r {
        Some(m) => (acc.0, acc.1.max(m)),
        None => (acc.0 + 1, acc.1),
    };
    let merge = |x: (u64, BigInt), y: (u64, BigInt)| (x.0 + y.0, x.1.max(y.1));
    let zero = || (0u64, BigInt::default());

    let exhaustive = (0..exhaustive_cases)
        .into_par_iter()
        .map(|mut idx| {
            let mut s = [0i64; 6];
            for slot in s.iter_mut() {
                *slot = (idx % side) as i64 - box_radius;
                idx /= side;
            }
            check_sextuple(s)
        })
        .fold(zero, fold)
        .reduce(zero, merge);

    let chunks = trials.div_ceil(CHUNK);
    let random = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk);
            let len = CHUNK.min(trials - chunk * CHUNK);
            (0..len)
                .map(|_| check_sextuple(std::array::from_fn(|_| rng.random_range(-range..=range))))
                .fold(zero(), fold)
        })
        .reduce(zero, merge);

    let (mismatches, max_entry) = merge(exhaustive, random);
    VerifyReport {
        exhaustive_box: box_radius,
        exhaustive_cases,
        trials,
        range,
        seed,
        mismatches,
        max_entry: max_entry.to_string(),
    }
}
