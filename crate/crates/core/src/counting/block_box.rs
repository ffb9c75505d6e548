use std::time::Instant;

use num_bigint::BigUint;

use super::{CountRecord, Method, Norm, ShardedSet};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, Matrix};
use crate::spec::{free_params, SplitPolySpec};

/// Upper block matrices `[[I_a + X, B], [0, -I_b + Y]]` with all free
/// entries in `[-H, H]`: exactly `(2H + 1)^{n(n-1)/2}` of them.
pub fn block_box_count(spec: SplitPolySpec, height: u64) -> CountRecord {
    let start = Instant::now();
    let count = BigUint::from(2 * height + 1).pow(free_params(spec.n()) as u32);
    CountRecord::new(Method::BlockBox, spec, Norm::Sup, height, count, true, start)
}

/// Explicit enumeration of the same box, each matrix checked to have the
/// right characteristic polynomial. Desk scale only (`n <= 3`, `H <= 3`).
pub fn block_box_set(spec: SplitPolySpec, height: u64) -> Result<ShardedSet> {
    let n = spec.n();
    if n > 3 || height > 3 {
        return Err(Error::InvalidInput("block box enumeration is limited to n <= 3 and H <= 3".into()));
    }
    let h = height as i64;
    let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let side = (2 * h + 1) as u64;
    let target = spec.coefficients();
    let mut set = ShardedSet::new(n);
    for mut idx in 0..side.pow(free.len() as u32) {
        let mut m = vec![0i64; n * n];
        for i in 0..n {
            m[i * n + i] = if i < spec.a() { 1 } else { -1 };
        }
        for &(i, j) in &free {
            m[i * n + j] = (idx % side) as i64 - h;
            idx /= side;
        }
        let mat = Matrix::new(n, n, m.clone())?;
        if char_poly(&mat).coeffs() != target.as_slice() {
            return Err(Error::Internal(format!("block matrix {mat:?} has the wrong characteristic polynomial")));
        }
        set.insert(&m);
    }
    Ok(set)
}
