//! Residue counts modulo prime powers for the local density factor.
//!
//! `raw(p, k)` counts `A mod p^k` with `det A = 1` and characteristic
//! polynomial congruent to `(x-1)^a (x+1)^b`. The normalized value divides
//! by `p^{k n(n-1)/2}`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::counting::WorkGuard;
use crate::error::{Error, Result};
use crate::linalg::{char_poly, det, Matrix};
use crate::spec::SplitPolySpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCount {
    pub n: usize,
    pub spec: SplitPolySpec,
    pub p: u64,
    pub k: u32,
    pub raw: BigUint,
    pub normalized: BigRational,
}

impl Serialize for ResidueCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            n: usize,
            a: usize,
            b: usize,
            p: u64,
            k: u32,
            raw: String,
            normalized_num: String,
            normalized_den: String,
        }
        View {
            n: self.n,
            a: self.spec.a(),
            b: self.spec.b(),
            p: self.p,
            k: self.k,
            raw: self.raw.to_string(),
            normalized_num: self.normalized.numer().to_string(),
            normalized_den: self.normalized.denom().to_string(),
        }
        .serialize(s)
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_inputs(n: usize, spec: SplitPolySpec, p: u64, k: u32, guard: WorkGuard) -> Result<u64> {
    if spec.n() != n {
        return Err(Error::DimensionMismatch(format!("n = {n} but {spec} has degree {}", spec.n())));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= 1 << 20)
        .ok_or_else(|| Error::WorkLimitExceeded { estimated: format!("{p}^({k}*{})", n * n), limit: guard.limit.to_string() })?;
    guard.check(&BigUint::from(q).pow((n * n) as u32))?;
    Ok(q)
}

/// Calls `visit` on every solution modulo `q`, entries in `[0, q)`, row-major.
///
/// The last diagonal entry is forced by the trace, so only `q^{n^2 - 1}`
/// candidates are tested. The split is over the first entry's value and
/// the rest of the matrix, which keeps the result independent of the pool.
fn solutions<A: Send>(
    n: usize,
    spec: SplitPolySpec,
    q: u64,
    identity: impl Fn() -> A + Sync + Send,
    visit: impl Fn(&mut A, &[i64]) + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> A {
    let qi = q as i64;
    let target: Vec<i64> = spec.coefficients().iter().map(|c| c.rem_euclid(qi)).collect();
    let trace = spec.trace().rem_euclid(qi);
    let free: Vec<usize> = (0..n * n).filter(|&i| i != n * n - 1).collect();
    let total = q.pow(free.len() as u32);
    let chunk = total.div_ceil(q.pow(free.len().min(2) as u32)).max(1);
    let tasks = total.div_ceil(chunk);
    (0..tasks)
        .into_par_iter()
        .map(|t| {
            let mut acc = identity();
            let mut m = vec![0i64; n * n];
            for mut idx in t * chunk..((t + 1) * chunk).min(total) {
                for &pos in &free {
                    m[pos] = (idx % q) as i64;
                    idx /= q;
                }
                let partial: i64 = (0..n - 1).map(|i| m[i * n + i]).sum();
                m[n * n - 1] = (trace - partial).rem_euclid(qi);
                let mat = Matrix::new(n, n, m.iter().map(|&x| i128::from(x)).collect()).expect("n x n");
                let chi = char_poly(&mat);
                let ok = chi.coeffs().iter().zip(&target).all(|(&c, &t)| c.rem_euclid(i128::from(qi)) == i128::from(t));
                if ok && det(&mat).rem_euclid(i128::from(qi)) == 1 % i128::from(qi) {
                    visit(&mut acc, &m);
                }
            }
            acc
        })
        .reduce(&identity, &merge)
}

/// Exhaustive residue count modulo `p^k`.
pub fn residue_count(n: usize, spec: SplitPolySpec, p: u64, k: u32, guard: WorkGuard) -> Result<ResidueCount> {
    let q = check_inputs(n, spec, p, k, guard)?;
    let raw = solutions(n, spec, q, || 0u64, |acc, _| *acc += 1, |a, b| a + b);
    let scale = BigInt::from(p).pow(k * (n * (n - 1) / 2) as u32);
    Ok(ResidueCount {
        n,
        spec,
        p,
        k,
        raw: BigUint::from(raw),
        normalized: BigRational::new(BigInt::from(raw), scale),
    })
}

/// One row of a density table.
#[derive(Clone, Debug, Serialize)]
pub struct KappaRow {
    #[serde(flatten)]
    pub count: ResidueCount,
    /// `|normalized(k) - normalized(k-1)|` as `num/den`, absent at the first `k`.
    pub delta: Option<String>,
    /// Set for `p = 2`, where extra congruence conditions are expected.
    pub p2_caveat: bool,
}

/// Residue counts for each prime and `k = 1..=k_max`, with stability deltas.
pub fn kappa_table(n: usize, spec: SplitPolySpec, primes: &[u64], k_max: u32, guard: WorkGuard) -> Result<Vec<KappaRow>> {
    let mut rows = Vec::new();
    for &p in primes {
        let mut prev: Option<BigRational> = None;
        for k in 1..=k_max {
            let count = residue_count(n, spec, p, k, guard)?;
            let delta = prev.as_ref().map(|d| {
                let diff = &count.normalized - d;
                let abs = if diff < BigRational::from_integer(0.into()) { -diff } else { diff };
                format!("{}/{}", abs.numer(), abs.denom())
            });
            prev = Some(count.normalized.clone());
            rows.push(KappaRow { count, delta, p2_caveat: p == 2 });
        }
    }
    Ok(rows)
}

/// Result of reducing the solutions mod `p^k` to `p^{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub p: u64,
    pub k: u32,
    pub solutions: usize,
    pub base_solutions: usize,
    pub image_size: usize,
    /// Image lies inside the base solution set.
    pub consistent: bool,
    /// Image equals the base solution set.
    pub surjective: bool,
}

/// Compares the reduction of the level-`k` solutions with the level-`k-1`
/// solutions. Requires `k >= 2`.
pub fn reduction_check(n: usize, spec: SplitPolySpec, p: u64, k: u32, guard: WorkGuard) -> Result<ReductionCheck> {
    if k < 2 {
        return Err(Error::InvalidInput("reduction needs k >= 2".into()));
    }
    let q = check_inputs(n, spec, p, k, guard)?;
    let q0 = (q / p) as i64;
    let collect = |modulus: u64, reduce: i64| {
        solutions(
            n,
            spec,
            modulus,
            HashSet::new,
            |set: &mut HashSet<Vec<i64>>, m| {
                set.insert(m.iter().map(|x| x.rem_euclid(reduce)).collect());
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )
    };
    let fine_count = solutions(n, spec, q, || 0usize, |acc, _| *acc += 1, |a, b| a + b);
    let image = collect(q, q0);
    let base = collect(q / p, q0);
    Ok(ReductionCheck {
        p,
        k,
        solutions: fine_count,
        base_solutions: base.len(),
        image_size: image.len(),
        consistent: image.is_subset(&base),
        surjective: image == base,
    })
}
