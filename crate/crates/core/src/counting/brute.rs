//! Exhaustive enumeration of `n x n` integer matrices with a prescribed
//! split characteristic polynomial under a height bound.
//!
//! Entries are fixed diagonal first, then in symmetric pairs
//! `(a_ij, a_ji)`. Two necessary conditions prune the search:
//! the trace must equal `a - b`, and the sum of principal 2x2 minors must
//! equal the `x^{n-2}` coefficient, which pins `sum_{i<j} a_ij a_ji` given
//! the diagonal. Survivors are checked against the full characteristic
//! polynomial.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{CountRecord, Method, Norm, ShardedSet, WorkGuard};
use crate::error::Result;
use crate::linalg::{char_poly, Matrix};
use crate::normal_form::{jordan_type_unchecked, JordanType};
use crate::spec::SplitPolySpec;

#[derive(Clone, Copy, Debug)]
pub struct BruteOptions {
    pub norm: Norm,
    pub stratify: bool,
    pub prune: bool,
    pub guard: WorkGuard,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions { norm: Norm::Sup, stratify: false, prune: true, guard: WorkGuard::default() }
    }
}

#[derive(Clone, Debug)]
pub struct BruteResult {
    pub record: CountRecord,
    /// Present when stratification was requested; every Jordan type of the
    /// spec is a key, possibly with count zero.
    pub strata: Option<BTreeMap<JordanType, u64>>,
}

struct Enumeration {
    n: usize,
    radius: i64,
    /// `H^2` for the Frobenius ball.
    frob_budget: Option<i64>,
    prune: bool,
    target: Vec<i64>,
    trace: i64,
    e2: i64,
    pairs: Vec<(usize, usize)>,
}

impl Enumeration {
    fn new(spec: SplitPolySpec, height: u64, norm: Norm, prune: bool) -> Self {
        let n = spec.n();
        let radius = height as i64;
        let target = spec.coefficients();
        let e2 = if n >= 2 { target[n - 2] } else { 0 };
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Enumeration {
            n,
            radius,
            frob_budget: (norm == Norm::Frobenius).then(|| radius * radius),
            prune,
            target,
            trace: spec.trace(),
            e2,
            pairs,
        }
    }

    fn estimated_work(&self) -> BigUint {
        BigUint::from((2 * self.radius + 1) as u64).pow((self.n * self.n) as u32)
    }

    /// Diagonals that pass the trace (and Frobenius) filter; one task each.
    fn diagonals(&self) -> Vec<Vec<i64>> {
        let side = 2 * self.radius + 1;
        let total = (side as u64).pow(self.n as u32);
        (0..total)
            .filter_map(|mut idx| {
                let d: Vec<i64> = (0..self.n)
                    .map(|_| {
                        let v = (idx % side as u64) as i64 - self.radius;
                        idx /= side as u64;
                        v
                    })
                    .collect();
                let sq: i64 = d.iter().map(|x| x * x).sum();
                let frob_ok = self.frob_budget.is_none_or(|b| sq <= b);
                let trace_ok = !self.prune || d.iter().sum::<i64>() == self.trace;
                (frob_ok && trace_ok).then_some(d)
            })
            .collect()
    }

    fn run_task(&self, diag: &[i64], visit: &mut dyn FnMut(&[i64])) {
        let n = self.n;
        let mut m = vec![0i64; n * n];
        for (i, d) in diag.iter().enumerate() {
            m[i * n + i] = *d;
        }
        let diag_e2: i64 = self.pairs.iter().map(|&(i, j)| diag[i] * diag[j]).sum();
        let needed = diag_e2 - self.e2;
        let used: i64 = diag.iter().map(|x| x * x).sum();
        self.dfs(0, &mut m, 0, needed, used, visit);
    }

    fn dfs(&self, p: usize, m: &mut [i64], acc: i64, needed: i64, used: i64, visit: &mut dyn FnMut(&[i64])) {
        let n = self.n;
        if p == self.pairs.len() {
            if self.prune && acc != needed {
                return;
            }
            let mat = Matrix::new(n, n, m.to_vec()).expect("n x n");
            if char_poly(&mat).coeffs() == self.target.as_slice() {
                visit(m);
            }
            return;
        }
        let (i, j) = self.pairs[p];
        let remaining = (self.pairs.len() - p - 1) as i64;
        let r = self.radius;
        for x in -r..=r {
            let used_x = used + x * x;
            if self.frob_budget.is_some_and(|b| used_x > b) {
                continue;
            }
            for y in -r..=r {
                let used_xy = used_x + y * y;
                if self.frob_budget.is_some_and(|b| used_xy > b) {
                    continue;
                }
                let acc2 = acc + x * y;
                if self.prune && (needed - acc2).abs() > remaining * r * r {
                    continue;
                }
                m[i * n + j] = x;
                m[j * n + i] = y;
                self.dfs(p + 1, m, acc2, needed, used_xy, visit);
            }
        }
        m[i * n + j] = 0;
        m[j * n + i] = 0;
    }

    fn fold<A: Send>(
        &self,
        identity: impl Fn() -> A + Sync + Send,
        visit: impl Fn(&mut A, &[i64]) + Sync + Send,
        merge: impl Fn(A, A) -> A + Sync + Send,
    ) -> A {
        self.diagonals()
            .par_iter()
            .map(|d| {
                let mut acc = identity();
                self.run_task(d, &mut |m| visit(&mut acc, m));
                acc
            })
            .reduce(&identity, &merge)
    }
}

pub fn brute_force_count(spec: SplitPolySpec, height: u64, opts: BruteOptions) -> Result<BruteResult> {
    let start = Instant::now();
    let en = Enumeration::new(spec, height, opts.norm, opts.prune);
    opts.guard.check(&en.estimated_work())?;

    let (count, strata) = if opts.stratify {
        let empty = || {
            JordanType::all(spec).into_iter().map(|jt| (jt, 0u64)).collect::<BTreeMap<_, _>>()
        };
        let strata = en.fold(
            empty,
            |acc, m| {
                let mat = Matrix::new(spec.n(), spec.n(), m.iter().map(|&x| x as i128).collect())
                    .expect("n x n");
                *acc.entry(jordan_type_unchecked(&mat, spec)).or_default() += 1;
            },
            |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            },
        );
        (strata.values().sum(), Some(strata))
    } else {
        (en.fold(|| 0u64, |acc, _| *acc += 1, |a, b| a + b), None)
    };
    let record = CountRecord::new(Method::Brute, spec, opts.norm, height, BigUint::from(count), true, start);
    Ok(BruteResult { record, strata })
}

/// The full solution set, for set-level comparisons.
pub fn brute_force_set(spec: SplitPolySpec, height: u64, norm: Norm, guard: WorkGuard) -> Result<ShardedSet> {
    let en = Enumeration::new(spec, height, norm, true);
    guard.check(&en.estimated_work())?;
    let n = spec.n();
    Ok(en.fold(
        || ShardedSet::new(n),
        |set, m| {
            set.insert(m);
        },
        ShardedSet::merge,
    ))
}

/// Brute-force counts split by Jordan type; sums to the total.
pub fn jordan_stratified_count(spec: SplitPolySpec, height: u64, guard: WorkGuard) -> Result<BTreeMap<JordanType, u64>> {
    let opts = BruteOptions { stratify: true, guard, ..BruteOptions::default() };
    Ok(brute_force_count(spec, height, opts)?.strata.expect("stratified"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruning_does_not_change_counts() {
        for (a, b, h) in [(2, 0, 1), (2, 0, 2), (0, 2, 2), (3, 0, 1), (1, 2, 1)] {
            let spec = SplitPolySpec::new(a, b).unwrap();
            let pruned = brute_force_count(spec, h, BruteOptions::default()).unwrap();
            let plain = brute_force_count(spec, h, BruteOptions { prune: false, ..BruteOptions::default() }).unwrap();
            assert_eq!(pruned.record.count, plain.record.count, "{spec} H={h}");
        }
    }

    #[test]
    fn work_guard_refuses_large_boxes() {
        let spec = SplitPolySpec::unipotent(4);
        let err = brute_force_count(spec, 5, BruteOptions::default()).unwrap_err();
        assert!(matches!(err, crate::Error::WorkLimitExceeded { .. }));
    }
}
