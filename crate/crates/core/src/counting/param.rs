//! Parametrized sweeps: images of `L(u,v,w) T(a,b,c) L^{-1}` (mixed) or
//! `L U(a,b,c) L^{-1}` (unipotent) over the height boxes, deduplicated.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use super::{CountRecord, Method, Norm, ShardedSet, WorkGuard};
use crate::conj3::{b_range, conj_lower_closed, conj_lower_unipotent, u_box, unipotent_u, LowerParams, TriParams};
use crate::error::{Error, Result};
use crate::linalg::{inverse_unimodular, Matrix};
use crate::scalar::Scalar;
use crate::spec::SplitPolySpec;

/// Default box constant `K`.
pub const DEFAULT_K: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamOptions {
    /// Box constant in `ceil(K H / (1 + |a| + |c|))`.
    pub k: i64,
    /// Mixed case only: use `|b| <= (|a| + H)/|w|` when `w != 0`.
    pub refined_b: bool,
    /// Also conjugate every generated matrix by `U(x,y,z)`, `|x|,|y|,|z| <= r`.
    pub compose_upper: i64,
    pub guard: WorkGuard,
}

impl Default for ParamOptions {
    fn default() -> Self {
        ParamOptions { k: DEFAULT_K, refined_b: true, compose_upper: 0, guard: WorkGuard::default() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Mixed,
    Unipotent,
}

fn family_of(spec: SplitPolySpec) -> Result<Family> {
    match (spec.a(), spec.b()) {
        (1, 2) => Ok(Family::Mixed),
        (3, 0) => Ok(Family::Unipotent),
        _ => Err(Error::InvalidInput(format!("parametrized sweeps exist for (x-1)^3 and (x-1)(x+1)^2 only, not {spec}"))),
    }
}

struct Sweep {
    family: Family,
    height: i64,
    opts: ParamOptions,
}

impl Sweep {
    fn b_bound(&self, a: i64, w: i64) -> i64 {
        match self.family {
            Family::Mixed if self.opts.refined_b => b_range(a, w, self.height),
            _ => self.height,
        }
    }

    fn estimated_work(&self) -> BigUint {
        let h = self.height;
        let r = 2 * self.opts.compose_upper as u64 + 1;
        let mut total = BigUint::default();
        for a in -h..=h {
            for c in -h..=h {
                let m = (2 * u_box(a, c, h, self.opts.k) + 1) as u64;
                total += BigUint::from(m).pow(3) * (2 * h as u64 + 1) * r.pow(3);
            }
        }
        total
    }

    /// Largest intermediate magnitude is about `(|b| + |c|) * m^3` plus lower
    /// terms; i64 is used when a generous bound fits.
    fn fits_i64(&self) -> bool {
        let h = self.height as i128 + 1;
        let m = u_box(0, 0, self.height, self.opts.k) as i128 + 1;
        let r = self.opts.compose_upper as i128 + 1;
        let bound = 64 * h * m * m * m * r * r * r;
        bound < i64::MAX as i128 / 64
    }

    fn generate<T: Scalar>(&self, t: &TriParams<T>, l: &LowerParams<T>) -> Matrix<T> {
        match self.family {
            Family::Mixed => conj_lower_closed(t, l),
            Family::Unipotent => conj_lower_unipotent(t, l),
        }
    }

    fn run<T: Scalar>(&self) -> ShardedSet {
        let h = self.height;
        let h_t = T::of(h);
        let r = self.opts.compose_upper;
        let uppers: Vec<(Matrix<T>, Matrix<T>)> = (-r..=r)
            .flat_map(|x| (-r..=r).flat_map(move |y| (-r..=r).map(move |z| (x, y, z))))
            .filter(|&(x, y, z)| (x, y, z) != (0, 0, 0))
            .map(|(x, y, z)| {
                let um = unipotent_u(&TriParams::new(T::of(x), T::of(y), T::of(z)));
                let inv = inverse_unimodular(&um).expect("unitriangular");
                (um, inv)
            })
            .collect();

        let outer: Vec<i64> = (-h..=h).collect();
        outer
            .par_iter()
            .map(|&a| {
                let mut set = ShardedSet::new(3);
                let mut insert = |m: &Matrix<T>| {
                    if m.sup_norm() <= h_t {
                        let e: Vec<i64> = m.entries().iter().map(|x| x.to_i64().expect("bounded by H")).collect();
                        set.insert(&e);
                    }
                };
                for c in -h..=h {
                    let mb = u_box(a, c, h, self.opts.k);
                    for u in -mb..=mb {
                        for v in -mb..=mb {
                            for w in -mb..=mb {
                                let l = LowerParams::new(T::of(u), T::of(v), T::of(w));
                                let bb = self.b_bound(a, w);
                                for b in -bb..=bb {
                                    let t = TriParams::new(T::of(a), T::of(b), T::of(c));
                                    let m = self.generate(&t, &l);
                                    insert(&m);
                                    for (um, inv) in &uppers {
                                        insert(&(&(um * &m) * inv));
                                    }
                                }
                            }
                        }
                    }
                }
                set
            })
            .reduce(|| ShardedSet::new(3), ShardedSet::merge)
    }
}

/// Distinct matrices of height `<= H` reached by the sweep for `spec`,
/// which must be `(x-1)^3` or `(x-1)(x+1)^2`.
pub fn param_image(spec: SplitPolySpec, height: u64, opts: ParamOptions) -> Result<ShardedSet> {
    if opts.k < 1 {
        return Err(Error::InvalidInput("box constant K must be at least 1".into()));
    }
    let sweep = Sweep { family: family_of(spec)?, height: height as i64, opts };
    opts.guard.check(&sweep.estimated_work())?;
    Ok(if sweep.fits_i64() { sweep.run::<i64>() } else { sweep.run::<BigInt>() })
}

fn param_count(spec: SplitPolySpec, method: Method, height: u64, opts: ParamOptions) -> Result<CountRecord> {
    let start = Instant::now();
    let set = param_image(spec, height, opts)?;
    Ok(CountRecord::new(method, spec, Norm::Sup, height, BigUint::from(set.len()), true, start))
}

/// Distinct image count of the mixed sweep for `(x+1)^2(x-1)`.
pub fn param_count_mixed(height: u64, opts: ParamOptions) -> Result<CountRecord> {
    param_count(SplitPolySpec::new(1, 2).expect("valid"), Method::ParamMixed, height, opts)
}

/// Distinct image count of the unipotent sweep for `(x-1)^3`.
pub fn param_count_unipotent(height: u64, opts: ParamOptions) -> Result<CountRecord> {
    param_count(SplitPolySpec::unipotent(3), Method::ParamUnipotent, height, opts)
}
