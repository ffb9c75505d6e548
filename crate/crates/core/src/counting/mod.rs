//! Height-bounded counting: brute force, parametrized sweeps, exact block
//! boxes, Jordan strata, norm comparison, coverage audits and growth fits.
//!
//! Parallel sweeps split their domain into fixed sub-boxes and merge by sum
//! or set union, so every result is independent of the thread count. The
//! caller owns the rayon pool.

mod block_box;
mod brute;
mod coverage;
mod dedup;
mod fit;
mod norms;
mod param;

pub use block_box::{block_box_count, block_box_set};
pub use brute::{brute_force_count, brute_force_set, jordan_stratified_count, BruteOptions, BruteResult};
pub use coverage::{coverage_audit, CoverageOptions, CoverageReport};
pub use dedup::{encode, ShardedSet};
pub use fit::{fit_exponent, fit_points, GrowthFit};
pub use norms::{norm_comparison, NormComparison};
pub use param::{param_count_mixed, param_count_unipotent, param_image, ParamOptions, DEFAULT_K};

use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spec::SplitPolySpec;

/// Default loop budget before `--force` is needed.
pub const DEFAULT_WORK_LIMIT: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    ParamMixed,
    ParamUnipotent,
    BlockBox,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::ParamMixed => "param_mixed",
            Method::ParamUnipotent => "param_unipotent",
            Method::BlockBox => "block_box",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    /// `max |a_ij| <= H`
    Sup,
    /// `sum a_ij^2 <= H^2`
    Frobenius,
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::Sup => "sup",
            Norm::Frobenius => "frobenius",
        })
    }
}

/// Refuses sweeps whose predicted loop count exceeds `limit` unless forced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkGuard {
    pub limit: u128,
    pub force: bool,
}

impl Default for WorkGuard {
    fn default() -> Self {
        WorkGuard { limit: DEFAULT_WORK_LIMIT, force: false }
    }
}

impl WorkGuard {
    pub fn unlimited() -> Self {
        WorkGuard { limit: u128::MAX, force: true }
    }

    pub fn check(&self, estimated: &BigUint) -> Result<()> {
        if self.force || *estimated <= BigUint::from(self.limit) {
            Ok(())
        } else {
            Err(Error::WorkLimitExceeded { estimated: estimated.to_string(), limit: self.limit.to_string() })
        }
    }
}

fn as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn from_string<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        Text(String),
        Int(u64),
    }
    match Num::deserialize(d)? {
        Num::Text(t) => t.parse().map_err(serde::de::Error::custom),
        Num::Int(i) => Ok(BigUint::from(i)),
    }
}

/// One measured count `N(H)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub method: Method,
    pub spec: SplitPolySpec,
    pub poly: String,
    pub norm: Norm,
    #[serde(rename = "H")]
    pub height: u64,
    #[serde(serialize_with = "as_string", deserialize_with = "from_string")]
    pub count: BigUint,
    pub distinct: bool,
    pub wall_seconds: f64,
}

impl CountRecord {
    pub(crate) fn new(method: Method, spec: SplitPolySpec, norm: Norm, height: u64, count: BigUint, distinct: bool, start: Instant) -> Self {
        CountRecord {
            method,
            spec,
            poly: spec.to_string(),
            norm,
            height,
            count,
            distinct,
            wall_seconds: start.elapsed().as_secs_f64(),
        }
    }
}
