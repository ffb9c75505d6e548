use serde::Serialize;

use super::{brute_force_count, BruteOptions, CountRecord, Norm, WorkGuard};
use crate::error::Result;
use crate::spec::SplitPolySpec;

/// Brute-force counts under the sup norm and the Frobenius norm.
///
/// A Frobenius ball of radius `H` sits inside the sup box of radius `H`,
/// which sits inside the Frobenius ball of radius `nH`.
#[derive(Clone, Debug, Serialize)]
pub struct NormComparison {
    pub sup: CountRecord,
    pub frobenius: CountRecord,
    /// Frobenius count at radius `n H`.
    pub frobenius_outer: CountRecord,
    /// `N_frob(H) <= N_sup(H) <= N_frob(nH)`.
    pub sandwich: bool,
}

pub fn norm_comparison(spec: SplitPolySpec, height: u64, guard: WorkGuard) -> Result<NormComparison> {
    let count = |norm, h| {
        let opts = BruteOptions { norm, guard, ..BruteOptions::default() };
        brute_force_count(spec, h, opts).map(|r| r.record)
    };
    let sup = count(Norm::Sup, height)?;
    let frobenius = count(Norm::Frobenius, height)?;
    let frobenius_outer = count(Norm::Frobenius, height * spec.n() as u64)?;
    let sandwich = frobenius.count <= sup.count && sup.count <= frobenius_outer.count;
    Ok(NormComparison { sup, frobenius, frobenius_outer, sandwich })
}
