use serde::Serialize;

use super::{brute_force_set, param_image, Norm, ParamOptions, WorkGuard, DEFAULT_K};
use crate::error::Result;
use crate::linalg::{char_poly, det, Matrix};
use crate::spec::SplitPolySpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverageOptions {
    pub k: i64,
    /// Radius of the optional upper-unipotent composition, 0 for none.
    pub compose_upper: i64,
    pub guard: WorkGuard,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions { k: DEFAULT_K, compose_upper: 0, guard: WorkGuard::default() }
    }
}

/// How much of the brute-force set a parametrized sweep reaches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub spec: SplitPolySpec,
    #[serde(rename = "H")]
    pub height: u64,
    #[serde(rename = "K")]
    pub k: i64,
    pub compose_upper: i64,
    pub brute_set_size: usize,
    pub image_set_size: usize,
    pub intersection_size: usize,
    /// Every image matrix has the right characteristic polynomial and lies
    /// in the brute-force set.
    pub soundness: bool,
    /// `intersection / brute`, or 1 when the brute set is empty.
    pub coverage_ratio: f64,
}

pub fn coverage_audit(spec: SplitPolySpec, height: u64, opts: CoverageOptions) -> Result<CoverageReport> {
    let brute = brute_force_set(spec, height, Norm::Sup, opts.guard)?;
    let popts = ParamOptions { k: opts.k, compose_upper: opts.compose_upper, guard: opts.guard, ..ParamOptions::default() };
    let image = param_image(spec, height, popts)?;

    let target = spec.coefficients();
    let n = spec.n();
    let mut valid = true;
    for m in image.sorted() {
        let mat = Matrix::new(n, n, m.into_iter().map(i128::from).collect())?;
        let chi: Vec<i64> = char_poly(&mat).coeffs().iter().map(|&c| c as i64).collect();
        if chi != target || det(&mat) != 1 {
            valid = false;
            break;
        }
    }
    let intersection_size = image.intersection_len(&brute);
    let soundness = valid && intersection_size == image.len();
    let coverage_ratio = if brute.is_empty() { 1.0 } else { intersection_size as f64 / brute.len() as f64 };
    Ok(CoverageReport {
        spec,
        height,
        k: opts.k,
        compose_upper: opts.compose_upper,
        brute_set_size: brute.len(),
        image_set_size: image.len(),
        intersection_size,
        soundness,
        coverage_ratio,
    })
}
