use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::CountRecord;
use crate::error::{Error, Result};

/// Least-squares line through `(ln H, ln count)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    /// `(H, count)` with the count as a decimal string.
    pub points: Vec<(u64, String)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
}

/// Natural log of an arbitrarily large positive integer.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Fits raw `(x, y)` points on a log-log scale.
pub fn fit_points(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    Ok(least_squares(&logs))
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    (slope, intercept, (rss / k).sqrt())
}

/// Growth exponent of `count` against `H`.
///
/// Records must share method, polynomial and norm, have at least three
/// distinct heights and positive counts. They are sorted by height first.
pub fn fit_exponent(records: &[CountRecord]) -> Result<GrowthFit> {
    let Some(first) = records.first() else {
        return Err(Error::InsufficientPoints(0));
    };
    if records.iter().any(|r| r.method != first.method || r.spec != first.spec || r.norm != first.norm) {
        return Err(Error::InvalidInput("records mix methods, polynomials or norms".into()));
    }
    let mut sorted: Vec<&CountRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.height);
    sorted.dedup_by_key(|r| r.height);
    if sorted.len() != records.len() {
        return Err(Error::InvalidInput("heights must be distinct".into()));
    }
    if sorted.len() < 3 {
        return Err(Error::InsufficientPoints(sorted.len()));
    }
    if sorted.iter().any(|r| r.height == 0 || r.count.is_zero()) {
        return Err(Error::InvalidInput("log-log fit needs positive heights and counts".into()));
    }
    let logs: Vec<(f64, f64)> = sorted.iter().map(|r| ((r.height as f64).ln(), ln_big(&r.count))).collect();
    let (slope, intercept, residual) = least_squares(&logs);
    Ok(GrowthFit {
        points: sorted.iter().map(|r| (r.height, r.count.to_string())).collect(),
        slope,
        intercept,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let cube: Vec<(f64, f64)> = [2.0, 3.0, 5.0, 8.0].iter().map(|&h: &f64| (h, h.powi(3))).collect();
        let (slope, _, res) = fit_points(&cube).unwrap();
        assert!((slope - 3.0).abs() < 1e-12 && res < 1e-12);

        let flat: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|&h| (h, 7.0)).collect();
        assert!(fit_points(&flat).unwrap().0.abs() < 1e-12);

        let linear: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 9.0].iter().map(|&h| (h, 5.0 * h)).collect();
        assert!((fit_points(&linear).unwrap().0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_of_huge_integers() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
    }
}
