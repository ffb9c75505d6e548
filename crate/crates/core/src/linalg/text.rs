//! Plain-text matrix format.
//!
//! ```text
//! # optional comments
//! 3
//! -1 2 0
//! 0 -1 5
//! 0 0 1
//! ```
//! Line one is `n`, then `n` lines of `n` whitespace-separated integers.
//! Lines starting with `#` and blank lines are ignored.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub fn parse_matrix(text: &str) -> Result<Matrix<BigInt>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line {header:?}")))?;
    if n == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {}", i + 1)))?;
        let row: Vec<BigInt> = line
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
        }
        data.extend(row);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content {extra:?}")));
    }
    Matrix::new(n, n, data)
}

pub fn format_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
