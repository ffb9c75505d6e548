use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Poly;
use crate::scalar::Scalar;

/// The target characteristic polynomial `(x - 1)^a (x + 1)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct SplitPolySpec {
    a: usize,
    b: usize,
}

#[derive(Deserialize)]
struct RawSpec {
    a: usize,
    b: usize,
}

impl TryFrom<RawSpec> for SplitPolySpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        SplitPolySpec::new(raw.a, raw.b)
    }
}

impl SplitPolySpec {
    /// Rejects odd `b`: `det = (-1)^b` must be one.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if !b.is_multiple_of(2) {
            return Err(Error::OddB(b));
        }
        if a + b == 0 {
            return Err(Error::InvalidInput("empty polynomial".into()));
        }
        Ok(SplitPolySpec { a, b })
    }

    /// `(x - 1)^n`
    pub fn unipotent(n: usize) -> Self {
        SplitPolySpec { a: n, b: 0 }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn is_unipotent(&self) -> bool {
        self.b == 0
    }

    pub fn poly<T: Scalar>(&self) -> Poly<T> {
        Poly::split(self.a, self.b)
    }

    /// Required trace `a - b`.
    pub fn trace(&self) -> i64 {
        self.a as i64 - self.b as i64
    }

    /// Monic coefficient vector of the polynomial, lowest degree first.
    pub fn coefficients(&self) -> Vec<i64> {
        self.poly::<i64>().coeffs().to_vec()
    }
}

/// `n (n - 1) / 2`, the number of free upper parameters.
pub fn free_params(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl fmt::Display for SplitPolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(f: &mut fmt::Formatter<'_>, sign: char, e: usize) -> fmt::Result {
            match e {
                0 => Ok(()),
                1 => write!(f, "(x{sign}1)"),
                _ => write!(f, "(x{sign}1)^{e}"),
            }
        }
        factor(f, '-', self.a)?;
        factor(f, '+', self.b)
    }
}
