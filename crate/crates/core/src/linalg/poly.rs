use std::fmt;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Integer polynomial, coefficients stored lowest degree first.
///
/// Characteristic polynomials produced by [`char_poly`](crate::linalg::char_poly)
/// are monic of degree `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Poly { coeffs }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![T::one()] }
    }

    /// `x - r`
    pub fn linear(r: T) -> Self {
        Poly { coeffs: vec![-r, T::one()] }
    }

    /// `(x - 1)^a (x + 1)^b`
    pub fn split(a: usize, b: usize) -> Self {
        let mut p = Self::one();
        for _ in 0..a {
            p = p.mul(&Self::linear(T::one()));
        }
        for _ in 0..b {
            p = p.mul(&Self::linear(-T::one()));
        }
        p
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = m.dim();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * m).shift(c);
        }
        acc
    }

    /// Multiplicities `(a, b)` when the polynomial is exactly `(x-1)^a (x+1)^b`.
    pub fn split_multiplicities(&self) -> Option<(usize, usize)> {
        let mut rest = self.clone();
        let mut counts = [0usize; 2];
        for (k, root) in [T::one(), -T::one()].into_iter().enumerate() {
            while rest.degree() > 0 && rest.eval(&root).is_zero() {
                rest = rest.div_linear(&root);
                counts[k] += 1;
            }
        }
        (rest.degree() == 0 && rest.coeffs[0].is_one()).then_some((counts[0], counts[1]))
    }

    /// Exact division by `x - r`; assumes `r` is a root.
    fn div_linear(&self, r: &T) -> Self {
        let d = self.degree();
        let mut q = vec![T::zero(); d];
        let mut carry = T::zero();
        for i in (0..d).rev() {
            carry = carry * r.clone() + self.coeffs[i + 1].clone();
            q[i] = carry.clone();
        }
        Self::new(q)
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(i == 0 && first) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
