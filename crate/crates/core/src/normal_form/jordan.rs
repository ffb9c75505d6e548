use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{rank, Matrix};
use crate::scalar::Scalar;
use crate::spec::SplitPolySpec;

use super::validate;

/// Integer partition with weakly decreasing positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let largest = self.0.first().copied().unwrap_or(0);
        Partition((1..=largest).map(|k| self.0.iter().filter(|&&p| p >= k).count()).collect())
    }

    /// Every partition of `m`, in reverse lexicographic order.
    pub fn all(m: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(m, m, &mut Vec::new(), &mut out);
        out
    }

    /// Partition whose conjugate is given by consecutive rank drops.
    ///
    /// `ranks[k] = rank(N^k)` starting at `ranks[0] = n`; the `k`-th drop counts
    /// the Jordan blocks of size at least `k`.
    pub fn from_rank_sequence(ranks: &[usize]) -> Partition {
        let drops: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).filter(|&d| d > 0).collect();
        Partition(drops).conjugate()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Jordan block sizes on the `+1` and `-1` primary components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JordanType {
    pub plus: Partition,
    pub minus: Partition,
}

impl JordanType {
    pub fn new(plus: Partition, minus: Partition) -> Self {
        JordanType { plus, minus }
    }

    /// Every Jordan type compatible with `spec`.
    pub fn all(spec: SplitPolySpec) -> Vec<JordanType> {
        let mut out = Vec::new();
        for plus in Partition::all(spec.a()) {
            for minus in Partition::all(spec.b()) {
                out.push(JordanType::new(plus.clone(), minus));
            }
        }
        out
    }

    /// Free upper entries of an upper block representative: entries inside
    /// Jordan blocks, entries between blocks of one eigenvalue, and the
    /// coupling block.
    pub fn parameter_count(&self) -> usize {
        fn within(p: &Partition) -> usize {
            let m = p.size();
            let internal: usize = p.parts().iter().map(|&l| l * (l - 1) / 2).sum();
            let cross = m * m.saturating_sub(1) / 2 - internal;
            internal + cross
        }
        within(&self.plus) + within(&self.minus) + self.plus.size() * self.minus.size()
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+{} -{}", self.plus, self.minus)
    }
}

fn partition_at<T: Scalar>(a: &Matrix<T>, eigenvalue: T, multiplicity: usize) -> Partition {
    let n = a.dim();
    let nil = a.shift(&-eigenvalue);
    let floor = n - multiplicity;
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    while *ranks.last().unwrap() > floor {
        power = &power * &nil;
        let r = rank(&power);
        if r == *ranks.last().unwrap() {
            break;
        }
        ranks.push(r);
    }
    Partition::from_rank_sequence(&ranks)
}

/// Jordan type from the rank sequences of `(A - I)^k` and `(A + I)^k`.
pub fn jordan_type<T: Scalar>(a: &Matrix<T>, spec: SplitPolySpec) -> Result<JordanType> {
    validate(a, spec)?;
    Ok(jordan_type_unchecked(a, spec))
}

/// As [`jordan_type`] but trusts the caller that `χ_A` matches `spec`.
pub fn jordan_type_unchecked<T: Scalar>(a: &Matrix<T>, spec: SplitPolySpec) -> JordanType {
    let plus = partition_at(a, T::one(), spec.a());
    let minus = partition_at(a, -T::one(), spec.b());
    JordanType::new(plus, minus)
}
