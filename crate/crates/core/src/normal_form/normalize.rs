//! Best-effort integral Jordan normalization of the diagonal blocks.
//!
//! Only conjugations by elementary upper unipotents, signed adjacent swaps
//! and determinant-one sign changes are used, so the block shape and the
//! conjugation identity survive every step. Integral normalization can get
//! stuck on divisibility (`[[1,2],[0,1]]` is not conjugate to `[[1,1],[0,1]]`
//! over the integers); the caller gets an exactness flag instead of an error.

use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::BlockNormalForm;
use crate::IntegerMatrix;

/// The current conjugate `m = g A g^{-1}` together with `g`.
#[derive(Clone)]
struct Work {
    m: IntegerMatrix,
    g: IntegerMatrix,
}

impl Work {
    /// Conjugate by `I + t e_ij`.
    fn add(&mut self, i: usize, j: usize, t: &BigInt) {
        if t.is_zero() {
            return;
        }
        self.m.add_row_multiple(i, j, t);
        self.m.add_col_multiple(j, i, &-t.clone());
        self.g.add_row_multiple(i, j, t);
    }

    /// Conjugate by the signed transposition sending `e_l -> e_k`, `e_k -> -e_l`.
    fn swap(&mut self, k: usize, l: usize) {
        self.m.swap_rows(k, l);
        self.m.negate_row(l);
        self.m.swap_cols(k, l);
        self.m.negate_col(l);
        self.g.swap_rows(k, l);
        self.g.negate_row(l);
    }

    /// Conjugate by `diag(signs)`; the product of signs must be 1.
    fn signs(&mut self, negate: &[bool]) {
        for (i, &neg) in negate.iter().enumerate() {
            if neg {
                self.m.negate_row(i);
                self.m.negate_col(i);
                self.g.negate_row(i);
            }
        }
    }

    fn off(&self, block: &Range<usize>) -> (usize, BigInt) {
        let mut count = 0;
        let mut total = BigInt::zero();
        for i in block.clone() {
            for j in i + 2..block.end {
                if !self.m[(i, j)].is_zero() {
                    count += 1;
                    total += self.m[(i, j)].abs();
                }
            }
        }
        (count, total)
    }
}

/// Clears entries above the super-diagonal, band by band.
///
/// For `(i, j)` with `j - i >= 2` two moves are available: conjugating by
/// `I + t e_{i+1,j}` subtracts `t * m[i][i+1]` and only disturbs higher bands;
/// conjugating by `I + t e_{i,j-1}` adds `t * m[j-1][j]` and also touches
/// `(i-1, j-1)`, which is visited later because `i` runs downwards.
fn clear_bands(w: &mut Work, block: &Range<usize>) {
    let lo = block.start;
    let m = block.len();
    for d in 2..m {
        for i in (lo..lo + m - d).rev() {
            let j = i + d;
            let target = w.m[(i, j)].clone();
            if target.is_zero() {
                continue;
            }
            let left = w.m[(i, i + 1)].clone();
            let down = w.m[(j - 1, j)].clone();
            let ext = left.extended_gcd(&down);
            if !ext.gcd.is_zero() && target.is_multiple_of(&ext.gcd) {
                let k = &target / &ext.gcd;
                // target - t1*left + t2*down = 0 with t1 = k*x, t2 = -k*y
                w.add(i + 1, j, &(&k * &ext.x));
                w.add(i, j - 1, &-(&k * &ext.y));
            } else if !left.is_zero() {
                let (q, r) = target.div_mod_floor(&left);
                // centred remainder
                let q = if r.clone() * 2 > left.abs() { q + left.signum() } else { q };
                w.add(i + 1, j, &q);
            }
        }
    }
}

/// Tries signed swaps of adjacent indices whose coupling entry vanishes.
/// Returns true if a swap (followed by band clearing) reduced the residual.
fn improve_by_swaps(w: &mut Work, block: &Range<usize>) -> bool {
    let before = w.off(block);
    for k in block.start..block.end.saturating_sub(1) {
        if !w.m[(k, k + 1)].is_zero() {
            continue;
        }
        let mut trial = w.clone();
        trial.swap(k, k + 1);
        clear_bands(&mut trial, block);
        if trial.off(block) < before {
            *w = trial;
            return true;
        }
    }
    false
}

fn superdiagonal_ok(w: &Work, block: &Range<usize>) -> bool {
    (block.start..block.end.saturating_sub(1)).all(|k| w.m[(k, k + 1)].abs() <= BigInt::one())
}

/// Signs making every nonzero super-diagonal entry `+1`, with maximal runs
/// of nonzero entries (Jordan chains) listed for later parity fixes.
fn chain_signs(w: &Work, block: &Range<usize>, negate: &mut [bool], chains: &mut Vec<Range<usize>>) {
    let mut start = block.start;
    for k in block.clone() {
        if k + 1 < block.end && !w.m[(k, k + 1)].is_zero() {
            negate[k + 1] = negate[k] ^ w.m[(k, k + 1)].is_negative();
        } else {
            chains.push(start..k + 1);
            start = k + 1;
        }
    }
}

/// Best-effort Jordan normalization of both diagonal blocks.
///
/// Returns the new form and whether each block now has only `0`/`1` entries,
/// all on the super-diagonal. The conjugation identity always holds.
pub fn normalize_jordan(form: &BlockNormalForm) -> (BlockNormalForm, bool) {
    let (a, b) = (form.spec.a(), form.spec.b());
    let n = a + b;
    let blocks = [0..a, a..n];
    let mut w = Work { m: form.assemble(), g: form.g.clone() };

    for block in &blocks {
        clear_bands(&mut w, block);
        // bounded by the strictly decreasing residual
        while w.off(block).0 > 0 && improve_by_swaps(&mut w, block) {}
    }

    let clean = blocks.iter().all(|blk| w.off(blk).0 == 0 && superdiagonal_ok(&w, blk));
    let mut exact = clean;
    if clean {
        let mut negate = vec![false; n];
        let mut chains = Vec::new();
        for block in &blocks {
            chain_signs(&w, block, &mut negate, &mut chains);
        }
        if negate.iter().filter(|&&x| x).count() % 2 == 1 {
            // flipping a whole chain keeps its entries; odd length fixes parity
            if let Some(odd) = chains.iter().find(|c| c.len() % 2 == 1) {
                for k in odd.clone() {
                    negate[k] = !negate[k];
                }
            } else if let Some(last) = chains.iter().rev().find(|c| c.len() >= 2) {
                // no determinant-one diagonal fix exists: leave one -1 behind
                negate[last.end - 1] = !negate[last.end - 1];
                exact = false;
            }
        }
        w.signs(&negate);
    }

    let normalized = BlockNormalForm::from_parts(form.spec, w.g, &w.m)
        .expect("elementary conjugations keep the block shape");
    (normalized, exact)
}
