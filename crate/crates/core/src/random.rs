//! Seeded sampling. Every consumer derives its generator from `(seed, stream)`
//! so parallel work split by a fixed index reproduces exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{det, inverse_unimodular, Matrix};
use crate::normal_form::BlockNormalForm;
use crate::spec::SplitPolySpec;
use crate::IntegerMatrix;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform over `n x n` matrices with entries in `[-max_entry, max_entry]`
/// and determinant one (rejection sampling).
pub fn random_unimodular<R: Rng>(n: usize, max_entry: i64, rng: &mut R) -> IntegerMatrix {
    assert!(max_entry >= 1 || n <= 1, "no unimodular matrix with max entry 0 for n > 1");
    loop {
        let m = Matrix::<i64>::from_fn(n, n, |_, _| rng.random_range(-max_entry..=max_entry));
        if det(&m.map(|&x| x as i128)) == 1 {
            return m.to_big();
        }
    }
}

fn strictly_upper<R: Rng>(size: usize, range: i64, rng: &mut R) -> IntegerMatrix {
    Matrix::<i64>::from_fn(size, size, |i, j| if j > i { rng.random_range(-range..=range) } else { 0 })
        .to_big()
}

/// Random upper block form with entries of `X`, `Y`, `B` in `[-range, range]`
/// and identity conjugator.
pub fn random_block_form<R: Rng>(spec: SplitPolySpec, range: i64, rng: &mut R) -> BlockNormalForm {
    let (a, b) = (spec.a(), spec.b());
    let x = strictly_upper(a, range, rng);
    let y = strictly_upper(b, range, rng);
    let coupling = Matrix::<i64>::from_fn(a, b, |_, _| rng.random_range(-range..=range)).to_big();
    BlockNormalForm { spec, g: Matrix::identity(a + b), x, y, b: coupling }
}

/// `g0 F g0^{-1}` for a random block form `F` and random `g0` with
/// `sup(g0) <= conj_max`. Returns the matrix and `g0`.
pub fn random_conjugate<R: Rng>(
    spec: SplitPolySpec,
    entry_range: i64,
    conj_max: i64,
    rng: &mut R,
) -> (IntegerMatrix, IntegerMatrix) {
    let form = random_block_form(spec, entry_range, rng).assemble();
    let g0 = random_unimodular(spec.n(), conj_max, rng);
    let g0_inv = inverse_unimodular(&g0).expect("det 1");
    (&(&g0 * &form) * &g0_inv, g0)
}

