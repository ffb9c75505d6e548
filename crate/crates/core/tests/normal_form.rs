use num_bigint::BigInt;
use proptest::prelude::*;
use splitcount::conj3::{lower_l, mixed_t, unipotent_u, LowerParams, TriParams};
use splitcount::linalg::{char_poly, conjugate, det, inverse_unimodular, snf};
use splitcount::normal_form::{band_bound_check, bounded_conjugator, jordan_type, JordanType, Partition};
use splitcount::random::{random_conjugate, random_unimodular, stream_rng};
use splitcount::{block_reduce, normalize_jordan, primary_split, BlockNormalForm, Error, IntegerMatrix, SplitPolySpec};

fn m(rows: &[&[i64]]) -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(rows)
}

fn tri(a: i64, b: i64, c: i64) -> TriParams<BigInt> {
    TriParams::new(a.into(), b.into(), c.into())
}

fn low(u: i64, v: i64, w: i64) -> IntegerMatrix {
    lower_l(&LowerParams::new(u.into(), v.into(), w.into()))
}

fn spec(a: usize, b: usize) -> SplitPolySpec {
    SplitPolySpec::new(a, b).unwrap()
}

fn part(p: &[usize]) -> Partition {
    Partition::new(p.to_vec())
}

#[test]
fn primary_split_examples() {
    let d = IntegerMatrix::diagonal(&[1, 1, -1, -1].map(BigInt::from));
    let s = primary_split(&d, spec(2, 2)).unwrap();
    assert_eq!(s.plus, m(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
    assert_eq!(s.minus, m(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]));
    assert_eq!(s.index, BigInt::from(1));

    let s = primary_split(&mixed_t(&tri(2, 3, 5)), spec(1, 2)).unwrap();
    assert_eq!((s.plus.rows(), s.minus.rows()), (1, 2));

    // the two lattices need not be complementary
    let s = primary_split(&mixed_t(&tri(0, 0, 1)), spec(1, 2)).unwrap();
    assert_eq!(s.index, BigInt::from(2));

    let g = random_unimodular(3, 2, &mut stream_rng(11, 0));
    let a = conjugate(&g, &mixed_t(&tri(1, 2, 3))).unwrap();
    let s = primary_split(&a, spec(1, 2)).unwrap();
    for basis in [&s.plus, &s.minus] {
        assert!(snf(basis).invariant_factors().iter().all(|x| *x == BigInt::from(1)));
    }
    let f = block_reduce(&a, spec(1, 2)).unwrap();
    assert_eq!(char_poly(&f.assemble()), spec(1, 2).poly());
}

#[test]
fn primary_split_errors() {
    let err = primary_split(&IntegerMatrix::identity(3), spec(1, 2)).unwrap_err();
    assert!(matches!(err, Error::CharPolyMismatch { .. }));
    let err = primary_split(&IntegerMatrix::identity(2), spec(3, 0)).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch(_)));
    let err = block_reduce(&m(&[&[1, 1], &[1, 0]]), spec(2, 0)).unwrap_err();
    assert!(matches!(err, Error::CharPolyMismatch { .. }));
}

#[test]
fn block_reduce_examples() {
    let a = m(&[&[1, 4, -2], &[0, -1, 3], &[0, 0, -1]]);
    let f = block_reduce(&a, spec(1, 2)).unwrap();
    f.verify(&a).unwrap();
    assert_eq!(f.g, IntegerMatrix::identity(3));
    assert_eq!(f.b, m(&[&[4, -2]]));
    assert_eq!(f.y, m(&[&[0, 3], &[0, 0]]));

    let l = low(1, 0, 1);
    let a = &(&l * &mixed_t(&tri(2, 1, 3))) * &inverse_unimodular(&l).unwrap();
    let f = block_reduce(&a, spec(1, 2)).unwrap();
    f.verify(&a).unwrap();
    let u = conjugate(&f.g, &a).unwrap();
    assert!(u.is_upper_triangular());
    assert_eq!((0..3).map(|i| u[(i, i)].clone()).collect::<Vec<_>>(), [1, -1, -1].map(BigInt::from));

    let n = m(&[&[1, 2, -1, 3], &[0, 1, 4, 0], &[0, 0, 1, 5], &[0, 0, 0, 1]]);
    let g = random_unimodular(4, 2, &mut stream_rng(3, 0));
    let a = conjugate(&g, &n).unwrap();
    let f = block_reduce(&a, SplitPolySpec::unipotent(4)).unwrap();
    f.verify(&a).unwrap();
    assert!(f.assemble().is_unitriangular());
    assert_eq!(f.y.rows(), 0);
}

#[test]
fn jordan_type_examples() {
    let u = SplitPolySpec::unipotent(3);
    assert_eq!(jordan_type(&IntegerMatrix::identity(3), u).unwrap().plus, part(&[1, 1, 1]));
    assert_eq!(jordan_type(&unipotent_u(&tri(1, 0, 1)), u).unwrap().plus, part(&[3]));
    assert_eq!(jordan_type(&unipotent_u(&tri(0, 1, 0)), u).unwrap().plus, part(&[2, 1]));
    let jt = jordan_type(&mixed_t(&tri(1, 0, 0)), spec(1, 2)).unwrap();
    assert_eq!(jt, JordanType::new(part(&[1]), part(&[2])));
    assert_eq!(jt.to_string(), "+(1) -(2)");
    let jt = jordan_type(&mixed_t(&tri(0, 7, 7)), spec(1, 2)).unwrap();
    assert_eq!(jt.minus, part(&[1, 1]));
}

#[test]
fn normalize_jordan_examples() {
    // already a single Jordan chain
    let a = m(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
    let f = block_reduce(&a, SplitPolySpec::unipotent(3)).unwrap();
    let (g, exact) = normalize_jordan(&f);
    assert!(exact);
    assert_eq!(g.assemble(), a);

    // [[1,2],[0,1]] is not conjugate to [[1,1],[0,1]] over Z
    let a = m(&[&[1, 2], &[0, 1]]);
    let f = block_reduce(&a, SplitPolySpec::unipotent(2)).unwrap();
    let (g, exact) = normalize_jordan(&f);
    assert!(!exact);
    g.verify(&a).unwrap();
    assert_eq!(g.x[(0, 1)].magnitude(), &2u32.into());
    let target = m(&[&[1, 1], &[0, 1]]);
    for e in box4(3) {
        let c = m(&[&e[0..2], &e[2..4]]);
        if det(&c) == BigInt::from(1) {
            assert_ne!(conjugate(&c, &a).unwrap(), target, "conjugator {e:?}");
        }
    }

    let a = unipotent_u(&tri(1, 5, 1));
    let f = BlockNormalForm::from_parts(SplitPolySpec::unipotent(3), IntegerMatrix::identity(3), &a).unwrap();
    let (g, exact) = normalize_jordan(&f);
    assert!(exact);
    g.verify(&a).unwrap();
    assert_eq!(g.assemble(), unipotent_u(&tri(1, 0, 1)));
}

fn box4(r: i64) -> Vec<[i64; 4]> {
    let side: Vec<i64> = (-r..=r).collect();
    let mut out = Vec::new();
    for &a in &side {
        for &b in &side {
            for &c in &side {
                for &d in &side {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[test]
fn bounded_conjugator_examples() {
    let a = unipotent_u(&tri(2, 3, 4));
    let c = bounded_conjugator(&a).unwrap();
    assert_eq!(c.g, IntegerMatrix::identity(3));

    let l = low(1, 1, 1);
    let a = &(&l * &unipotent_u(&tri(2, 3, 4))) * &inverse_unimodular(&l).unwrap();
    let c = bounded_conjugator(&a).unwrap();
    assert!(c.u.is_unitriangular());
    assert_eq!(conjugate(&c.g, &a).unwrap(), c.u);
    assert_eq!(det(&c.g), BigInt::from(1));

    assert!(matches!(bounded_conjugator(&mixed_t(&tri(1, 1, 1))), Err(Error::NotUnipotent(_))));
}

#[test]
fn band_bound_examples() {
    for h in [1u64, 3, 10] {
        let hi = h as i64;
        let audit = band_bound_check(&unipotent_u(&tri(hi, 0, hi)), h).unwrap();
        assert_eq!(audit.bands[0], (1, 1.0));
        let audit = band_bound_check(&unipotent_u(&tri(hi, hi, hi)), h).unwrap();
        assert!(audit.max_ratio <= 1.0);
    }
    assert!(band_bound_check(&unipotent_u(&tri(5, 0, 0)), 2).is_err());
    assert!(matches!(band_bound_check(&IntegerMatrix::identity(3).scale(&BigInt::from(-1)), 1), Err(Error::NotUnipotent(_))));
}

fn specs() -> impl Strategy<Value = SplitPolySpec> {
    prop::sample::select(vec![spec(2, 0), spec(0, 2), spec(3, 0), spec(1, 2), spec(4, 0), spec(2, 2), spec(0, 4), spec(3, 2), spec(5, 0)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn block_reduce_roundtrip(sp in specs(), seed in any::<u64>()) {
        let (a, _) = random_conjugate(sp, 3, 2, &mut stream_rng(seed, 0));
        let f = block_reduce(&a, sp).unwrap();
        prop_assert!(f.verify(&a).is_ok());
        prop_assert_eq!(det(&f.g), BigInt::from(1));
        let (g, _) = normalize_jordan(&f);
        prop_assert!(g.verify(&a).is_ok());
        prop_assert_eq!(jordan_type(&a, sp).unwrap(), jordan_type(&g.assemble(), sp).unwrap());
    }

    #[test]
    fn jordan_type_is_a_conjugation_invariant(sp in specs(), seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 1);
        let (a, _) = random_conjugate(sp, 2, 2, &mut rng);
        let h = random_unimodular(sp.n(), 3, &mut rng);
        let b = conjugate(&h, &a).unwrap();
        let jt = jordan_type(&a, sp).unwrap();
        prop_assert_eq!(jt.plus.size(), sp.a());
        prop_assert_eq!(jt.minus.size(), sp.b());
        prop_assert_eq!(jordan_type(&b, sp).unwrap(), jt);
    }

    #[test]
    fn bounded_conjugator_triangularizes(n in 2usize..=5, seed in any::<u64>()) {
        let (a, _) = random_conjugate(SplitPolySpec::unipotent(n), 3, 2, &mut stream_rng(seed, 2));
        let c = bounded_conjugator(&a).unwrap();
        prop_assert!(c.u.is_unitriangular());
        prop_assert_eq!(det(&c.g), BigInt::from(1));
        prop_assert_eq!(conjugate(&c.g, &a).unwrap(), c.u);
    }
}
