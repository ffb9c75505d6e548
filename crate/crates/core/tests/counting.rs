use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use proptest::prelude::*;
use splitcount::counting::{
    block_box_count, block_box_set, brute_force_count, brute_force_set, coverage_audit, fit_exponent,
    jordan_stratified_count, norm_comparison, param_count_mixed, param_count_unipotent, param_image, BruteOptions,
    CountRecord, CoverageOptions, Method, Norm, ParamOptions, WorkGuard, DEFAULT_K,
};
use splitcount::{Error, JordanType, Partition, SplitPolySpec};

fn spec(a: usize, b: usize) -> SplitPolySpec {
    SplitPolySpec::new(a, b).unwrap()
}

type M3 = [[i64; 3]; 3];

fn minors2(m: &M3) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1]
}

fn det3(m: &M3) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `x^3 - e1 x^2 + e2 x - e3` as ascending coefficients.
fn chi3(m: &M3) -> [i64; 3] {
    [-det3(m), minors2(m), -(m[0][0] + m[1][1] + m[2][2])]
}

fn target3(s: SplitPolySpec) -> [i64; 3] {
    let c = s.coefficients();
    [c[0], c[1], c[2]]
}

/// Nested loops over all nine entries; no pruning.
fn oracle3(s: SplitPolySpec, h: i64) -> Vec<M3> {
    let t = target3(s);
    let mut out = Vec::new();
    let mut m = [[0i64; 3]; 3];
    let side = (2 * h + 1) as usize;
    for mut idx in 0..side.pow(9) {
        for e in 0..9 {
            m[e / 3][e % 3] = (idx % side) as i64 - h;
            idx /= side;
        }
        if chi3(&m) == t {
            out.push(m);
        }
    }
    out
}

fn oracle2(s: SplitPolySpec, h: i64, frob: bool) -> u64 {
    let tr = s.trace();
    let mut count = 0;
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                for d in -h..=h {
                    let in_ball = !frob || a * a + b * b + c * c + d * d <= h * h;
                    if in_ball && a + d == tr && a * d - b * c == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn flat(m: &M3) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

fn count(s: SplitPolySpec, h: u64) -> u64 {
    brute_force_count(s, h, BruteOptions::default()).unwrap().record.count.try_into().unwrap()
}

#[test]
fn brute_small_values() {
    assert_eq!(count(spec(2, 0), 1), 5);
    assert_eq!(count(spec(1, 2), 0), 0);
    for h in 0..=5 {
        for s in [spec(2, 0), spec(0, 2)] {
            assert_eq!(count(s, h), oracle2(s, h as i64, false), "{s} H={h}");
            let frob = brute_force_count(s, h, BruteOptions { norm: Norm::Frobenius, ..Default::default() }).unwrap();
            assert_eq!(frob.record.count, BigUint::from(oracle2(s, h as i64, true)), "{s} H={h} frobenius");
        }
    }
}

#[test]
fn brute_matches_nested_loops_n3() {
    for (s, h) in [(spec(3, 0), 1), (spec(1, 2), 1), (spec(3, 0), 2), (spec(1, 2), 2)] {
        let oracle = oracle3(s, h);
        let set = brute_force_set(s, h as u64, Norm::Sup, WorkGuard::default()).unwrap();
        assert_eq!(set.len(), oracle.len(), "{s} H={h}");
        assert!(oracle.iter().all(|m| set.contains(&flat(m))));
        assert_eq!(count(s, h as u64), oracle.len() as u64);
    }
    assert!(count(spec(3, 0), 1) >= 27);
}

#[test]
fn brute_set_is_transpose_closed() {
    for (s, h) in [(spec(3, 0), 2), (spec(1, 2), 2), (spec(2, 2), 1)] {
        let set = brute_force_set(s, h, Norm::Sup, WorkGuard::default()).unwrap();
        let n = s.n();
        for m in set.sorted() {
            let t: Vec<i64> = (0..n * n).map(|k| m[(k % n) * n + k / n]).collect();
            assert!(set.contains(&t));
        }
    }
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            let c = count(spec(1, 2), 2);
            let p = param_image(spec(3, 0), 2, ParamOptions::default()).unwrap().sorted();
            (c, p)
        })
    };
    assert_eq!(run(1), run(4));
    assert_eq!(run(1), run(7));
}

#[test]
fn counts_are_monotone() {
    for s in [spec(2, 0), spec(0, 2), spec(3, 0), spec(1, 2)] {
        let c: Vec<u64> = (0..=2).map(|h| count(s, h)).collect();
        assert!(c.windows(2).all(|w| w[0] <= w[1]), "{s}: {c:?}");
    }
    let opts = ParamOptions::default();
    let mixed: Vec<BigUint> = (1..=4).map(|h| param_count_mixed(h, opts).unwrap().count).collect();
    let uni: Vec<BigUint> = (1..=4).map(|h| param_count_unipotent(h, opts).unwrap().count).collect();
    assert!(mixed.windows(2).all(|w| w[0] <= w[1]), "{mixed:?}");
    assert!(uni.windows(2).all(|w| w[0] <= w[1]), "{uni:?}");
}

fn mul3(x: &M3, y: &M3) -> M3 {
    let mut z = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            z[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    z
}

/// Direct reference sweep: every sextuple in the boxes, multiplied out.
fn param_reference(mixed: bool, h: i64, k: i64) -> HashSet<Vec<i64>> {
    let d = if mixed { -1 } else { 1 };
    let mut out = HashSet::new();
    for a in -h..=h {
        for c in -h..=h {
            let m = (k * h + a.abs() + c.abs()) / (1 + a.abs() + c.abs());
            for u in -m..=m {
                for v in -m..=m {
                    for w in -m..=m {
                        let bb = if mixed && w != 0 { ((a.abs() + h) / w.abs()).min(h) } else { h };
                        for b in -bb..=bb {
                            let l = [[1, 0, 0], [u, 1, 0], [v, w, 1]];
                            let l_inv = [[1, 0, 0], [-u, 1, 0], [u * w - v, -w, 1]];
                            let t = [[d, a, b], [0, d, c], [0, 0, 1]];
                            let r = mul3(&mul3(&l, &t), &l_inv);
                            if r.iter().flatten().all(|x| x.abs() <= h) {
                                out.insert(flat(&r));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn param_sweeps_match_reference() {
    for h in 1..=3 {
        for (s, mixed) in [(spec(1, 2), true), (spec(3, 0), false)] {
            let got = param_image(s, h, ParamOptions::default()).unwrap();
            let want = param_reference(mixed, h as i64, DEFAULT_K);
            assert_eq!(got.len(), want.len(), "{s} H={h}");
            assert!(want.iter().all(|m| got.contains(m)));
        }
    }
    let rec = param_count_mixed(1, ParamOptions::default()).unwrap();
    assert_eq!(rec.method, Method::ParamMixed);
    assert_eq!(rec.count, BigUint::from(param_reference(true, 1, DEFAULT_K).len()));
}

#[test]
fn param_images_are_valid_and_inside_brute() {
    for h in 1..=2 {
        for s in [spec(1, 2), spec(3, 0)] {
            let brute = brute_force_set(s, h, Norm::Sup, WorkGuard::default()).unwrap();
            for compose in [0, 1] {
                let opts = ParamOptions { compose_upper: compose, ..ParamOptions::default() };
                let image = param_image(s, h, opts).unwrap();
                assert!(image.is_subset(&brute), "{s} H={h}");
                for m in image.sorted() {
                    let m3 = [[m[0], m[1], m[2]], [m[3], m[4], m[5]], [m[6], m[7], m[8]]];
                    assert_eq!(chi3(&m3), target3(s));
                    assert_eq!(det3(&m3), 1);
                }
            }
        }
    }
    assert!(matches!(param_image(spec(2, 0), 1, ParamOptions::default()), Err(Error::InvalidInput(_))));
}

#[test]
fn crude_b_range_contains_refined_image() {
    let refined = param_image(spec(1, 2), 3, ParamOptions::default()).unwrap();
    let crude = param_image(spec(1, 2), 3, ParamOptions { refined_b: false, ..ParamOptions::default() }).unwrap();
    assert!(refined.is_subset(&crude));
    assert_eq!(refined, crude);
}

#[test]
fn block_box_values() {
    assert_eq!(block_box_count(spec(3, 0), 1).count, BigUint::from(27u32));
    assert_eq!(block_box_count(spec(2, 2), 2).count, BigUint::from(15625u32));
    for (s, h) in [(spec(3, 0), 1), (spec(1, 2), 1), (spec(3, 0), 3), (spec(2, 0), 2)] {
        let set = block_box_set(s, h).unwrap();
        assert_eq!(BigUint::from(set.len()), block_box_count(s, h).count);
    }
    let big = block_box_count(spec(5, 2), 1_000_000);
    let mut expected = BigUint::from(1u32);
    for _ in 0..21 {
        expected *= 2_000_001u32;
    }
    assert_eq!(big.count, expected);
    assert!(big.distinct);
}

#[test]
fn strata_examples() {
    let s = spec(3, 0);
    let strata = jordan_stratified_count(s, 1, WorkGuard::default()).unwrap();
    let total: u64 = strata.values().sum();
    assert_eq!(total, count(s, 1));
    let key = |p: &[usize]| JordanType::new(Partition::new(p.to_vec()), Partition::new(vec![]));
    assert_eq!(strata[&key(&[1, 1, 1])], 1);

    // rank of A - I decides the stratum for 3x3 unipotents
    let mut want: BTreeMap<JordanType, u64> = BTreeMap::new();
    for m in oracle3(s, 1) {
        let mut n = m;
        for (i, row) in n.iter_mut().enumerate() {
            row[i] -= 1;
        }
        let rank = if n.iter().flatten().all(|&x| x == 0) {
            0
        } else if mul3(&n, &n).iter().flatten().all(|&x| x == 0) {
            1
        } else {
            2
        };
        let p: &[usize] = match rank {
            0 => &[1, 1, 1],
            1 => &[2, 1],
            _ => &[3],
        };
        *want.entry(key(p)).or_default() += 1;
    }
    assert_eq!(strata, want);

    let mixed = jordan_stratified_count(spec(1, 2), 2, WorkGuard::default()).unwrap();
    assert_eq!(mixed.len(), 2);
    assert_eq!(mixed.values().sum::<u64>(), count(spec(1, 2), 2));
}

#[test]
fn norm_comparison_examples() {
    let s = spec(2, 0);
    let c = norm_comparison(s, 1, WorkGuard::default()).unwrap();
    assert_eq!(c.frobenius.count, BigUint::from(0u32));
    for h in 1..=3 {
        let c = norm_comparison(s, h, WorkGuard::default()).unwrap();
        assert!(c.sandwich);
        assert_eq!(c.frobenius_outer.height, 2 * h);
    }
}

#[test]
fn coverage_examples() {
    let r = coverage_audit(spec(3, 0), 0, CoverageOptions::default()).unwrap();
    assert_eq!(r.coverage_ratio, 1.0);
    assert!(r.soundness);

    let r = coverage_audit(spec(3, 0), 1, CoverageOptions::default()).unwrap();
    assert!(r.soundness);
    assert_eq!(r.brute_set_size as u64, count(spec(3, 0), 1));
    assert!(r.coverage_ratio > 0.0 && r.coverage_ratio <= 1.0);

    for s in [spec(3, 0), spec(1, 2)] {
        let mut last = 0.0;
        for k in [1, 2, 4, 8] {
            let r = coverage_audit(s, 2, CoverageOptions { k, ..CoverageOptions::default() }).unwrap();
            assert!(r.coverage_ratio >= last, "{s} K={k}");
            last = r.coverage_ratio;
        }
    }
}

#[test]
fn fit_errors() {
    let recs: Vec<CountRecord> = [2, 4].iter().map(|&h| block_box_count(spec(3, 0), h)).collect();
    assert_eq!(fit_exponent(&recs).unwrap_err(), Error::InsufficientPoints(2));
    let mut recs: Vec<CountRecord> = [2, 4, 8].iter().map(|&h| block_box_count(spec(3, 0), h)).collect();
    recs.push(block_box_count(spec(1, 2), 16));
    assert!(matches!(fit_exponent(&recs), Err(Error::InvalidInput(_))));
}

#[test]
fn fit_slope_of_power_law_counts() {
    // (2H+1)^k approaches slope k from below as H grows
    let recs: Vec<CountRecord> = [1000, 2000, 4000, 8000].iter().map(|&h| block_box_count(spec(3, 0), h)).collect();
    let fit = fit_exponent(&recs).unwrap();
    assert!((fit.slope - 3.0).abs() < 0.01, "{}", fit.slope);
    assert_eq!(fit.points[0], (1000, "8012006001".to_string()));
}

#[test]
fn work_guard() {
    let guard = WorkGuard { limit: 1000, force: false };
    let err = brute_force_count(spec(3, 0), 2, BruteOptions { guard, ..Default::default() }).unwrap_err();
    assert!(matches!(err, Error::WorkLimitExceeded { .. }));
    let forced = WorkGuard { limit: 1000, force: true };
    assert!(brute_force_count(spec(2, 0), 2, BruteOptions { guard: forced, ..Default::default() }).is_ok());
}

#[test]
fn record_json_roundtrip() {
    let rec = block_box_count(spec(2, 2), 100);
    let json = serde_json::to_value(&rec).unwrap();
    assert_eq!(json["count"], serde_json::json!("65944160601201"));
    assert_eq!(json["H"], serde_json::json!(100));
    assert_eq!(json["method"], serde_json::json!("block_box"));
    let back: CountRecord = serde_json::from_value(json).unwrap();
    assert_eq!(back, rec);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn param_image_within_brute_for_any_k(k in 1i64..=6, h in 1u64..=2, mixed in any::<bool>()) {
        let s = if mixed { spec(1, 2) } else { spec(3, 0) };
        let image = param_image(s, h, ParamOptions { k, ..ParamOptions::default() }).unwrap();
        let brute = brute_force_set(s, h, Norm::Sup, WorkGuard::default()).unwrap();
        prop_assert!(image.is_subset(&brute));
    }

    #[test]
    fn block_box_formula(a in 0usize..=6, b2 in 0usize..=3, h in 0u64..=1_000_000) {
        let b = 2 * b2;
        prop_assume!(a + b > 0);
        let s = spec(a, b);
        let n = (a + b) as u32;
        prop_assert_eq!(block_box_count(s, h).count, BigUint::from(2 * h + 1).pow(n * (n - 1) / 2));
    }
}
