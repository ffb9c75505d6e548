//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use splitcount::counting::{block_box_count, brute_force_set, fit_exponent, param_image, Norm, ParamOptions, WorkGuard};
use splitcount::linalg::{char_poly, det};
use splitcount::random::{random_conjugate, stream_rng};
use splitcount::{block_reduce, SplitPolySpec};
use splitcount_cli::{run_in_pool, strip_timing, Cli, Report};

use clap::Parser;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cli(args: &[&str]) -> Report {
    let argv = std::iter::once("splitcount").chain(args.iter().copied());
    let parsed = Cli::try_parse_from(argv).unwrap_or_else(|e| panic!("bad arguments {args:?}: {e}"));
    run_in_pool(&parsed).unwrap_or_else(|e| panic!("{args:?} failed: {e}"))
}

fn count_of(report: &Report, i: usize) -> u64 {
    report.json["result"]["records"][i]["count"].as_str().expect("count string").parse().expect("integer")
}

fn spec(a: usize, b: usize) -> SplitPolySpec {
    SplitPolySpec::new(a, b).expect("valid spec")
}

type M3 = [[i64; 3]; 3];

fn chi3(m: &M3) -> [i64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let e2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [-d, e2, -tr]
}

/// All 3x3 matrices with entries in [-h, h] and the target polynomial, by nested loops.
fn oracle3(s: SplitPolySpec, h: i64) -> Vec<M3> {
    let c = s.coefficients();
    let target = [c[0], c[1], c[2]];
    let side = (2 * h + 1) as usize;
    let mut out = Vec::new();
    let mut m = [[0i64; 3]; 3];
    for mut idx in 0..side.pow(9) {
        for e in 0..9 {
            m[e / 3][e % 3] = (idx % side) as i64 - h;
            idx /= side;
        }
        if chi3(&m) == target {
            out.push(m);
        }
    }
    out
}

fn oracle2(s: SplitPolySpec, h: i64, frob: bool, modulus: Option<i64>) -> u64 {
    let (lo, hi) = match modulus {
        Some(q) => (0, q - 1),
        None => (-h, h),
    };
    let eq = |x: i64, y: i64| match modulus {
        Some(q) => (x - y).rem_euclid(q) == 0,
        None => x == y,
    };
    let mut count = 0;
    for a in lo..=hi {
        for b in lo..=hi {
            for c in lo..=hi {
                for d in lo..=hi {
                    let inside = !frob || a * a + b * b + c * c + d * d <= h * h;
                    if inside && eq(a + d, s.trace()) && eq(a * d - b * c, 1) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn c1_conjugation_formulas() -> Outcome {
    let start = Instant::now();
    let r = cli(&["verify-conj", "--box", "3", "--trials", "100000", "--range", "50", "--seed", "0"]);
    let elapsed = start.elapsed();
    let res = &r.json["result"];
    let mismatches = res["mismatches"].as_u64().unwrap_or(u64::MAX);
    let cases = res["exhaustive_cases"].as_u64().unwrap_or(0);
    let trials = res["trials"].as_u64().unwrap_or(0);
    outcome(
        mismatches == 0 && cases == 117_649 && trials == 100_000 && elapsed < Duration::from_secs(10),
        format!("box cases={cases}, random trials={trials}, mismatches={mismatches}, {elapsed:.2?} (limit 10s)"),
    )
}

fn c2_brute_force() -> Outcome {
    let mut time = Duration::ZERO;
    let mut timed = |args: &[&str]| {
        let t = Instant::now();
        let r = cli(args);
        time += t.elapsed();
        r
    };
    let n2 = count_of(&timed(&["count", "--n", "2", "--poly", "(x-1)^2", "--height", "1", "--method", "brute"]), 0);
    let n2_oracle = oracle2(spec(2, 0), 1, false, None);
    let mut ok = n2 == 5 && n2_oracle == 5;
    let mut detail = format!("n=2 (x-1)^2 H=1: {n2} (oracle {n2_oracle})");
    for (poly, s, h) in [("(x-1)^3", spec(3, 0), 1), ("(x-1)^3", spec(3, 0), 2), ("(x+1)^2(x-1)", spec(1, 2), 2)] {
        let got = count_of(&timed(&["count", "--n", "3", "--poly", poly, "--height", &h.to_string(), "--method", "brute"]), 0);
        let want = oracle3(s, h).len() as u64;
        ok &= got == want;
        if s.is_unipotent() && h == 1 {
            ok &= got >= 27;
        }
        detail.push_str(&format!("; {poly} H={h}: {got} (oracle {want})"));
    }
    ok &= time < Duration::from_secs(60);
    outcome(ok, format!("{detail}; brute runtime {time:.2?} (limit 60s)"))
}

fn c3_soundness() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, s) in [("(x-1)^3", spec(3, 0)), ("(x+1)^2(x-1)", spec(1, 2))] {
        for h in [1u64, 2] {
            let image = param_image(s, h, ParamOptions::default()).expect("sweep");
            let brute = brute_force_set(s, h, Norm::Sup, WorkGuard::default()).expect("brute");
            let subset = image.is_subset(&brute);
            let r = cli(&["audit", "--kind", "coverage", "--poly", name, "--height", &h.to_string()]);
            let rep = &r.json["result"]["reports"][0];
            let sound = rep["soundness"].as_bool() == Some(true) && r.violation.is_none();
            ok &= subset && sound;
            parts.push(format!(
                "{name} H={h}: image {} within brute {} = {subset}, coverage {:.4}",
                image.len(),
                brute.len(),
                rep["coverage_ratio"].as_f64().unwrap_or(f64::NAN)
            ));
        }
    }
    outcome(ok, parts.join("; "))
}

fn c4_exponent_law() -> Outcome {
    let start = Instant::now();
    let heights = [10u64, 20, 40, 80];
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, expected) in [(spec(3, 0), 3.0), (spec(4, 0), 6.0)] {
        let recs: Vec<_> = heights.iter().map(|&h| block_box_count(s, h)).collect();
        let fit = fit_exponent(&recs).expect("four points");
        let within = (fit.slope - expected).abs() <= 0.05;
        ok &= within;
        parts.push(format!("n={} slope {:.4} (target {expected} +/- 0.05)", s.n(), fit.slope));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    outcome(ok, format!("{}; {elapsed:.2?} (limit 1s)", parts.join("; ")))
}

fn c5_roundtrip() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut total = 0;
    for (i, s) in [spec(3, 0), spec(1, 2), spec(4, 0), spec(2, 2)].into_iter().enumerate() {
        for case in 0..1000u64 {
            let mut rng = stream_rng(2024 + i as u64, case);
            let (a, g0) = random_conjugate(s, 3, 2, &mut rng);
            total += 1;
            let good = g0.sup_norm() <= BigInt::from(2)
                && block_reduce(&a, s).is_ok_and(|f| {
                    let m = f.assemble();
                    f.verify(&a).is_ok()
                        && m.submatrix(s.a(), 0, s.b(), s.a()).is_zero()
                        && char_poly(&m) == char_poly(&a)
                        && det(&f.g) == BigInt::from(1)
                });
            if !good {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("{total} cases over 4 specs, failures={failures}, {elapsed:.2?} (limit 60s)"),
    )
}

fn c6_strata() -> Outcome {
    let r = cli(&["count", "--n", "3", "--poly", "(x-1)^3", "--height", "1", "--method", "brute", "--stratify"]);
    let total = count_of(&r, 0);
    let got: BTreeMap<String, u64> = r.json["result"]["strata"][0]["strata"]
        .as_array()
        .expect("strata")
        .iter()
        .map(|s| (s["jordan"].as_str().expect("key").to_string(), s["count"].as_u64().expect("count")))
        .collect();
    // rank of N = A - I and whether N^2 = 0 decide the 3x3 unipotent type
    let mut want: BTreeMap<String, u64> = BTreeMap::new();
    for m in oracle3(spec(3, 0), 1) {
        let mut n = m;
        for (i, row) in n.iter_mut().enumerate() {
            row[i] -= 1;
        }
        let zero = n.iter().flatten().all(|&x| x == 0);
        let sq_zero = (0..3).all(|i| (0..3).all(|j| (0..3).map(|k| n[i][k] * n[k][j]).sum::<i64>() == 0));
        let key = if zero { "+(1,1,1) -()" } else if sq_zero { "+(2,1) -()" } else { "+(3) -()" };
        *want.entry(key.to_string()).or_default() += 1;
    }
    let sum: u64 = got.values().sum();
    let identity = got.get("+(1,1,1) -()").copied().unwrap_or(0);
    outcome(
        sum == total && identity == 1 && got == want,
        format!("strata {got:?}, sum {sum} vs brute {total}, oracle {want:?}"),
    )
}

fn c7_residues() -> Outcome {
    let k1 = cli(&["density", "--n", "2", "--split", "2,0", "--prime", "3", "--k", "1"]);
    let k2 = cli(&["density", "--n", "2", "--split", "2,0", "--prime", "3", "--k", "2"]);
    let field = |r: &Report, f: &str| r.json["result"][f].as_str().unwrap_or("").to_string();
    let raw1: u64 = field(&k1, "raw").parse().unwrap_or(0);
    let raw2: u64 = field(&k2, "raw").parse().unwrap_or(0);
    let oracle1 = oracle2(spec(2, 0), 0, false, Some(3));
    let oracle2_ = oracle2(spec(2, 0), 0, false, Some(9));
    let rationals = [&k1, &k2].iter().all(|r| !field(r, "normalized_num").is_empty() && !field(r, "normalized_den").is_empty());
    outcome(
        raw1 == 9 && raw1 == oracle1 && raw1 == 3 * 3 && raw2 == oracle2_ && rationals,
        format!(
            "k=1 raw {raw1} (exhaustive {oracle1}, q^2 = 9), normalized {}/{}; k=2 raw {raw2} (exhaustive 9^4 scan {oracle2_}), normalized {}/{}",
            field(&k1, "normalized_num"),
            field(&k1, "normalized_den"),
            field(&k2, "normalized_num"),
            field(&k2, "normalized_den")
        ),
    )
}

fn c8_norm_sandwich() -> Outcome {
    let r = cli(&["audit", "--kind", "norms", "--n", "2", "--poly", "(x-1)^2", "--height", "1,2,3"]);
    let mut ok = r.violation.is_none();
    let mut parts = Vec::new();
    let rows = r.json["result"]["comparisons"].as_array().cloned().unwrap_or_default();
    ok &= rows.len() == 3;
    for (row, h) in rows.iter().zip(1i64..) {
        let c = |k: &str| row[k]["count"].as_str().and_then(|s| s.parse::<u64>().ok()).unwrap_or(u64::MAX);
        let (fro, sup, outer) = (c("frobenius"), c("sup"), c("frobenius_outer"));
        let s = spec(2, 0);
        let oracle = (oracle2(s, h, true, None), oracle2(s, h, false, None), oracle2(s, 2 * h, true, None));
        ok &= fro <= sup && sup <= outer && (fro, sup, outer) == oracle;
        parts.push(format!("H={h}: {fro} <= {sup} <= {outer}"));
    }
    outcome(ok, parts.join("; "))
}

fn c9_determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["count", "--n", "2", "--poly", "(x-1)^2", "--height", "1", "--method", "brute"],
        &["count", "--n", "3", "--poly", "(x-1)^3", "--height", "1,2", "--method", "brute"],
        &["count", "--n", "3", "--poly", "(x+1)^2(x-1)", "--height", "2", "--method", "brute"],
        &["audit", "--kind", "coverage", "--poly", "(x-1)^3", "--height", "1,2"],
        &["audit", "--kind", "coverage", "--poly", "(x+1)^2(x-1)", "--height", "1,2"],
    ];
    let mut same = 0;
    for args in runs {
        let payload = |threads: &str| {
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--threads", threads]);
            let r = cli(&full);
            serde_json::to_string_pretty(&strip_timing(&r.json)).expect("JSON")
        };
        if payload("1") == payload("8") {
            same += 1;
        }
    }
    outcome(same == runs.len(), format!("{same}/{} payloads byte-identical for --threads 1 vs 8", runs.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("conjugation formula verification", c1_conjugation_formulas),
        ("brute-force oracle values", c2_brute_force),
        ("set-level soundness", c3_soundness),
        ("exponent law", c4_exponent_law),
        ("normal-form roundtrip", c5_roundtrip),
        ("Jordan stratification", c6_strata),
        ("residue counts", c7_residues),
        ("norm sandwich", c8_norm_sandwich),
        ("determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
