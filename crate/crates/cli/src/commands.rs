use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use splitcount::conj3::verify_conjugation_formulas;
use splitcount::counting::{
    block_box_count, block_box_set, brute_force_count, coverage_audit, fit_exponent, norm_comparison,
    param_count_mixed, param_count_unipotent, BruteOptions, CountRecord, CoverageOptions, Norm, ParamOptions,
};
use splitcount::density::{kappa_table, reduction_check, residue_count};
use splitcount::linalg::char_poly;
use splitcount::normal_form::{band_bound_check, bounded_conjugator, BlockNormalFormView};
use splitcount::random::{random_conjugate, stream_rng};
use splitcount::{block_reduce, jordan_type, normalize_jordan, primary_split, Error, IntegerMatrix, JordanType, SplitPolySpec};

use crate::parse::{parse_poly, parse_split, read_matrix};
use crate::{AuditKind, Cli, CliError, CliResult, Command, MethodArg, NormArg, PolyArgs};

pub(crate) struct Outcome {
    pub result: Value,
    pub csv: Option<String>,
    pub violation: Option<String>,
}

impl Outcome {
    fn json<T: Serialize>(v: T) -> Self {
        Outcome { result: to_value(v), csv: None, violation: None }
    }

    fn check(mut self, ok: bool, msg: impl FnOnce() -> String) -> Self {
        if !ok && self.violation.is_none() {
            self.violation = Some(msg());
        }
        self
    }
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("results serialize to JSON")
}

pub(crate) fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Count { poly, height, method, norm, stratify, k, crude_b, compose_upper } => {
            let spec = require_spec(poly)?;
            let opts = CountOpts { method: *method, norm: *norm, stratify: *stratify, k: *k, crude_b: *crude_b, compose_upper: *compose_upper };
            count(cli, spec, height, opts)
        }
        Command::Reduce { matrix, poly } => reduce(&read_matrix(matrix)?, poly),
        Command::Jordan { matrix, poly } => jordan(&read_matrix(matrix)?, poly),
        Command::Density { poly, primes, k, table, check_reduction } => {
            density(cli, require_spec(poly)?, primes, *k, *table, *check_reduction)
        }
        Command::Fit { input } => fit(input),
        Command::VerifyConj { trials, range, box_radius } => {
            if *box_radius < 0 || *range < 0 {
                return Err(CliError::Usage("--box and --range must be nonnegative".into()));
            }
            let report = verify_conjugation_formulas(*box_radius, *trials, *range, cli.seed);
            let ok = report.mismatches == 0;
            let n = report.mismatches;
            Ok(Outcome::json(report).check(ok, || format!("{n} closed-form mismatches")))
        }
        Command::Audit { kind, poly, height, k, compose_upper, samples } => match kind {
            AuditKind::Coverage => coverage(cli, require_spec(poly)?, height, k, *compose_upper),
            AuditKind::Norms => norms(cli, require_spec(poly)?, height),
            AuditKind::Bands => bands(cli, poly, height, *samples),
        },
    }
}

fn spec_of(p: &PolyArgs) -> CliResult<Option<SplitPolySpec>> {
    Ok(match (&p.poly, &p.split) {
        (Some(text), _) => Some(parse_poly(text, p.n)?),
        (None, Some(text)) => Some(parse_split(text, p.n)?),
        (None, None) => None,
    })
}

fn require_spec(p: &PolyArgs) -> CliResult<SplitPolySpec> {
    spec_of(p)?.ok_or_else(|| CliError::Usage("give the polynomial with --poly or --split".into()))
}

/// The given spec, or the one read off the characteristic polynomial.
fn spec_for(a: &IntegerMatrix, p: &PolyArgs) -> CliResult<SplitPolySpec> {
    if let Some(spec) = spec_of(p)? {
        return Ok(spec);
    }
    if let Some(n) = p.n {
        if n != a.dim() {
            return Err(Error::DimensionMismatch(format!("--n {n} but the matrix is {0}x{0}", a.dim())).into());
        }
    }
    let chi = char_poly(a);
    let (plus, minus) = chi.split_multiplicities().ok_or_else(|| Error::CharPolyMismatch {
        expected: "(x-1)^a(x+1)^b".into(),
        found: chi.to_string(),
    })?;
    Ok(SplitPolySpec::new(plus, minus)?)
}

#[derive(Clone, Copy)]
struct CountOpts {
    method: MethodArg,
    norm: NormArg,
    stratify: bool,
    k: i64,
    crude_b: bool,
    compose_upper: i64,
}

#[derive(Serialize)]
struct Stratum {
    jordan: String,
    plus: Vec<usize>,
    minus: Vec<usize>,
    count: u64,
}

fn strata_rows(strata: &std::collections::BTreeMap<JordanType, u64>) -> Vec<Stratum> {
    strata
        .iter()
        .map(|(jt, &count)| Stratum { jordan: jt.to_string(), plus: jt.plus.parts().to_vec(), minus: jt.minus.parts().to_vec(), count })
        .collect()
}

fn count(cli: &Cli, spec: SplitPolySpec, heights: &[u64], o: CountOpts) -> CliResult<Outcome> {
    let norm = match o.norm {
        NormArg::Sup => Norm::Sup,
        NormArg::Fro => Norm::Frobenius,
    };
    if norm == Norm::Frobenius && o.method != MethodArg::Brute {
        return Err(CliError::Usage("the Frobenius norm is only available with --method brute".into()));
    }
    if o.stratify && o.method != MethodArg::Brute {
        return Err(CliError::Usage("--stratify needs --method brute".into()));
    }
    let mut records: Vec<CountRecord> = Vec::new();
    let mut strata = Vec::new();
    let mut violation = None;
    for &h in heights {
        match o.method {
            MethodArg::Brute => {
                let opts = BruteOptions { norm, stratify: o.stratify, guard: cli.guard(), ..BruteOptions::default() };
                let r = brute_force_count(spec, h, opts)?;
                if let Some(s) = &r.strata {
                    strata.push(json!({ "H": h, "strata": strata_rows(s) }));
                }
                records.push(r.record);
            }
            MethodArg::Param => {
                let opts = ParamOptions { k: o.k, refined_b: !o.crude_b, compose_upper: o.compose_upper, guard: cli.guard() };
                let rec = match (spec.a(), spec.b()) {
                    (1, 2) => param_count_mixed(h, opts)?,
                    (3, 0) => param_count_unipotent(h, opts)?,
                    _ => return Err(CliError::Usage(format!("--method param supports (x-1)^3 and (x+1)^2(x-1), not {spec}"))),
                };
                records.push(rec);
            }
            MethodArg::Block => {
                let rec = block_box_count(spec, h);
                if spec.n() <= 3 && h <= 3 {
                    let set = block_box_set(spec, h)?;
                    if BigInt::from(set.len()) != BigInt::from(rec.count.clone()) {
                        violation = Some(format!("block box enumeration found {} matrices, formula gives {}", set.len(), rec.count));
                    }
                }
                records.push(rec);
            }
        }
    }
    let mut csv = String::from("method,poly,norm,H,count,distinct,seconds\n");
    for r in &records {
        csv.push_str(&format!("{},{},{},{},{},{},{:.6}\n", r.method, r.poly, r.norm, r.height, r.count, r.distinct, r.wall_seconds));
    }
    let mut result = json!({ "records": records });
    if o.stratify {
        result["strata"] = Value::Array(strata);
    }
    Ok(Outcome { result, csv: Some(csv), violation })
}

fn reduce(a: &IntegerMatrix, p: &PolyArgs) -> CliResult<Outcome> {
    let spec = spec_for(a, p)?;
    let split = primary_split(a, spec)?;
    let form = block_reduce(a, spec)?;
    form.verify(a)?;
    let (normal, exact) = normalize_jordan(&form);
    let verified = normal.verify(a);
    let jt = jordan_type(a, spec)?;
    let view = BlockNormalFormView::from(&normal);
    let out = Outcome::json(json!({
        "a": spec.a(),
        "b": spec.b(),
        "poly": spec.to_string(),
        "g": view.g,
        "X": view.x,
        "Y": view.y,
        "B": view.b_block,
        "exact_jordan": exact,
        "jordan_plus": jt.plus.parts(),
        "jordan_minus": jt.minus.parts(),
        "primary_index": split.index.to_string(),
        "block_form": BlockNormalFormView::from(&form),
    }));
    Ok(out.check(verified.is_ok(), || format!("normalized form fails verification: {verified:?}")))
}

fn jordan(a: &IntegerMatrix, p: &PolyArgs) -> CliResult<Outcome> {
    let spec = spec_for(a, p)?;
    let jt = jordan_type(a, spec)?;
    let mut result = json!({
        "a": spec.a(),
        "b": spec.b(),
        "poly": spec.to_string(),
        "jordan": jt.to_string(),
        "jordan_plus": jt.plus.parts(),
        "jordan_minus": jt.minus.parts(),
        "parameter_count": jt.parameter_count(),
    });
    if spec.is_unipotent() {
        let c = bounded_conjugator(a)?;
        result["triangularization"] = json!({
            "g": strings(&c.g),
            "U": strings(&c.u),
            "g_sup": c.g_sup.to_string(),
            "U_sup": c.u_sup.to_string(),
            "height_ratio": c.height_ratio(a),
        });
    }
    Ok(Outcome::json(result))
}

fn strings(m: &IntegerMatrix) -> Vec<Vec<String>> {
    m.row_vecs().into_iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn density(cli: &Cli, spec: SplitPolySpec, primes: &[u64], k: u32, table: bool, check: bool) -> CliResult<Outcome> {
    let n = spec.n();
    let mut reductions = Vec::new();
    if check {
        if k < 2 {
            return Err(CliError::Usage("--check-reduction needs --k 2 or more".into()));
        }
        for &p in primes {
            reductions.push(reduction_check(n, spec, p, k, cli.guard())?);
        }
    }
    let consistent = reductions.iter().all(|r| r.consistent);
    let mut result = if table {
        json!({ "rows": kappa_table(n, spec, primes, k, cli.guard())? })
    } else {
        let [p] = primes else {
            return Err(CliError::Usage("give one --prime, or use --table".into()));
        };
        to_value(residue_count(n, spec, *p, k, cli.guard())?)
    };
    if check {
        result["reduction"] = to_value(&reductions);
    }
    let out = Outcome { result, csv: None, violation: None };
    Ok(out.check(consistent, || "reduction mod p^(k-1) leaves the solution set".into()))
}

fn fit(path: &std::path::Path) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let records = if doc.is_array() {
        &doc
    } else if let Some(r) = doc.pointer("/result/records") {
        r
    } else if let Some(r) = doc.get("records") {
        r
    } else {
        return Err(Error::Parse("expected an array of records or a `count` output".into()).into());
    };
    let records: Vec<CountRecord> =
        serde_json::from_value(records.clone()).map_err(|e| Error::Parse(format!("bad count record: {e}")))?;
    let fit = fit_exponent(&records)?;
    let first = &records[0];
    Ok(Outcome::json(json!({
        "method": first.method,
        "poly": first.poly,
        "norm": first.norm,
        "points": fit.points,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "expected_slope": splitcount::free_params(first.spec.n()),
    })))
}

fn coverage(cli: &Cli, spec: SplitPolySpec, heights: &[u64], ks: &[i64], compose_upper: i64) -> CliResult<Outcome> {
    let mut reports = Vec::new();
    for &h in heights {
        for &k in ks {
            reports.push(coverage_audit(spec, h, CoverageOptions { k, compose_upper, guard: cli.guard() })?);
        }
    }
    let sound = reports.iter().all(|r| r.soundness);
    Ok(Outcome::json(json!({ "reports": reports }))
        .check(sound, || "a parametrized sweep produced a matrix outside the brute-force set".into()))
}

fn norms(cli: &Cli, spec: SplitPolySpec, heights: &[u64]) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    for &h in heights {
        rows.push(norm_comparison(spec, h, cli.guard())?);
    }
    let ok = rows.iter().all(|r| r.sandwich);
    Ok(Outcome::json(json!({ "comparisons": rows })).check(ok, || "norm sandwich fails".into()))
}

#[derive(Serialize)]
struct BandRow {
    range: u64,
    samples: u64,
    max_band_ratio: f64,
    mean_band_ratio: f64,
    max_height_ratio: f64,
    max_conjugator_sup: String,
}

/// Random conjugates `g0 F g0^{-1}` of unipotent block forms with entries
/// in `[-range, range]`, audited at their own height.
fn bands(cli: &Cli, p: &PolyArgs, ranges: &[u64], samples: u64) -> CliResult<Outcome> {
    let spec = spec_of(p)?.unwrap_or(SplitPolySpec::unipotent(p.n.unwrap_or(3)));
    if !spec.is_unipotent() {
        return Err(CliError::Usage("the band audit needs (x-1)^n".into()));
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let mut rows = Vec::new();
    for (stream_base, &range) in ranges.iter().enumerate() {
        let stats: Vec<(f64, f64, BigInt)> = (0..samples)
            .into_par_iter()
            .map(|i| -> CliResult<(f64, f64, BigInt)> {
                let mut rng = stream_rng(cli.seed, (stream_base as u64) << 32 | i);
                let (a, _) = random_conjugate(spec, range as i64, 2, &mut rng);
                let h: u64 = a.sup_norm().try_into().map_err(|_| Error::Internal("height overflow".into()))?;
                let audit = band_bound_check(&a, h.max(1))?;
                let conj = bounded_conjugator(&a)?;
                Ok((audit.max_ratio, conj.height_ratio(&a), conj.g_sup))
            })
            .collect::<CliResult<_>>()?;
        rows.push(BandRow {
            range,
            samples,
            max_band_ratio: stats.iter().map(|s| s.0).fold(0.0, f64::max),
            mean_band_ratio: stats.iter().map(|s| s.0).sum::<f64>() / samples as f64,
            max_height_ratio: stats.iter().map(|s| s.1).fold(0.0, f64::max),
            max_conjugator_sup: stats.iter().map(|s| s.2.clone()).max().unwrap_or_default().to_string(),
        });
    }
    Ok(Outcome::json(json!({ "poly": spec.to_string(), "seed": cli.seed, "bands": rows })))
}
