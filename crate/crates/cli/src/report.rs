//! Report envelopes shared by every subcommand.

use std::str::FromStr;

use fiberfield::covers::{BranchCheck, CoverSpec};
use fiberfield::diversity::{CompositumReport, DiversityReport, Method, NormCollision, SkipReason};
use fiberfield::kummer::{self, KummerClass};
use fiberfield::polyring::IntPoly;
use fiberfield::sieve::SieveReport;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::{usage, CliError, OutputFormat, RunConfig, Subcommand, TOOL_VERSION};

/// A computed result before rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub series: Value,
    pub summary: Value,
    pub skipped: Value,
    pub assumptions: Vec<String>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Report {
    pub fn to_json(&self, config: &RunConfig) -> String {
        let doc = json!({
            "tool_version": TOOL_VERSION,
            "config": config_json(config),
            "series": self.series,
            "summary": self.summary,
            "skipped": self.skipped,
            "assumptions": self.assumptions,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.into());
        w.write_record(&self.csv_header).map_err(io)?;
        for row in &self.csv_rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
    }
}

/// Parameters that determine the report; the worker count and output path
/// are left out so reports do not depend on them.
fn config_json(c: &RunConfig) -> Value {
    let mut v = json!({
        "subcommand": c.command.name(),
        "cover": c.cover,
        "poly": c.poly,
        "p": c.p,
        "N": c.n,
        "method": c.method.tag(),
        "primes": c.primes,
        "euler_bound": c.euler_bound,
        "factor_budget": c.factor_budget,
        "output": match c.output {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        },
    });
    if let Subcommand::ClassifyRadical { a, p, with } = &c.command {
        v["a"] = json!(a);
        v["p"] = json!(p);
        v["with"] = json!(with);
    }
    v
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn cover_assumptions(cover: &CoverSpec) -> Vec<String> {
    match cover {
        CoverSpec::Cyclic(_) => strings(&[
            "the cover is the normalized cyclic model y^p = g(x); factors of g with exponent divisible by p are removed",
        ]),
        CoverSpec::Plane(_) => strings(&[
            "geometric irreducibility of the plane model is assumed; only irreducibility over Q(x) is certified, by an irreducible specialization",
        ]),
    }
}

fn skipped_counts(skipped: &[fiberfield::diversity::Skipped]) -> Value {
    let count = |r: SkipReason| skipped.iter().filter(|s| s.reason == r).count();
    json!({
        "branch": count(SkipReason::Branch),
        "degenerate-counted-as-Q": count(SkipReason::DegenerateCountedAsQ),
        "unresolved": count(SkipReason::Unresolved),
    })
}

fn kept_rows(series: &[u64], skipped: &[fiberfield::diversity::Skipped]) -> Vec<Vec<String>> {
    let mut skip = skipped.iter().map(|s| s.n).peekable();
    let mut rows = Vec::new();
    for (i, v) in series.iter().enumerate() {
        let n = i as u64 + 1;
        if skip.peek() == Some(&n) {
            skip.next();
            continue;
        }
        rows.push(vec![n.to_string(), v.to_string()]);
    }
    rows
}

pub(crate) fn weak(cover: &CoverSpec, r: &DiversityReport) -> Report {
    let mut assumptions = cover_assumptions(cover);
    assumptions.push(
        "branch fibers are skipped; fibers where the fiber field collapses to Q count Q once"
            .into(),
    );
    assumptions.push(
        match r.method {
            Method::Exact => "fiber fields Q(g(n)^(1/p)) are compared through Kummer classes up to exponent twists",
            Method::Ramified => "ramified-set counts are a lower bound; primes dividing p, the leading coefficient of g and disc(rad g) are ignored",
            Method::Fingerprint => "fingerprint counts are a lower bound; fibers are told apart only when a shared unramified prime splits differently",
        }
        .into(),
    );
    Report {
        series: r
            .series
            .iter()
            .enumerate()
            .map(|(i, d)| json!({"n": i + 1, "D": d}))
            .collect(),
        summary: json!({
            "cover": r.cover,
            "N": r.n,
            "method": r.method.tag(),
            "D": r.distinct(),
            "ratio": r.ratio,
            "skipped_by_reason": skipped_counts(&r.skipped),
        }),
        skipped: serde_json::to_value(&r.skipped).expect("serializable"),
        assumptions,
        csv_header: strings(&["n", "D"]),
        csv_rows: kept_rows(&r.series, &r.skipped),
    }
}

pub(crate) fn strong(r: &CompositumReport) -> Report {
    let rank = r.rank_series.last().copied().unwrap_or(0);
    Report {
        series: r
            .rank_series
            .iter()
            .zip(&r.log_degree)
            .enumerate()
            .map(|(i, (k, l))| json!({"n": i + 1, "r": k, "log_degree": l}))
            .collect(),
        summary: json!({
            "cover": r.cover,
            "p": r.p,
            "N": r.n,
            "rank": rank,
            "degree": format!("{}^{}", r.p, rank),
            "log_degree": r.log_degree.last().copied().unwrap_or(0.0),
            "distinct_primes": r.distinct_primes,
        }),
        skipped: serde_json::to_value(&r.skipped).expect("serializable"),
        assumptions: strings(&[
            "the cover is the normalized cyclic model y^p = g(x); factors of g with exponent divisible by p are removed",
            "the compositum has degree p^r over Q because [Q(zeta_p):Q] = p - 1 is prime to p",
        ]),
        csv_header: strings(&["n", "r"]),
        csv_rows: kept_rows(&r.rank_series, &r.skipped),
    }
}

pub(crate) fn squarefree(r: &SieveReport, flags: &[bool]) -> Report {
    let mut checkpoints = Vec::new();
    let mut k = 10u64;
    while k < r.n {
        checkpoints.push(k);
        k = k.saturating_mul(10);
    }
    checkpoints.push(r.n);
    let mut running = 0u64;
    let mut series = Vec::new();
    let mut next = checkpoints.iter().peekable();
    for (i, f) in flags.iter().enumerate() {
        running += u64::from(*f);
        let n = i as u64 + 1;
        if next.peek() == Some(&&n) {
            next.next();
            series.push(json!({"N": n, "count": running, "density": running as f64 / n as f64}));
        }
    }
    Report {
        series: Value::Array(series),
        summary: json!({
            "h": r.h.to_string(),
            "N": r.n,
            "count": r.count,
            "density": r.density,
            "euler_product": r.euler_product,
            "euler_bound": r.euler_bound,
            "gap": (r.density - r.euler_product).abs(),
            "fixed_square_primes": r.fixed_square_primes,
            "sieve_bound": r.sieve_bound,
            "factored_values": r.factored_values,
        }),
        skipped: json!([]),
        assumptions: strings(&[
            "squarefreeness is tested away from primes whose square divides every value of h",
            "the Euler product is truncated at the given bound",
        ]),
        csv_header: strings(&["n", "squarefree"]),
        csv_rows: flags
            .iter()
            .enumerate()
            .map(|(i, f)| vec![(i + 1).to_string(), u8::from(*f).to_string()])
            .collect(),
    }
}

fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => BigInt::from_str(n.trim())
            .ok()
            .zip(BigInt::from_str(d.trim()).ok())
            .filter(|(_, d)| *d != BigInt::from(0))
            .map(|(n, d)| BigRational::new(n, d)),
        None => BigInt::from_str(t).ok().map(BigRational::from_integer),
    };
    parsed.ok_or_else(|| usage(format!("{text:?} is not a rational number")))
}

fn class_json(c: &KummerClass) -> Value {
    json!({
        "kernel": c.kernel().to_string(),
        "kernel_value": c.kernel().reconstruct().to_string(),
        "canonical": c.canonical().to_string(),
        "canonical_value": c.canonical().reconstruct().to_string(),
        "trivial": c.is_trivial(),
        "support": c.support().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    })
}

pub(crate) fn classify(a: &str, p: u64, with: Option<&str>) -> Result<Report, CliError> {
    let ra = parse_rational(a)?;
    let class = kummer::radical_class(&ra, p)?;
    let mut summary = json!({"a": ra.to_string(), "p": p, "class": class_json(&class)});
    let mut rows = vec![
        vec!["a".to_string(), ra.to_string()],
        vec!["p".to_string(), p.to_string()],
        vec!["kernel".to_string(), class.kernel().to_string()],
        vec!["canonical".to_string(), class.canonical().to_string()],
        vec!["trivial".to_string(), class.is_trivial().to_string()],
    ];
    if let Some(b) = with {
        let rb = parse_rational(b)?;
        let other = kummer::radical_class(&rb, p)?;
        let iso = kummer::radical_fields_isomorphic(&ra, &rb, p)?;
        summary["with"] = json!({"b": rb.to_string(), "class": class_json(&other)});
        summary["isomorphic"] = json!(iso);
        rows.push(vec!["b".to_string(), rb.to_string()]);
        rows.push(vec!["isomorphic".to_string(), iso.to_string()]);
    }
    Ok(Report {
        series: json!([]),
        summary,
        skipped: json!([]),
        assumptions: strings(&[
            "radicands are compared modulo p-th powers and the twists a -> a^j",
        ]),
        csv_header: strings(&["key", "value"]),
        csv_rows: rows,
    })
}

pub(crate) fn branch(cover: &CoverSpec, check: &BranchCheck, points: Option<u32>) -> Report {
    let mut cases = Vec::new();
    if check.nonrational() {
        cases.push("nonrational-branch-point");
    }
    if points.is_some_and(|k| k >= 3) {
        cases.push("three-or-more-points-over-infinity");
    }
    if cases.is_empty() {
        cases.push("neither");
    }
    let mut assumptions = cover_assumptions(cover);
    assumptions.push("only finite branch points are tested for rationality".into());
    if points.is_none() {
        assumptions.push("points over infinity are only computed for cyclic covers".into());
    }
    Report {
        series: check
            .factors
            .iter()
            .map(|f| json!({"factor": f.to_string(), "degree": f.degree()}))
            .collect(),
        summary: json!({
            "cover": cover.to_string(),
            "branch_polynomial": check.branch_polynomial.to_string(),
            "factor_degrees": check.factors.iter().map(IntPoly::degree).collect::<Vec<_>>(),
            "nonrational_branch_point": check.nonrational(),
            "witness": check.witness.as_ref().map(|w| w.to_string()),
            "points_over_infinity": points,
            "cases": cases,
        }),
        skipped: json!([]),
        assumptions,
        csv_header: strings(&["factor", "degree"]),
        csv_rows: check
            .factors
            .iter()
            .map(|f| vec![f.to_string(), f.degree().to_string()])
            .collect(),
    }
}

pub(crate) fn norm(h: &IntPoly, n: u64, c: &NormCollision) -> Report {
    Report {
        series: json!([]),
        summary: json!({
            "h": h.to_string(),
            "N": n,
            "max_multiplicity": c.max_multiplicity,
            "witness": c.witness.to_string(),
            "witness_inputs": c.witness_inputs,
            "bound": c.bound,
            "within_bound": c.max_multiplicity <= c.bound,
        }),
        skipped: json!([]),
        assumptions: strings(&["multiplicities count n <= N with equal |h(n)|"]),
        csv_header: strings(&["max_multiplicity", "witness", "bound"]),
        csv_rows: vec![vec![
            c.max_multiplicity.to_string(),
            c.witness.to_string(),
            c.bound.to_string(),
        ]],
    }
}
