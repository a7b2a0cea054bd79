//! Counting distinct fiber fields over `x = 1..N` and the rank of the
//! subgroup of `Q*/(Q*)^p` generated by the fiber radicands.

mod rank;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, Factorization};
use crate::covers::{self, CoverSpec, CyclicCover, FiberOptions, FiberPayload, FiberStatus};
use crate::error::{Error, Result};
use crate::kummer::{self, FieldFingerprint, KummerClass};
use crate::polyring::{self, IntPoly};

use rank::ExponentSpan;

/// How distinct fiber fields are recognized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    /// Canonical Kummer classes; exact for cyclic covers.
    #[serde(rename = "exact-kummer")]
    Exact,
    /// Ramified primes outside a fixed excluded set; a lower bound.
    #[serde(rename = "ramified-set")]
    Ramified,
    /// Splitting-type fingerprints; a lower bound, also for plane covers.
    #[serde(rename = "fingerprint")]
    Fingerprint,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Exact => "exact-kummer",
            Method::Ramified => "ramified-set",
            Method::Fingerprint => "fingerprint",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-kummer" => Ok(Method::Exact),
            "ramified" | "ramified-set" => Ok(Method::Ramified),
            "fingerprint" => Ok(Method::Fingerprint),
            other => Err(Error::domain(
                "diversity",
                format!("unknown method {other:?}"),
            )),
        }
    }
}

/// Worker count and per-fiber work limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EngineOptions {
    /// Threads for fiber computations; 0 picks the rayon default.
    pub jobs: usize,
    pub fiber: FiberOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    Branch,
    #[serde(rename = "degenerate-counted-as-Q")]
    DegenerateCountedAsQ,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub n: u64,
    pub reason: SkipReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiversityReport {
    pub cover: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub method: Method,
    /// `series[i]` is D(i + 1).
    pub series: Vec<u64>,
    pub skipped: Vec<Skipped>,
    pub ratio: f64,
}

impl DiversityReport {
    pub fn distinct(&self) -> u64 {
        self.series.last().copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositumReport {
    pub cover: String,
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u64,
    /// `rank_series[i]` is r(i + 1); the compositum has degree p^r.
    pub rank_series: Vec<u64>,
    /// r(n) ln p, the natural log of the compositum degree.
    pub log_degree: Vec<f64>,
    pub skipped: Vec<Skipped>,
    pub distinct_primes: usize,
}

fn run_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::domain("diversity", format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn require_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("diversity", "N >= 1 required"))
    } else {
        Ok(())
    }
}

/// What a fiber contributes to the count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Signature {
    Class(KummerClass),
    Ramified(BTreeSet<BigUint>),
    Fingerprints(Vec<FieldFingerprint>),
}

struct Outcome {
    status: FiberStatus,
    signature: Option<Signature>,
    note: Option<String>,
}

/// Primes that may ramify in every fiber for reasons unrelated to `g(n)`:
/// those dividing `p`, `lc(g)` and `disc(rad g)`.
pub fn excluded_primes(c: &CyclicCover, budget: arith::FactorBudget) -> Result<BTreeSet<BigUint>> {
    let mut out = BTreeSet::new();
    out.insert(BigUint::from(c.p()));
    let rad = polyring::radical(c.g())?;
    for v in [c.g().leading(), polyring::discriminant(&rad)?] {
        if !v.is_zero() {
            out.extend(arith::factor_with(&v, budget)?.primes().cloned());
        }
    }
    Ok(out)
}

/// Greedy set of fibers that are pairwise provably distinct.
#[derive(Default)]
struct FingerprintCounter {
    literal: HashSet<Vec<FieldFingerprint>>,
    reps: Vec<Vec<FieldFingerprint>>,
}

/// Two multisets of fields differ if their sizes differ or one contains a
/// field provably absent from the other.
fn multisets_differ(a: &[FieldFingerprint], b: &[FieldFingerprint]) -> bool {
    let missing = |x: &[FieldFingerprint], y: &[FieldFingerprint]| {
        x.iter().any(|f| y.iter().all(|g| f.certifies_distinct(g)))
    };
    a.len() != b.len() || missing(a, b) || missing(b, a)
}

impl FingerprintCounter {
    fn insert(&mut self, s: Vec<FieldFingerprint>) -> bool {
        if self.literal.contains(&s) {
            return false;
        }
        let new = self.reps.iter().all(|r| multisets_differ(r, &s));
        if new {
            self.reps.push(s.clone());
        }
        self.literal.insert(s);
        new
    }
}

fn fiber_outcome(
    cover: &CoverSpec,
    method: Method,
    excluded: &BTreeSet<BigUint>,
    n: u64,
    opts: &FiberOptions,
) -> Outcome {
    let fiber = covers::specialize(cover, &BigInt::from(n), opts);
    let mut out = Outcome {
        status: fiber.status,
        signature: None,
        note: fiber.note,
    };
    if matches!(fiber.status, FiberStatus::Branch | FiberStatus::Unresolved) {
        return out;
    }
    out.signature = match (fiber.payload, method) {
        (FiberPayload::Radical { class, .. }, Method::Exact) => Some(Signature::Class(class)),
        (FiberPayload::Radical { class, .. }, Method::Ramified) => Some(Signature::Ramified(
            kummer::ramified_support(&class, excluded),
        )),
        (FiberPayload::Radical { class, .. }, Method::Fingerprint) => {
            let fp = if class.is_trivial() {
                Ok(FieldFingerprint::rational(opts.prime_budget))
            } else {
                let model = kummer::pure_polynomial(&class.kernel().reconstruct(), class.p());
                kummer::fingerprint_unchecked(&model, opts.prime_budget, opts.factor_budget)
            };
            match fp {
                Ok(fp) => Some(Signature::Fingerprints(vec![fp])),
                Err(e) => {
                    out.status = FiberStatus::Unresolved;
                    out.note = Some(e.to_string());
                    None
                }
            }
        }
        (FiberPayload::Factors(parts), _) => {
            let mut fps: Vec<FieldFingerprint> = parts.into_iter().map(|(_, _, fp)| fp).collect();
            fps.sort();
            Some(Signature::Fingerprints(fps))
        }
        (FiberPayload::None, _) => None,
    };
    out
}

/// Distinct fiber fields among `x = 1..=n`, as a running series.
///
/// Branch and unresolved fibers are skipped; degenerate fibers contribute
/// the field Q once.
pub fn weak_diversity_count(
    cover: &CoverSpec,
    n: u64,
    method: Method,
    opts: &EngineOptions,
) -> Result<DiversityReport> {
    require_n(n)?;
    let excluded = match (cover, method) {
        (CoverSpec::Plane(_), Method::Exact | Method::Ramified) => {
            return Err(Error::domain(
                "diversity",
                format!("method {method} needs a cyclic cover y^p = g(x)"),
            ))
        }
        (CoverSpec::Cyclic(c), Method::Ramified) => excluded_primes(c, opts.fiber.factor_budget)?,
        _ => BTreeSet::new(),
    };
    let fiber_opts = opts.fiber;
    let outcomes: Vec<Outcome> = run_pool(opts.jobs, || {
        (1..=n)
            .into_par_iter()
            .map(|k| fiber_outcome(cover, method, &excluded, k, &fiber_opts))
            .collect()
    })?;

    let mut seen: HashSet<Signature> = HashSet::new();
    let mut fingerprints = FingerprintCounter::default();
    let mut count = 0u64;
    let mut series = Vec::with_capacity(n as usize);
    let mut skipped = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        let k = i as u64 + 1;
        let reason = match o.status {
            FiberStatus::Branch => Some(SkipReason::Branch),
            FiberStatus::Unresolved => Some(SkipReason::Unresolved),
            FiberStatus::Degenerate => Some(SkipReason::DegenerateCountedAsQ),
            FiberStatus::Regular => None,
        };
        if let Some(reason) = reason {
            skipped.push(Skipped {
                n: k,
                reason,
                detail: o.note,
            });
        }
        let new = match o.signature {
            Some(Signature::Fingerprints(fps)) => fingerprints.insert(fps),
            Some(sig) => seen.insert(sig),
            None => false,
        };
        if new {
            count += 1;
        }
        series.push(count);
    }
    Ok(DiversityReport {
        cover: cover.to_string(),
        n,
        method,
        series,
        skipped,
        ratio: count as f64 / n as f64,
    })
}

/// F_p-rank of the exponent vectors of `g(1), ..., g(n)`, so that the
/// compositum of the fiber fields has degree `p^r`.
pub fn strong_diversity_rank(
    cover: &CoverSpec,
    n: u64,
    opts: &EngineOptions,
) -> Result<CompositumReport> {
    require_n(n)?;
    let cyc = cover.as_cyclic().ok_or_else(|| {
        Error::domain(
            "diversity",
            "the compositum rank needs a cyclic cover y^p = g(x)",
        )
    })?;
    let budget = opts.fiber.factor_budget;
    let values: Vec<std::result::Result<Option<Factorization>, Error>> =
        run_pool(opts.jobs, || {
            (1..=n)
                .into_par_iter()
                .map(|k| {
                    let v = cyc.g().eval(&BigInt::from(k));
                    if v.is_zero() {
                        Ok(None)
                    } else {
                        arith::factor_with(&v, budget).map(Some)
                    }
                })
                .collect()
        })?;
    let p = cyc.p();
    let mut span = ExponentSpan::new(p as u64);
    let mut rank_series = Vec::with_capacity(n as usize);
    let mut skipped = Vec::new();
    for (i, v) in values.into_iter().enumerate() {
        let k = i as u64 + 1;
        match v {
            Ok(Some(f)) => {
                span.insert(&f);
            }
            Ok(None) => skipped.push(Skipped {
                n: k,
                reason: SkipReason::Branch,
                detail: None,
            }),
            Err(e) => {
                return Err(Error::budget(
                    "diversity",
                    format!("could not factor g({k}): {e}"),
                ))
            }
        }
        rank_series.push(span.rank() as u64);
    }
    let ln_p = (p as f64).ln();
    Ok(CompositumReport {
        cover: cover.to_string(),
        p,
        n,
        log_degree: rank_series.iter().map(|&r| r as f64 * ln_p).collect(),
        rank_series,
        skipped,
        distinct_primes: span.primes_seen(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormCollision {
    pub max_multiplicity: u64,
    /// Smallest `|h(n)|` attaining the maximum.
    pub witness: BigInt,
    /// Inputs `n` with `|h(n)| = witness`.
    pub witness_inputs: Vec<u64>,
    pub bound: u64,
}

/// Largest number of `n <= N` sharing one value of `|h(n)|`.
pub fn norm_collision_check(h: &IntPoly, n: u64) -> Result<NormCollision> {
    require_n(n)?;
    if h.is_constant() {
        return Err(Error::domain(
            "diversity",
            "norm collisions need a non-constant polynomial",
        ));
    }
    let mut hits: HashMap<BigInt, Vec<u64>> = HashMap::new();
    for k in 1..=n {
        hits.entry(h.eval(&BigInt::from(k)).abs())
            .or_default()
            .push(k);
    }
    let max = hits.values().map(Vec::len).max().unwrap_or(0);
    let (witness, inputs) = hits
        .into_iter()
        .filter(|(_, v)| v.len() == max)
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("n >= 1");
    let bound = 2 * h.degree() as u64;
    debug_assert!(max as u64 <= bound);
    Ok(NormCollision {
        max_multiplicity: max as u64,
        witness,
        witness_inputs: inputs,
        bound,
    })
}

/// All three counting methods on one cyclic cover.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodComparison {
    pub exact: DiversityReport,
    pub ramified: DiversityReport,
    pub fingerprint: DiversityReport,
}

impl MethodComparison {
    pub fn totals(&self) -> BTreeMap<&'static str, u64> {
        [&self.exact, &self.ramified, &self.fingerprint]
            .into_iter()
            .map(|r| (r.method.tag(), r.distinct()))
            .collect()
    }
}

/// Runs every method and checks that both bounds stay below the exact count
/// on every prefix.
pub fn compare_methods(
    cover: &CoverSpec,
    n: u64,
    opts: &EngineOptions,
) -> Result<MethodComparison> {
    if cover.as_cyclic().is_none() {
        return Err(Error::domain(
            "diversity",
            "method comparison needs a cyclic cover",
        ));
    }
    let exact = weak_diversity_count(cover, n, Method::Exact, opts)?;
    let ramified = weak_diversity_count(cover, n, Method::Ramified, opts)?;
    let fingerprint = weak_diversity_count(cover, n, Method::Fingerprint, opts)?;
    for lower in [&ramified, &fingerprint] {
        if let Some(k) = (0..exact.series.len()).find(|&i| lower.series[i] > exact.series[i]) {
            return Err(Error::domain(
                "diversity",
                format!(
                    "{} count {} exceeds exact count {} at n = {}",
                    lower.method,
                    lower.series[k],
                    exact.series[k],
                    k + 1
                ),
            ));
        }
    }
    Ok(MethodComparison {
        exact,
        ramified,
        fingerprint,
    })
}
