//! Covers `C -> P^1` given by a plane model `F(x, y) = 0`, with the cyclic
//! family `y^p = g(x)` treated separately, and their fibers over integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{self, FactorBudget};
use crate::error::{Error, Result};
use crate::kummer::{self, FieldFingerprint, KummerClass};
use crate::polyring::{self, IntPoly, Parsed, PlanePoly};

/// Largest degree handed to the factorizer when certifying covers.
const COVER_DEGREE_BOUND: usize = 4 * polyring::DEFAULT_DEGREE_BOUND;

/// How many integer specializations to try when certifying irreducibility.
const CERTIFY_TRIES: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCover {
    p: u32,
    g: IntPoly,
    input: IntPoly,
    removed: Vec<(IntPoly, u32)>,
    branch: IntPoly,
}

impl CyclicCover {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Normalized right-hand side: every multiplicity reduced mod `p`.
    pub fn g(&self) -> &IntPoly {
        &self.g
    }

    /// Right-hand side as given.
    pub fn input(&self) -> &IntPoly {
        &self.input
    }

    /// Irreducible factors whose exponents were lowered, with the amount removed.
    pub fn removed(&self) -> &[(IntPoly, u32)] {
        &self.removed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCover {
    model: PlanePoly,
    branch: IntPoly,
    certificate: BigInt,
}

impl PlaneCover {
    pub fn model(&self) -> &PlanePoly {
        &self.model
    }

    /// An integer `n` with `F(n, y)` irreducible over Q.
    pub fn certificate(&self) -> &BigInt {
        &self.certificate
    }
}

/// A cover of the projective line over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverSpec {
    Cyclic(CyclicCover),
    Plane(PlaneCover),
}

impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverSpec::Cyclic(c) => match PlanePoly::pure(c.p, &c.g) {
                Ok(m) => write!(f, "{m}"),
                Err(_) => write!(f, "y^{} - ({})", c.p, c.g),
            },
            CoverSpec::Plane(c) => write!(f, "{}", c.model),
        }
    }
}

impl Serialize for CoverSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl CoverSpec {
    /// Plane model; pure models `y^p - g(x)` with `p` prime become cyclic.
    pub fn from_model(model: PlanePoly) -> Result<Self> {
        if let Some((p, g)) = model.as_pure() {
            if arith::is_prime_u64(p as u64) {
                return normalize_cyclic(p, &g);
            }
        }
        let disc = polyring::plane_discriminant(&model);
        let branch = if disc.is_constant() {
            IntPoly::constant(BigInt::one())
        } else {
            polyring::radical(&disc)?
        };
        let certificate = certify_irreducible(&model)?;
        Ok(CoverSpec::Plane(PlaneCover {
            model,
            branch,
            certificate,
        }))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_cover(text)
    }

    pub fn as_cyclic(&self) -> Option<&CyclicCover> {
        match self {
            CoverSpec::Cyclic(c) => Some(c),
            CoverSpec::Plane(_) => None,
        }
    }

    /// Degree of the cover, i.e. the degree of `F` in `y`.
    pub fn degree(&self) -> u32 {
        match self {
            CoverSpec::Cyclic(c) => c.p,
            CoverSpec::Plane(c) => c.model.y_degree(),
        }
    }

    pub fn model(&self) -> PlanePoly {
        match self {
            CoverSpec::Cyclic(c) => PlanePoly::pure(c.p, &c.g).expect("p >= 2"),
            CoverSpec::Plane(c) => c.model.clone(),
        }
    }

    fn branch(&self) -> &IntPoly {
        match self {
            CoverSpec::Cyclic(c) => &c.branch,
            CoverSpec::Plane(c) => &c.branch,
        }
    }
}

fn specialization_points() -> impl Iterator<Item = BigInt> {
    (0..CERTIFY_TRIES).map(|k| {
        let m = (k + 1) / 2;
        BigInt::from(if k % 2 == 1 { m } else { -m })
    })
}

/// Finds `n` with `F(n, y)` irreducible. Since `F` is monic in `y`, any
/// factorization over `Q(x)` would survive specialization, so this proves
/// irreducibility.
fn certify_irreducible(model: &PlanePoly) -> Result<BigInt> {
    for n in specialization_points() {
        let fiber = model.specialize_x(&n);
        let fac = polyring::factor_over_q_with(&fiber, COVER_DEGREE_BOUND)?;
        if fac.factors.len() == 1 && fac.factors[0].1 == 1 {
            return Ok(n);
        }
    }
    Err(Error::domain(
        "covers",
        format!("could not certify that {model} is irreducible over Q(x)"),
    ))
}

/// Reduces every multiplicity in `g` modulo `p`.
///
/// Fails when no multiplicity survives, since `y^p - g` then factors.
pub fn normalize_cyclic(p: u32, g: &IntPoly) -> Result<CoverSpec> {
    if !arith::is_prime_u64(p as u64) {
        return Err(Error::domain(
            "covers",
            format!("cyclic degree {p} is not prime"),
        ));
    }
    if g.is_constant() {
        return Err(Error::domain("covers", "g must be nonconstant"));
    }
    let fac = polyring::factor_over_q_with(g, COVER_DEGREE_BOUND)?;
    if fac.factors.iter().all(|(_, e)| e % p == 0) {
        return Err(Error::domain(
            "covers",
            format!("reducible cover: {g} is a constant times a {p}-th power"),
        ));
    }
    let mut reduced = IntPoly::constant(fac.content.clone());
    let mut removed = Vec::new();
    for (f, e) in &fac.factors {
        reduced = &reduced * &f.pow(e % p);
        if *e >= p {
            removed.push((f.clone(), e - e % p));
        }
    }
    let branch = polyring::radical(&reduced)?;
    Ok(CoverSpec::Cyclic(CyclicCover {
        p,
        g: reduced,
        input: g.clone(),
        removed,
        branch,
    }))
}

fn to_terms(p: Parsed) -> std::collections::BTreeMap<(u32, u32), BigInt> {
    match p {
        Parsed::Univariate(f) => f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((i as u32, 0), c.clone()))
            .collect(),
        Parsed::Plane(m) => m.terms().clone(),
    }
}

/// Reads a cover from `F(x, y)` or `LHS = RHS`.
pub fn parse_cover(text: &str) -> Result<CoverSpec> {
    let mut parts = text.splitn(3, '=');
    let lhs = parts.next().unwrap_or("");
    let rhs = parts.next();
    if parts.next().is_some() {
        return Err(Error::domain("covers", "more than one '=' in cover"));
    }
    let mut terms = to_terms(polyring::parse_poly(lhs)?);
    if let Some(rhs) = rhs {
        let offset = lhs.len() + 1;
        let right = polyring::parse_poly(rhs).map_err(|e| match e {
            Error::Syntax { offset: o, message } => Error::Syntax {
                offset: o + offset,
                message,
            },
            other => other,
        })?;
        for (k, v) in to_terms(right) {
            let e = terms.entry(k).or_insert_with(BigInt::zero);
            *e -= v;
        }
        terms.retain(|_, v| !v.is_zero());
    }
    let ydeg = terms.keys().map(|k| k.1).max().unwrap_or(0);
    if ydeg == 0 {
        return Err(Error::domain("covers", "a cover needs y to appear"));
    }
    let top: Vec<_> = terms.iter().filter(|(k, _)| k.1 == ydeg).collect();
    if top.len() == 1 && *top[0].0 == (0, ydeg) && (-top[0].1).is_one() {
        for v in terms.values_mut() {
            *v = -v.clone();
        }
    }
    CoverSpec::from_model(PlanePoly::new(terms)?)
}

/// Radical of the finite branch locus: `rad(g)` for cyclic covers and
/// `rad(disc_y F)` for plane models.
pub fn branch_polynomial(c: &CoverSpec) -> IntPoly {
    c.branch().clone()
}

/// Factored branch locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchCheck {
    pub branch_polynomial: IntPoly,
    pub factors: Vec<IntPoly>,
    /// An irreducible factor of degree at least 2, if any.
    pub witness: Option<IntPoly>,
}

impl BranchCheck {
    pub fn nonrational(&self) -> bool {
        self.witness.is_some()
    }
}

/// Whether some finite branch point is not defined over Q.
pub fn has_nonrational_branch_point(c: &CoverSpec) -> Result<BranchCheck> {
    let b = c.branch();
    if b.is_constant() {
        return Ok(BranchCheck {
            branch_polynomial: b.clone(),
            factors: Vec::new(),
            witness: None,
        });
    }
    let fac = polyring::factor_over_q_with(b, 4 * COVER_DEGREE_BOUND)?;
    let factors: Vec<IntPoly> = fac.factors.into_iter().map(|(f, _)| f).collect();
    let witness = factors.iter().find(|f| f.degree() >= 2).cloned();
    Ok(BranchCheck {
        branch_polynomial: b.clone(),
        factors,
        witness,
    })
}

/// Number of points of `y^p = g` over `x = infinity`.
pub fn points_over_infinity(c: &CoverSpec) -> Result<u32> {
    match c {
        CoverSpec::Cyclic(c) => Ok((c.p as usize).gcd(&c.g.degree()) as u32),
        CoverSpec::Plane(_) => Err(Error::domain(
            "covers",
            "points over infinity are only computed for cyclic covers",
        )),
    }
}

/// Work limits for fiber computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberOptions {
    pub factor_budget: FactorBudget,
    pub prime_budget: usize,
}

impl Default for FiberOptions {
    fn default() -> Self {
        FiberOptions {
            factor_budget: FactorBudget::default(),
            prime_budget: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberStatus {
    Regular,
    Branch,
    Degenerate,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberPayload {
    None,
    /// Cyclic fiber `Q(g(n)^(1/p))`.
    Radical {
        value: BigInt,
        class: KummerClass,
    },
    /// Irreducible factors of `F(n, y)` with multiplicity and fingerprint.
    Factors(Vec<(IntPoly, u32, FieldFingerprint)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberSpec {
    pub n: BigInt,
    pub status: FiberStatus,
    pub payload: FiberPayload,
    /// Reason for an unresolved status.
    pub note: Option<String>,
}

fn unresolved(n: &BigInt, e: Error) -> FiberSpec {
    FiberSpec {
        n: n.clone(),
        status: FiberStatus::Unresolved,
        payload: FiberPayload::None,
        note: Some(e.to_string()),
    }
}

/// The fiber of the cover over `x = n`.
pub fn specialize(c: &CoverSpec, n: &BigInt, opts: &FiberOptions) -> FiberSpec {
    match c {
        CoverSpec::Cyclic(cy) => {
            let value = cy.g.eval(n);
            if value.is_zero() {
                return FiberSpec {
                    n: n.clone(),
                    status: FiberStatus::Branch,
                    payload: FiberPayload::None,
                    note: None,
                };
            }
            let fac = match arith::factor_with(&value, opts.factor_budget) {
                Ok(f) => f,
                Err(e) => return unresolved(n, e),
            };
            let class = KummerClass::from_factorization(&fac, cy.p as u64);
            let status = if class.is_trivial() {
                FiberStatus::Degenerate
            } else {
                FiberStatus::Regular
            };
            FiberSpec {
                n: n.clone(),
                status,
                payload: FiberPayload::Radical { value, class },
                note: None,
            }
        }
        CoverSpec::Plane(pl) => {
            let status = if pl.branch.eval(n).is_zero() {
                FiberStatus::Branch
            } else {
                FiberStatus::Regular
            };
            let fiber = pl.model.specialize_x(n);
            let fac = match polyring::factor_over_q_with(&fiber, COVER_DEGREE_BOUND) {
                Ok(f) => f,
                Err(e) => return unresolved(n, e),
            };
            let mut parts = Vec::with_capacity(fac.factors.len());
            for (f, e) in fac.factors {
                match kummer::fingerprint_unchecked(&f, opts.prime_budget, opts.factor_budget) {
                    Ok(fp) => parts.push((f, e, fp)),
                    Err(err) => return unresolved(n, err),
                }
            }
            FiberSpec {
                n: n.clone(),
                status,
                payload: FiberPayload::Factors(parts),
                note: None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn cyclic(p: u32, c: &[i64]) -> CoverSpec {
        normalize_cyclic(p, &poly(c)).unwrap()
    }

    #[test]
    fn elliptic_curve() {
        let c = parse_cover("y^2 - (x^3 - x)").unwrap();
        let cy = c.as_cyclic().unwrap();
        assert_eq!(cy.p(), 2);
        assert_eq!(cy.g(), &poly(&[0, -1, 0, 1]));
        assert_eq!(points_over_infinity(&c).unwrap(), 1);
        assert_eq!(branch_polynomial(&c), poly(&[0, -1, 0, 1]));
        let check = has_nonrational_branch_point(&c).unwrap();
        assert!(!check.nonrational());
        assert_eq!(check.factors.len(), 3);
        assert_eq!(c.to_string(), "y^2 - x^3 + x");
    }

    #[test]
    fn nonrational_branch_witness() {
        let c = cyclic(2, &[1, 0, 0, 0, 1]);
        let check = has_nonrational_branch_point(&c).unwrap();
        assert_eq!(check.witness, Some(poly(&[1, 0, 0, 0, 1])));
        assert_eq!(points_over_infinity(&c).unwrap(), 2);
        let c = cyclic(3, &[-2, 0, 1]);
        assert_eq!(
            has_nonrational_branch_point(&c).unwrap().witness,
            Some(poly(&[-2, 0, 1]))
        );
    }

    #[test]
    fn normalization() {
        // x^2 (x+1)^3 -> (x+1)
        let g = &poly(&[0, 0, 1]) * &poly(&[1, 1]).pow(3);
        let c = normalize_cyclic(2, &g).unwrap();
        let cy = c.as_cyclic().unwrap();
        assert_eq!(cy.g(), &poly(&[1, 1]));
        assert_eq!(cy.removed(), &[(poly(&[0, 1]), 2), (poly(&[1, 1]), 2)]);
        assert_eq!(cy.input(), &g);

        assert!(normalize_cyclic(3, &poly(&[0, 0, 0, 1])).is_err());
        assert!(normalize_cyclic(2, &poly(&[0, 0, 2])).is_err());
        assert!(normalize_cyclic(4, &poly(&[0, 1])).is_err());
        assert!(normalize_cyclic(2, &poly(&[5])).is_err());
    }

    #[test]
    fn parsing_forms() {
        let a = parse_cover("y^2 = x^3 - x").unwrap();
        let b = parse_cover("x^3 - x = y^2").unwrap();
        let c = parse_cover("y^2 - x^3 + x").unwrap();
        assert_eq!(a, c);
        assert_eq!(b, c);
        assert!(matches!(
            parse_cover("y^3 + x*y + x").unwrap(),
            CoverSpec::Plane(_)
        ));
        assert!(matches!(
            parse_cover("y^4 - x").unwrap(),
            CoverSpec::Plane(_)
        ));
        assert!(parse_cover("x^2 + 1").is_err());
        assert!(parse_cover("y^2 = x = 1").is_err());
        match parse_cover("y^2 = x +* 1") {
            Err(Error::Syntax { offset, .. }) => assert!(offset >= 5),
            other => panic!("{other:?}"),
        }
        // (y - x)(y + x) has no irreducible specialization
        assert!(parse_cover("y^2 - x^2 + y - y").is_err());
    }

    #[test]
    fn fiber_statuses() {
        let c = cyclic(2, &[0, 1]);
        let opts = FiberOptions::default();
        let f = |n: i64| specialize(&c, &BigInt::from(n), &opts);
        assert_eq!(f(0).status, FiberStatus::Branch);
        assert_eq!(f(4).status, FiberStatus::Degenerate);
        assert_eq!(f(2).status, FiberStatus::Regular);
        match f(12).payload {
            FiberPayload::Radical { value, class } => {
                assert_eq!(value, BigInt::from(12));
                assert_eq!(class.kernel().reconstruct(), BigInt::from(3));
            }
            other => panic!("{other:?}"),
        }
        let tiny = FiberOptions {
            factor_budget: FactorBudget { rho_iterations: 1 },
            prime_budget: 10,
        };
        let big = cyclic(2, &[0, 1]);
        let fiber = specialize(&big, &BigInt::from(1_000_003i64 * 1_000_033), &tiny);
        assert_eq!(fiber.status, FiberStatus::Unresolved);
        assert!(fiber.note.is_some());
    }

    #[test]
    fn plane_fibers() {
        let c = parse_cover("y^3 + x*y + 1").unwrap();
        assert_eq!(c.degree(), 3);
        // disc_y = -4x^3 - 27
        assert_eq!(branch_polynomial(&c), poly(&[-27, 0, 0, -4]));
        assert!(points_over_infinity(&c).is_err());
        let opts = FiberOptions::default();
        // y^3 - 2y + 1 = (y - 1)(y^2 + y - 1)
        let fiber = specialize(&c, &BigInt::from(-2), &opts);
        assert_eq!(fiber.status, FiberStatus::Regular);
        match fiber.payload {
            FiberPayload::Factors(v) => {
                let degrees: Vec<u32> = v.iter().map(|t| t.2.degree).collect();
                assert_eq!(degrees, vec![1, 2]);
            }
            other => panic!("{other:?}"),
        }
        // y^3 - 3y + 1 is irreducible
        let fiber = specialize(&c, &BigInt::from(-3), &opts);
        match fiber.payload {
            FiberPayload::Factors(v) => assert_eq!(v.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    /// Counts orbits of the sheet permutation picked up by following the `p`
    /// roots of `y^p = g(x)` once around a large circle, tracking the argument
    /// of `g` numerically.
    fn monodromy_orbits_at_infinity(p: u32, g: &IntPoly) -> u32 {
        let coeffs: Vec<f64> = g
            .coeffs()
            .iter()
            .map(|c| c.to_string().parse().unwrap())
            .collect();
        let bound = coeffs.iter().map(|c| c.abs()).sum::<f64>() / coeffs.last().unwrap().abs();
        let radius = 2.0 * bound + 2.0;
        let eval = |t: f64| {
            let (zr, zi) = (radius * t.cos(), radius * t.sin());
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for c in coeffs.iter().rev() {
                let nr = re * zr - im * zi + c;
                im = re * zi + im * zr;
                re = nr;
            }
            im.atan2(re)
        };
        let steps = 20_000;
        let mut winding = 0.0;
        let mut prev = eval(0.0);
        for k in 1..=steps {
            let a = eval(2.0 * std::f64::consts::PI * k as f64 / steps as f64);
            let mut d = a - prev;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            winding += d;
            prev = a;
        }
        let shift = (winding / (2.0 * std::f64::consts::PI)).round() as i64;
        // root k has argument (arg g + 2 pi k)/p, so a full turn sends k to k + shift
        let mut seen = vec![false; p as usize];
        let mut orbits = 0;
        for start in 0..p as usize {
            if seen[start] {
                continue;
            }
            orbits += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = (k as i64 + shift).rem_euclid(p as i64) as usize;
            }
        }
        orbits
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn infinity_matches_monodromy(
            p in prop::sample::select(vec![2u32, 3, 5, 7]),
            coeffs in prop::collection::vec(-6i64..=6, 2..8),
            lead in 1i64..4,
        ) {
            let mut c = coeffs;
            c.push(lead);
            let g = poly(&c);
            if let Ok(cover) = normalize_cyclic(p, &g) {
                let cy = cover.as_cyclic().unwrap();
                prop_assert_eq!(points_over_infinity(&cover).unwrap(), monodromy_orbits_at_infinity(p, cy.g()));
            }
        }

        #[test]
        fn normalization_is_idempotent(
            p in prop::sample::select(vec![2u32, 3]),
            roots in prop::collection::vec((-4i64..=4, 1u32..5), 1..4),
        ) {
            let g = roots.iter().fold(IntPoly::constant(BigInt::one()), |acc, (r, e)| {
                &acc * &IntPoly::linear_root(BigInt::from(*r)).pow(*e)
            });
            if let Ok(once) = normalize_cyclic(p, &g) {
                let g1 = once.as_cyclic().unwrap().g().clone();
                let twice = normalize_cyclic(p, &g1).unwrap();
                prop_assert_eq!(twice.as_cyclic().unwrap().g(), &g1);
                prop_assert!(twice.as_cyclic().unwrap().removed().is_empty());
            }
        }
    }
}
