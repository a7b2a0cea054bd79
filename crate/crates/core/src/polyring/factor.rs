//! Factorization over Q: squarefree decomposition, factorization modulo a
//! good prime, quadratic Hensel lifting and subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{modp, IntPoly};
use crate::arith;
use crate::error::{Error, Result};

/// Default degree limit for [`factor_over_q`].
pub const DEFAULT_DEGREE_BOUND: usize = 12;

/// Reduction primes are searched below this bound.
const PRIME_SEARCH_LIMIT: u64 = 20_000;

/// Good reduction primes compared before picking the one with fewest factors.
const PRIME_CANDIDATES: usize = 4;

/// `content * prod factor^multiplicity`, factors primitive and irreducible
/// with positive leading coefficient, sorted by degree then coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibleFactorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl IrreducibleFactorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }

    pub fn has_repeated_factor(&self) -> bool {
        self.factors.iter().any(|(_, e)| *e > 1)
    }
}

/// Yun's algorithm over Z: primitive pairwise coprime squarefree `s_i` with
/// `pp(f) = prod s_i^i`. Constant factors are omitted.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let a = f.primitive_part();
    if a.is_constant() {
        return Vec::new();
    }
    let b = a.derivative();
    let c = a.gcd(&b);
    let mut w = a.div_exact(&c).expect("gcd divides");
    let mut y = b.div_exact(&c).expect("gcd divides derivative");
    let mut z = &y - &w.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !w.is_constant() {
        let g = if z.is_zero() {
            w.primitive_part()
        } else {
            w.gcd(&z)
        };
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        w = w.div_exact(&g).expect("gcd divides");
        y = z.div_exact(&g).expect("gcd divides");
        z = &y - &w.derivative();
        i += 1;
    }
    out
}

/// Separable polynomial with the same roots and the same leading coefficient
/// as `g`. The content is kept.
pub fn radical(g: &IntPoly) -> Result<IntPoly> {
    if g.is_constant() {
        return Err(Error::domain(
            "polyring",
            "radical of a constant polynomial",
        ));
    }
    let parts = squarefree_decomposition(g);
    let prod = parts
        .iter()
        .fold(IntPoly::constant(BigInt::one()), |acc, (s, _)| &acc * s);
    // lc(g) = content * prod lc(s_i)^i, so the ratio below is integral.
    let ratio = g.leading() / prod.leading();
    Ok(prod.scale(&ratio))
}

fn rational_divrem(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let t = &r[i + dd] / &den[dd];
        for (j, c) in den.iter().enumerate() {
            let v = &t * c;
            r[i + j] -= v;
        }
        q[i] = t;
    }
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    (q, r)
}

fn denominator_lcm(coeffs: &[BigRational]) -> BigInt {
    coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Constants making the divisibility ladder `h | g | h^(p-1)` integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderConstants {
    /// The radical of `g`.
    pub h: IntPoly,
    /// `h(n)` divides `c_lower * g(n)` for every integer `n`.
    pub c_lower: BigInt,
    /// `g(n)` divides `c_upper * h(n)^(p-1)` for every integer `n`.
    pub c_upper: BigInt,
}

/// Computes `h = radical(g)` and the smallest positive integers clearing the
/// denominators of `g / h` and `h^(p-1) / g` in Q[x]. Requires every root
/// multiplicity of `g` to be at most `p - 1`.
pub fn ladder_constants(g: &IntPoly, p: u32) -> Result<LadderConstants> {
    let h = radical(g)?;
    if squarefree_decomposition(g).iter().any(|(_, e)| *e >= p) {
        return Err(Error::domain(
            "polyring",
            format!("root multiplicities of {g} must be at most {}", p - 1),
        ));
    }
    let (u, r) = rational_divrem(&g.to_rational(), &h.to_rational());
    debug_assert!(r.is_empty());
    let hp = h.pow(p - 1);
    let (w, r) = rational_divrem(&hp.to_rational(), &g.to_rational());
    debug_assert!(r.is_empty());
    Ok(LadderConstants {
        c_lower: denominator_lcm(&u),
        c_upper: denominator_lcm(&w),
        h,
    })
}

// ---- arithmetic in (Z / m)[x] with BigInt coefficients ----

type ZPoly = Vec<BigInt>;

fn zp_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zp_reduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    zp_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    zp_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default();
                let y = b.get(i).cloned().unwrap_or_default();
                (x + y).mod_floor(m)
            })
            .collect(),
    )
}

fn zp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    zp_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default();
                let y = b.get(i).cloned().unwrap_or_default();
                (x - y).mod_floor(m)
            })
            .collect(),
    )
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_reduce(&out, m)
}

/// Division by a monic polynomial modulo m.
fn zp_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = zp_reduce(a, m);
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let t = r[i + db].clone();
        if t.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            r[i + j] = (&r[i + j] - &t * c).mod_floor(m);
        }
        q[i] = t;
    }
    (zp_trim(q), zp_trim(r))
}

fn lift_modp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

struct HenselPair {
    g: ZPoly,
    h: ZPoly,
    s: ZPoly,
    t: ZPoly,
}

/// One quadratic Hensel step from modulus m to m^2: given `f = g h`,
/// `s g + t h = 1` mod m with `h` monic.
fn hensel_step(f: &[BigInt], pair: HenselPair, m: &BigInt) -> HenselPair {
    let m2 = m * m;
    let HenselPair { g, h, s, t } = pair;
    let e = zp_sub(f, &zp_mul(&g, &h, &m2), &m2);
    let (q, r) = zp_divrem_monic(&zp_mul(&s, &e, &m2), &h, &m2);
    let g_new = zp_add(
        &zp_add(&g, &zp_mul(&t, &e, &m2), &m2),
        &zp_mul(&q, &g, &m2),
        &m2,
    );
    let h_new = zp_add(&h, &r, &m2);
    let b = zp_sub(
        &zp_add(&zp_mul(&s, &g_new, &m2), &zp_mul(&t, &h_new, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let (c, d) = zp_divrem_monic(&zp_mul(&s, &b, &m2), &h_new, &m2);
    let s_new = zp_sub(&s, &d, &m2);
    let t_new = zp_sub(
        &zp_sub(&t, &zp_mul(&t, &b, &m2), &m2),
        &zp_mul(&c, &g_new, &m2),
        &m2,
    );
    HenselPair {
        g: g_new,
        h: h_new,
        s: s_new,
        t: t_new,
    }
}

/// Lifts the factorization `f = lc(f) prod factors` (mod q) to modulus
/// `q^(2^steps)`. Returned factors are monic.
fn multifactor_lift(f: &[BigInt], factors: &[modp::ModPoly], q: u64, steps: u32) -> Vec<ZPoly> {
    let qb = BigInt::from(q);
    let target = (0..steps).fold(qb.clone(), |m, _| &m * &m);
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(&target);
        let inv = lc.modinv(&target).expect("leading coefficient is a unit");
        return vec![zp_reduce(
            &f.iter().map(|c| c * &inv).collect::<Vec<_>>(),
            &target,
        )];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc_q = f.last().unwrap().mod_floor(&qb).to_u64().unwrap();
    let g0 = left.iter().fold(vec![lc_q], |acc, x| modp::mul(&acc, x, q));
    let h0 = right
        .iter()
        .fold(vec![1u64], |acc, x| modp::mul(&acc, x, q));
    let (one, s0, t0) = modp::ext_gcd(&g0, &h0, q);
    debug_assert_eq!(one, vec![1]);
    let mut pair = HenselPair {
        g: lift_modp(&g0),
        h: lift_modp(&h0),
        s: lift_modp(&s0),
        t: lift_modp(&t0),
    };
    let mut m = qb;
    for _ in 0..steps {
        pair = hensel_step(f, pair, &m);
        m = &m * &m;
    }
    let mut out = multifactor_lift(&pair.g, left, q, steps);
    out.extend(multifactor_lift(&pair.h, right, q, steps));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half: BigInt = m >> 1;
    IntPoly::new(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Picks an odd prime not dividing lc(f) with f squarefree mod q; prefers
/// the candidate with the fewest modular factors.
fn choose_prime(f: &IntPoly) -> Result<(u64, Vec<modp::ModPoly>)> {
    let mut best: Option<(u64, Vec<modp::ModPoly>)> = None;
    let mut tried = 0;
    for q in arith::primes()
        .skip(1)
        .take_while(|&q| q < PRIME_SEARCH_LIMIT)
    {
        let fq = f.reduce_mod(q);
        if fq.len() != f.coeffs().len() || !modp::is_squarefree(&fq, q) {
            continue;
        }
        let count: usize = modp::distinct_degree(&fq, q)
            .iter()
            .map(|(d, g)| modp::degree(g) / d)
            .sum();
        if best.as_ref().is_none_or(|(_, fs)| count < fs.len()) {
            best = Some((q, modp::factor_squarefree(&fq, q)));
        }
        tried += 1;
        if count == 1 || tried >= PRIME_CANDIDATES {
            break;
        }
    }
    best.ok_or_else(|| {
        Error::domain(
            "polyring",
            format!("no squarefree reduction prime below {PRIME_SEARCH_LIMIT} for {f}"),
        )
    })
}

/// Coefficient bound for factors times leading coefficient, doubled so that
/// symmetric residues identify integers uniquely.
fn lifting_bound(f: &IntPoly) -> BigInt {
    let norm = BigUint::try_from(f.norm_squared()).unwrap().sqrt() + 1u32;
    let d = f.degree() as u32;
    BigInt::from(norm) * (BigInt::one() << d) * f.leading().abs() * 2 + 1
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Factors a primitive squarefree polynomial with positive leading coefficient.
fn zassenhaus(f: &IntPoly) -> Result<Vec<IntPoly>> {
    if f.degree() <= 1 {
        return Ok(vec![f.clone()]);
    }
    let (q, modular) = choose_prime(f)?;
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let bound = lifting_bound(f);
    let qb = BigInt::from(q);
    let mut steps = 0;
    let mut m = qb.clone();
    while m <= bound {
        m = &m * &m;
        steps += 1;
    }
    let mut lifted = multifactor_lift(f.coeffs(), &modular, q, steps);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let lc = rest.leading();
            let prod = subset.iter().fold(vec![lc.mod_floor(&m)], |acc, &i| {
                zp_mul(&acc, &lifted[i], &m)
            });
            let cand = symmetric(&prod, &m).primitive_part();
            let (c0, r0) = (cand.coeff(0), rest.coeff(0));
            let plausible = if c0.is_zero() {
                r0.is_zero()
            } else {
                (&r0 % &c0).is_zero()
            };
            if cand.degree() >= 1 && plausible {
                if let Some(quot) = rest.div_exact(&cand) {
                    hit = Some((subset, cand, quot));
                    break;
                }
            }
        }
        match hit {
            Some((subset, cand, quot)) => {
                found.push(cand);
                rest = quot.primitive_part();
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    if !rest.is_constant() {
        found.push(rest);
    }
    Ok(found)
}

/// Factorization over Q with the default degree bound.
pub fn factor_over_q(f: &IntPoly) -> Result<IrreducibleFactorization> {
    factor_over_q_with(f, DEFAULT_DEGREE_BOUND)
}

/// Complete factorization into irreducibles over Q, deterministic ordering.
pub fn factor_over_q_with(f: &IntPoly, degree_bound: usize) -> Result<IrreducibleFactorization> {
    if f.is_zero() {
        return Err(Error::domain(
            "polyring",
            "cannot factor the zero polynomial",
        ));
    }
    if f.degree() > degree_bound {
        return Err(Error::domain(
            "polyring",
            format!(
                "degree {} exceeds the factorization bound {degree_bound}",
                f.degree()
            ),
        ));
    }
    let mut content = f.content();
    if f.leading().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    for (s, e) in squarefree_decomposition(f) {
        for g in zassenhaus(&s)? {
            factors.push((g, e));
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    Ok(IrreducibleFactorization { content, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn factor_examples() {
        let f = &p(&[1, 0, 1]) * &p(&[-2, 0, 0, 1]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.content, BigInt::one());
        assert_eq!(
            fac.factors,
            vec![(p(&[1, 0, 1]), 1), (p(&[-2, 0, 0, 1]), 1)]
        );

        let fac = factor_over_q(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);

        // x^4 + 1 splits modulo every prime but is irreducible over Q
        let fac = factor_over_q(&p(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 0, 0, 0, 1]), 1)]);
    }

    #[test]
    fn factor_with_content_and_multiplicity() {
        let f = (&p(&[0, 1]).pow(2) * &p(&[1, 1])).scale(&BigInt::from(-6));
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.content, BigInt::from(-6));
        assert_eq!(fac.factors, vec![(p(&[0, 1]), 2), (p(&[1, 1]), 1)]);
        assert!(fac.has_repeated_factor());
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn swinnerton_dyer_style_inputs() {
        // x^4 - 10x^2 + 1 (minimal polynomial of sqrt2 + sqrt3) is irreducible
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_over_q(&f).unwrap().factors.len(), 1);
        // product of two such quartics needs genuine recombination
        let g = p(&[4, 0, -6, 0, 1]); // minimal polynomial of (sqrt2 + sqrt10) / 2
        let fac = factor_over_q(&(&f * &g)).unwrap();
        assert_eq!(fac.expand(), &f * &g);
        assert!(fac.factors.iter().all(|(h, _)| h.degree() >= 2));
    }

    #[test]
    fn degree_bound_enforced() {
        let f = p(&[1; 14]);
        assert!(factor_over_q(&f).is_err());
        assert!(factor_over_q_with(&f, 13).is_ok());
        assert!(factor_over_q(&IntPoly::zero()).is_err());
    }

    #[test]
    fn radical_examples() {
        assert_eq!(
            radical(&(&p(&[0, 0, 1]) * &p(&[1, 1]))).unwrap(),
            p(&[0, 1, 1])
        );
        assert_eq!(radical(&p(&[0, -1, 0, 1])).unwrap(), p(&[0, -1, 0, 1]));
        assert_eq!(radical(&p(&[0, 0, 4])).unwrap(), p(&[0, 4]));
        assert!(radical(&p(&[5])).is_err());
    }

    /// Oracle: rebuild lc(g) * prod of distinct monic irreducible factors
    /// from the factorization.
    fn radical_by_factoring(g: &IntPoly) -> IntPoly {
        let fac = factor_over_q(g).unwrap();
        let prod = fac
            .factors
            .iter()
            .fold(IntPoly::constant(BigInt::one()), |acc, (f, _)| &acc * f);
        prod.scale(&(g.leading() / prod.leading()))
    }

    fn random_poly(rng: &mut impl Rng, max_deg: usize, coeff: i64) -> IntPoly {
        loop {
            let d = rng.gen_range(1..=max_deg);
            let c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-coeff..=coeff)).collect();
            let f = p(&c);
            if f.degree() >= 1 {
                return f;
            }
        }
    }

    #[test]
    fn random_products_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let k = rng.gen_range(1..4);
            let mut f = IntPoly::constant(BigInt::from(rng.gen_range(1..4)));
            for _ in 0..k {
                let g = random_poly(&mut rng, 4, 9);
                let e = rng.gen_range(1..3);
                f = &f * &g.pow(e);
            }
            if f.degree() > DEFAULT_DEGREE_BOUND {
                continue;
            }
            let fac = factor_over_q(&f).unwrap();
            assert_eq!(fac.expand(), f, "round trip failed for {f}");
            for (g, _) in &fac.factors {
                assert!(g.leading().is_positive());
                assert_eq!(g.content(), BigInt::one());
            }
            assert_eq!(radical(&f).unwrap(), radical_by_factoring(&f));
            let disc_zero = super::super::discriminant(&f).unwrap().is_zero();
            assert_eq!(disc_zero, fac.has_repeated_factor(), "f = {f}");
            let rad = radical(&f).unwrap();
            assert!(rad.gcd(&rad.derivative()).is_constant());
        }
    }

    #[test]
    fn ladder_constants_clear_denominators() {
        // g = 4 (x + 1/2)^2 (x - 3) -> h = 4 (x + 1/2)(x - 3) = (2x + 1)(2x - 6)
        let g = &p(&[1, 2]).pow(2) * &p(&[-3, 1]);
        let lc = ladder_constants(&g, 3).unwrap();
        assert_eq!(lc.h, radical(&g).unwrap());
        for n in -20..20 {
            let n = BigInt::from(n);
            let (gn, hn) = (g.eval(&n), lc.h.eval(&n));
            if !hn.is_zero() {
                assert!((&lc.c_lower * &gn % &hn).is_zero());
            }
            if !gn.is_zero() {
                assert!((&lc.c_upper * hn.pow(2) % &gn).is_zero());
            }
        }
        assert!(ladder_constants(&g, 2).is_err());
    }
}
