//! Pure radical extensions `Q(a^(1/p))` up to isomorphism, and prime
//! splitting fingerprints for number fields given by a defining polynomial.
//!
//! For a prime `p` and rationals `a`, `b` that are not `p`-th powers,
//! `Q(a^(1/p))` and `Q(b^(1/p))` are isomorphic exactly when
//! `b = a^j c^p` for some `j` in `1..p` and rational `c`. A [`KummerClass`]
//! stores the class of `a` in `Q*/(Q*)^p` together with a canonical
//! representative of its orbit under the twists `a -> a^j`, so isomorphism
//! becomes equality.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{self, FactorBudget, Factorization};
use crate::error::{Error, Result};
use crate::polyring::{self, modp, IntPoly};

/// Class of a nonzero rational in `Q*/(Q*)^p` modulo exponent twists.
#[derive(Clone, Debug, Serialize)]
pub struct KummerClass {
    p: u64,
    kernel: Factorization,
    canonical: Factorization,
}

impl PartialEq for KummerClass {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.canonical == other.canonical
    }
}

impl Eq for KummerClass {}

impl Hash for KummerClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.canonical.hash(state);
    }
}

impl KummerClass {
    /// Class of an already factored nonzero integer.
    pub fn from_factorization(f: &Factorization, p: u64) -> Self {
        let kernel = f.p_free(p);
        let canonical = canonical_twist(&kernel, p);
        KummerClass {
            p,
            kernel,
            canonical,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Representative with exponents in `[1, p-1]`.
    pub fn kernel(&self) -> &Factorization {
        &self.kernel
    }

    pub fn canonical(&self) -> &Factorization {
        &self.canonical
    }

    /// The class of p-th powers: the field collapses to Q.
    pub fn is_trivial(&self) -> bool {
        self.canonical.is_one()
    }

    /// Primes dividing the kernel; unchanged by twisting.
    pub fn support(&self) -> BTreeSet<BigUint> {
        self.kernel.primes().cloned().collect()
    }
}

/// Among the twists `kernel^j`, j in 1..p, picks the one of smallest
/// absolute value, ties broken by the exponent vector.
fn canonical_twist(kernel: &Factorization, p: u64) -> Factorization {
    if p == 2 || kernel.factors().is_empty() {
        return kernel.clone();
    }
    let mut best: Option<(BigUint, Vec<u32>, Factorization)> = None;
    for j in 1..p {
        let twisted = Factorization::from_parts(
            1,
            kernel
                .factors()
                .iter()
                .map(|(q, e)| (q.clone(), ((*e as u64 * j) % p) as u32)),
        );
        let value = twisted.abs_value();
        let exps: Vec<u32> = kernel
            .factors()
            .iter()
            .map(|(_, e)| ((*e as u64 * j) % p) as u32)
            .collect();
        let better = match &best {
            None => true,
            Some((v, x, _)) => (&value, &exps) < (v, x),
        };
        if better {
            best = Some((value, exps, twisted));
        }
    }
    best.unwrap().2
}

fn require_prime(p: u64) -> Result<()> {
    if arith::is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::domain("kummer", format!("{p} is not prime")))
    }
}

/// Kummer class of a nonzero rational.
pub fn radical_class(a: &BigRational, p: u64) -> Result<KummerClass> {
    radical_class_with(a, p, FactorBudget::default())
}

pub fn radical_class_with(a: &BigRational, p: u64, budget: FactorBudget) -> Result<KummerClass> {
    require_prime(p)?;
    if a.is_zero() {
        return Err(Error::domain("kummer", "radical class of zero"));
    }
    let num = arith::factor_with(a.numer(), budget)?;
    let den = arith::factor_with(a.denom(), budget)?;
    // 1/d is congruent to d^(p-1) modulo p-th powers
    let pairs = num.factors().iter().cloned().chain(
        den.factors()
            .iter()
            .map(|(q, e)| (q.clone(), e * (p as u32 - 1))),
    );
    let sign = num.sign() * den.sign();
    Ok(KummerClass::from_factorization(
        &Factorization::from_parts(sign, pairs),
        p,
    ))
}

/// Convenience wrapper for integer radicands.
pub fn radical_class_of(a: &BigInt, p: u64) -> Result<KummerClass> {
    radical_class(&BigRational::from_integer(a.clone()), p)
}

/// Whether `Q(a^(1/p))` and `Q(b^(1/p))` are isomorphic.
pub fn radical_fields_isomorphic(a: &BigRational, b: &BigRational, p: u64) -> Result<bool> {
    let ca = radical_class(a, p)?;
    let cb = radical_class(b, p)?;
    if ca.is_trivial() || cb.is_trivial() {
        return Err(Error::domain(
            "kummer",
            format!("degenerate radicand: {} or {} is a {p}-th power", a, b),
        ));
    }
    Ok(ca == cb)
}

/// Primes dividing the kernel of `a`, minus `excluded` and `p`.
///
/// Away from those primes these are exactly the primes ramified in
/// `Q(a^(1/p))`. A `p`-th power yields the empty set.
pub fn ramified_set(
    a: &BigRational,
    p: u64,
    excluded: &BTreeSet<BigUint>,
) -> Result<BTreeSet<BigUint>> {
    Ok(ramified_support(&radical_class(a, p)?, excluded))
}

pub(crate) fn ramified_support(
    class: &KummerClass,
    excluded: &BTreeSet<BigUint>,
) -> BTreeSet<BigUint> {
    let p = BigUint::from(class.p());
    class
        .kernel()
        .primes()
        .filter(|q| **q != p && !excluded.contains(*q))
        .cloned()
        .collect()
}

/// Degree plus splitting types of a defining polynomial modulo its first
/// admissible primes.
///
/// Splitting types at primes of good reduction are field invariants, so two
/// fingerprints that disagree on a shared prime certify distinct fields.
/// Agreement is not a proof of isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldFingerprint {
    pub degree: u32,
    pub splitting: Vec<(u64, Vec<u32>)>,
}

impl FieldFingerprint {
    /// Fingerprint of Q itself.
    pub fn rational(prime_budget: usize) -> Self {
        FieldFingerprint {
            degree: 1,
            splitting: arith::primes()
                .take(prime_budget)
                .map(|q| (q, vec![1]))
                .collect(),
        }
    }

    /// True when the two fields are provably different: the degrees differ
    /// or some prime admissible for both splits differently.
    pub fn certifies_distinct(&self, other: &FieldFingerprint) -> bool {
        if self.degree != other.degree {
            return true;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.splitting.len() && j < other.splitting.len() {
            let (p, a) = &self.splitting[i];
            let (q, b) = &other.splitting[j];
            match p.cmp(q) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a != b {
                        return true;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        false
    }
}

/// Turns a primitive irreducible polynomial into a monic integral model of
/// the same field, then divides out root scalings `x -> q x` where possible
/// so that different models of one field tend to share discriminant support.
fn reduced_model(f: &IntPoly, budget: FactorBudget) -> Result<Vec<BigInt>> {
    let d = f.degree();
    let lc = f.leading();
    // lc^(d-1) f(x / lc)
    let mut c: Vec<BigInt> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a * lc.pow((d - 1 - i.min(d - 1)) as u32))
        .collect();
    c[d] = BigInt::one();
    let g = c[..d]
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if g.is_zero() || g.is_one() {
        return Ok(c);
    }
    let primes = arith::factor_with(&g, budget)?;
    for (q, _) in primes.factors() {
        let q = BigInt::from(q.clone());
        loop {
            let divisible = (1..=d).all(|i| {
                let coeff = &c[d - i];
                coeff.is_zero() || (coeff % q.pow(i as u32)).is_zero()
            });
            if !divisible {
                break;
            }
            for i in 1..=d {
                c[d - i] = &c[d - i] / q.pow(i as u32);
            }
        }
    }
    Ok(c)
}

/// Fingerprint of a polynomial already known to be irreducible.
pub(crate) fn fingerprint_unchecked(
    f: &IntPoly,
    prime_budget: usize,
    budget: FactorBudget,
) -> Result<FieldFingerprint> {
    let f = f.primitive_part();
    if f.degree() == 1 {
        return Ok(FieldFingerprint::rational(prime_budget));
    }
    let model = IntPoly::new(reduced_model(&f, budget)?);
    let disc = polyring::discriminant(&model)?;
    let splitting = arith::primes()
        .filter(|&q| !(&disc % BigInt::from(q)).is_zero())
        .take(prime_budget)
        .map(|q| (q, modp::factor_degrees(&model.reduce_mod(q), q)))
        .collect();
    Ok(FieldFingerprint {
        degree: f.degree() as u32,
        splitting,
    })
}

/// Fingerprint of the field defined by an irreducible polynomial.
pub fn field_fingerprint(minpoly: &IntPoly, prime_budget: usize) -> Result<FieldFingerprint> {
    if minpoly.is_constant() {
        return Err(Error::domain(
            "kummer",
            "a defining polynomial needs degree >= 1",
        ));
    }
    let fac = polyring::factor_over_q_with(minpoly, 4 * polyring::DEFAULT_DEGREE_BOUND)?;
    if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
        return Err(Error::domain(
            "kummer",
            format!("{minpoly} is reducible over Q"),
        ));
    }
    fingerprint_unchecked(minpoly, prime_budget, FactorBudget::default())
}

/// `y^p - a` as a polynomial in `y`.
pub fn pure_polynomial(a: &BigInt, p: u64) -> IntPoly {
    let mut c = vec![BigInt::zero(); p as usize + 1];
    c[0] = -a;
    c[p as usize] = BigInt::one();
    IntPoly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn set(v: &[u64]) -> BTreeSet<BigUint> {
        v.iter().map(|&q| BigUint::from(q)).collect()
    }

    #[test]
    fn radical_class_examples() {
        assert!(radical_class(&r(8), 3).unwrap().is_trivial());
        assert_eq!(
            radical_class(&r(4), 3).unwrap(),
            radical_class(&r(2), 3).unwrap()
        );
        let c = radical_class(&r(12), 2).unwrap();
        assert_eq!(c.kernel().reconstruct(), BigInt::from(3));
        // 1/2 and 2 agree modulo squares
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(
            radical_class(&half, 2).unwrap(),
            radical_class(&r(2), 2).unwrap()
        );
        // -1 is a square class of its own for p = 2
        assert!(!radical_class(&r(-4), 2).unwrap().is_trivial());
        assert!(radical_class(&r(-8), 3).unwrap().is_trivial());
        assert!(radical_class(&r(0), 3).is_err());
        assert!(radical_class(&r(5), 4).is_err());
    }

    #[test]
    fn canonical_representative_is_fixed_point() {
        for a in 2..300 {
            for p in [3u64, 5, 7] {
                let c = radical_class(&r(a), p).unwrap();
                let again = KummerClass::from_factorization(c.canonical(), p);
                assert_eq!(again.canonical(), c.canonical());
                assert!(c
                    .canonical()
                    .factors()
                    .iter()
                    .all(|(_, e)| *e >= 1 && (*e as u64) < p));
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        assert!(radical_fields_isomorphic(&r(2), &r(16), 3).unwrap());
        assert!(!radical_fields_isomorphic(&r(2), &r(3), 2).unwrap());
        assert!(radical_fields_isomorphic(&r(2), &r(18), 2).unwrap());
        assert!(!radical_fields_isomorphic(&r(2), &r(6), 2).unwrap());
        assert!(radical_fields_isomorphic(&r(2), &r(8), 2).unwrap());
        assert!(radical_fields_isomorphic(&r(9), &r(2), 2).is_err());
    }

    #[test]
    fn ramified_set_examples() {
        assert_eq!(ramified_set(&r(12), 2, &set(&[])).unwrap(), set(&[3]));
        assert_eq!(ramified_set(&r(15), 2, &set(&[3])).unwrap(), set(&[5]));
        assert_eq!(ramified_set(&r(2), 3, &set(&[])).unwrap(), set(&[2]));
        assert_eq!(ramified_set(&r(8), 3, &set(&[])).unwrap(), set(&[]));
    }

    #[test]
    fn fingerprint_examples() {
        let fp = |c: &[i64]| field_fingerprint(&IntPoly::from_i64(c), 100).unwrap();
        assert_eq!(fp(&[-2, 0, 1]), fp(&[-18, 0, 1]));
        assert_ne!(fp(&[-2, 0, 1]), fp(&[-3, 0, 1]));
        assert!(fp(&[-2, 0, 1]).certifies_distinct(&fp(&[-3, 0, 1])));
        let seven = fp(&[-2, 0, 1])
            .splitting
            .iter()
            .find(|(q, _)| *q == 7)
            .cloned();
        assert_eq!(seven, Some((7, vec![1, 1])));
        let seven = fp(&[-3, 0, 1])
            .splitting
            .iter()
            .find(|(q, _)| *q == 7)
            .cloned();
        assert_eq!(seven, Some((7, vec![2])));

        let rational = fp(&[-5, 1]);
        assert_eq!(rational.degree, 1);
        assert_eq!(rational.splitting.len(), 100);
        assert!(rational.splitting.iter().all(|(_, t)| t == &vec![1]));

        assert!(field_fingerprint(&IntPoly::from_i64(&[-4, 0, 1]), 10).is_err());
    }

    #[test]
    fn fingerprint_entries_sum_to_degree() {
        let f = IntPoly::from_i64(&[-2, 0, 0, 1]);
        let fp = field_fingerprint(&f, 50).unwrap();
        assert_eq!(fp.degree, 3);
        for (q, types) in &fp.splitting {
            assert_eq!(types.iter().sum::<u32>(), 3, "q = {q}");
            assert!(*q != 2 && *q != 3);
        }
    }

    #[test]
    fn fingerprint_ignores_model_choice() {
        // x^2 + x - 1 and x^2 - 5 both define Q(sqrt 5); the shared primes agree
        let a = field_fingerprint(&IntPoly::from_i64(&[-1, 1, 1]), 60).unwrap();
        let b = field_fingerprint(&IntPoly::from_i64(&[-5, 0, 1]), 60).unwrap();
        assert!(!a.certifies_distinct(&b));
        // non-monic model 4x^2 - 2 of Q(sqrt 2)
        let c = field_fingerprint(&IntPoly::from_i64(&[-2, 0, 4]), 60).unwrap();
        let d = field_fingerprint(&IntPoly::from_i64(&[-2, 0, 1]), 60).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn support_is_twist_invariant() {
        for a in 2..200i64 {
            for p in [3u64, 5] {
                let base = radical_class(&r(a), p).unwrap();
                for j in 1..p as u32 {
                    for c in [1i64, 2, 3] {
                        let twisted = BigInt::from(a).pow(j) * BigInt::from(c).pow(p as u32);
                        let t = radical_class_of(&twisted, p).unwrap();
                        assert_eq!(t, base);
                        assert_eq!(t.support(), base.support());
                    }
                }
            }
        }
    }
}
