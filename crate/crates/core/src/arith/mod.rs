//! Exact integer arithmetic: factorization, valuations and kernels modulo
//! perfect powers.

mod primes;
mod rho;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use primes::{is_prime, is_prime_u64, primes, primes_up_to, small_primes, SIEVE_LIMIT};
pub(crate) use primes::{mul_mod, pow_mod};

/// Primes below this are removed by trial division before Miller-Rabin and
/// Pollard rho take over.
const TRIAL_LIMIT: u64 = 1000;

/// Work limit for one call to [`factor_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorBudget {
    /// Total Pollard-rho iterations across all splitting attempts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: 1 << 24,
        }
    }
}

/// Signed prime-power decomposition of a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Factorization {
    negative: bool,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Builds a factorization from a sign and (prime, exponent) pairs.
    ///
    /// Pairs are merged and sorted; zero exponents are dropped. Primality of
    /// the bases is the caller's responsibility.
    pub fn from_parts(sign: i8, pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Self {
        let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *map.entry(p).or_default() += e;
            }
        }
        Factorization {
            negative: sign < 0,
            factors: map.into_iter().collect(),
        }
    }

    pub fn one() -> Self {
        Factorization {
            negative: false,
            factors: Vec::new(),
        }
    }

    /// +1 or -1.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// True for the factorization of +1.
    pub fn is_one(&self) -> bool {
        !self.negative && self.factors.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// sign * prod p^e.
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let sign = if self.negative {
            Sign::Minus
        } else {
            Sign::Plus
        };
        BigInt::from_biguint(sign, acc)
    }

    /// |reconstruct()|.
    pub fn abs_value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Representative of the class in Q*/(Q*)^p: exponents reduced into
    /// [1, p-1]. The sign is kept for p = 2 and dropped for odd p, where -1 is
    /// a p-th power.
    pub fn p_free(&self, p: u64) -> Factorization {
        Factorization {
            negative: p == 2 && self.negative,
            factors: self
                .factors
                .iter()
                .filter_map(|(q, e)| {
                    let r = (*e as u64 % p) as u32;
                    (r > 0).then(|| (q.clone(), r))
                })
                .collect(),
        }
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", if self.negative { "-1" } else { "1" });
        }
        if self.negative {
            write!(f, "-")?;
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn trial_divide_u64(mut m: u64, out: &mut BTreeMap<BigUint, u32>) -> u64 {
    for &p in small_primes() {
        let p = p as u64;
        if p > TRIAL_LIMIT || p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            *out.entry(BigUint::from(p)).or_default() += e;
        }
    }
    m
}

fn split_u64_into(
    m: u64,
    budget: &mut rho::Budget,
    out: &mut BTreeMap<BigUint, u32>,
) -> Result<()> {
    let mut stack = vec![m];
    while let Some(r) = stack.pop() {
        if r == 1 {
            continue;
        }
        if is_prime_u64(r) {
            *out.entry(BigUint::from(r)).or_default() += 1;
            continue;
        }
        if r % 2 == 0 {
            // only reachable for residuals handed over from the big path
            *out.entry(BigUint::from(2u32)).or_default() += 1;
            stack.push(r / 2);
            continue;
        }
        match rho::split_u64(r, budget) {
            Some(d) => {
                stack.push(d);
                stack.push(r / d);
            }
            None => {
                return Err(Error::Unfactored {
                    residual: BigInt::from(r),
                })
            }
        }
    }
    Ok(())
}

fn factor_natural(m: &BigUint, budget: FactorBudget) -> Result<BTreeMap<BigUint, u32>> {
    let mut out = BTreeMap::new();
    let mut rho_budget = rho::Budget::new(budget.rho_iterations);
    if let Some(small) = m.to_u64() {
        let rest = trial_divide_u64(small, &mut out);
        split_u64_into(rest, &mut rho_budget, &mut out)?;
        return Ok(out);
    }
    let mut rest = m.clone();
    for &p in small_primes() {
        if p as u64 > TRIAL_LIMIT {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.insert(BigUint::from(p), e);
        }
    }
    let mut stack = vec![rest];
    while let Some(r) = stack.pop() {
        if r.is_one() {
            continue;
        }
        if let Some(small) = r.to_u64() {
            split_u64_into(small, &mut rho_budget, &mut out)?;
            continue;
        }
        if is_prime(&r) {
            *out.entry(r).or_default() += 1;
            continue;
        }
        match rho::split_big(&r, &mut rho_budget) {
            Some(d) => {
                let other = &r / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                return Err(Error::Unfactored {
                    residual: BigInt::from(r),
                })
            }
        }
    }
    Ok(out)
}

/// Factors a nonzero integer with the default budget.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    factor_with(n, FactorBudget::default())
}

/// Factors a nonzero integer. Residuals that resist Pollard rho within the
/// budget are reported as [`Error::Unfactored`], never assumed prime.
pub fn factor_with(n: &BigInt, budget: FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("arith", "cannot factor zero"));
    }
    let map = factor_natural(n.magnitude(), budget)?;
    Ok(Factorization {
        negative: n.is_negative(),
        factors: map.into_iter().collect(),
    })
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::domain("arith", format!("{p} is not prime")))
    }
}

/// Largest e with p^e | n.
pub fn valuation(n: &BigInt, p: u64) -> Result<u32> {
    require_prime(p)?;
    if n.is_zero() {
        return Err(Error::domain("arith", "valuation of zero is undefined"));
    }
    let p = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// sign(n) * prod of primes with odd exponent in n.
pub fn squarefree_kernel(n: &BigInt) -> Result<BigInt> {
    Ok(factor(n)?.p_free(2).reconstruct())
}

/// Class of n in Q*/(Q*)^p with exponents in [1, p-1].
pub fn p_free_kernel(n: &BigInt, p: u64) -> Result<Factorization> {
    require_prime(p)?;
    Ok(factor(n)?.p_free(p))
}

/// Primes q >= min_prime with v_q(n) = 1.
pub fn exact_order_primes(n: &BigInt, min_prime: u64) -> Result<BTreeSet<BigUint>> {
    let f = factor(n)?;
    let min = BigUint::from(min_prime);
    Ok(f.factors()
        .iter()
        .filter(|(q, e)| *e == 1 && *q >= min)
        .map(|(q, _)| q.clone())
        .collect())
}

/// Integer p-th root of |n| if n is a perfect p-th power (sign permitting).
pub fn exact_root(n: &BigInt, p: u32) -> Option<BigInt> {
    if n.is_negative() && p.is_multiple_of(2) {
        return None;
    }
    let r = n.magnitude().nth_root(p);
    if r.pow(p) == *n.magnitude() {
        let r = BigInt::from(r);
        Some(if n.is_negative() { -r } else { r })
    } else {
        None
    }
}
