//! Squarefree values of integer polynomials: exact counts over `1..=N`,
//! truncated Euler-product predictions, and exact-order prime counts.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, FactorBudget};
use crate::error::{Error, Result};
use crate::polyring::{self, modp, roots::roots_prime_power, IntPoly};

/// Largest sieving prime. Beyond it, unmarked values are factored.
pub const SIEVE_CAP: u64 = 4_000_000;

/// Sieving primes past `max(2N, this)` cost more than factoring the values.
const SIEVE_FLOOR: u64 = 100_000;

/// Fixed square divisors are searched among primes up to this bound
/// (or `deg h` if larger); above it they come from the content of `h`.
const FIXED_SEARCH: u64 = 1000;

const SEGMENT: u64 = 1 << 15;

pub const DEFAULT_EULER_BOUND: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SieveOptions {
    pub jobs: usize,
    pub factor_budget: FactorBudget,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveReport {
    pub h: IntPoly,
    #[serde(rename = "N")]
    pub n: u64,
    /// Primes `p` with `p^2 | h(n)` for every integer `n`.
    pub fixed_square_primes: Vec<u64>,
    /// Number of `n <= N` whose `h(n)` is squarefree away from the fixed primes.
    pub count: u64,
    pub density: f64,
    pub euler_product: f64,
    pub euler_bound: u64,
    /// Primes up to this bound were sieved.
    pub sieve_bound: u64,
    /// Values that had to be factored because the sieve bound was capped.
    pub factored_values: u64,
}

fn require_nonconstant(h: &IntPoly) -> Result<()> {
    if h.is_constant() {
        Err(Error::domain("sieve", "h must be non-constant"))
    } else {
        Ok(())
    }
}

fn run_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::domain("sieve", format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Primes `p` such that `p^2` divides every value of `h`.
pub fn fixed_square_primes(h: &IntPoly) -> Result<Vec<u64>> {
    require_nonconstant(h)?;
    let limit = FIXED_SEARCH.max(h.degree() as u64);
    let mut out: BTreeSet<u64> = arith::primes_up_to(limit)
        .into_iter()
        .filter(|&p| roots_prime_power(h, p, 2).len() as u64 == p * p)
        .collect();
    // above deg h, p^2 | h(n) for all n forces p^2 | content
    let content = arith::factor(&h.content())?;
    for (q, e) in content.factors() {
        if *e >= 2 {
            if let Some(q) = q.to_u64() {
                out.insert(q);
            } else {
                return Err(Error::domain(
                    "sieve",
                    format!("fixed prime {q} does not fit in 64 bits"),
                ));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Upper bound for `|h(n)|` on `1..=n`.
fn value_bound(h: &IntPoly, n: u64) -> BigInt {
    let n = BigInt::from(n);
    h.coeffs()
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * &n + c.abs())
}

/// Roots of `h` in `1..=n` among the integers.
fn integer_roots(h: &IntPoly, n: u64) -> Vec<u64> {
    let lc = h.leading();
    let big = arith::primes()
        .skip_while(|&q| q <= n.max(FIXED_SEARCH))
        .find(|&q| !(&lc % BigInt::from(q)).is_zero())
        .expect("infinitely many primes");
    modp::roots(&h.reduce_mod(big), big)
        .into_iter()
        .filter(|&r| r >= 1 && r <= n && h.eval(&BigInt::from(r)).is_zero())
        .collect()
}

/// Squarefree flags for `h(1), ..., h(n)`, ignoring the fixed primes.
fn flags(h: &IntPoly, n: u64, fixed: &[u64], opts: &SieveOptions) -> Result<(Vec<bool>, u64, u64)> {
    let bound = value_bound(h, n);
    let mut s = (bound.sqrt() + 1u32).to_u64().unwrap_or(u64::MAX);
    let limit = SIEVE_CAP.min(SIEVE_FLOOR.max(2 * n));
    let capped = s > limit;
    s = s.min(limit);
    let zeros = integer_roots(h, n);
    let budget = opts.factor_budget;
    run_pool(opts.jobs, || -> Result<(Vec<bool>, u64, u64)> {
        let residues: Vec<(u64, Vec<u64>)> = arith::primes_up_to(s)
            .into_par_iter()
            .filter(|q| fixed.binary_search(q).is_err())
            .map(|q| (q * q, roots_prime_power(h, q, 2)))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        let starts: Vec<u64> = (0..n.div_ceil(SEGMENT)).map(|k| 1 + k * SEGMENT).collect();
        let segments: Vec<Result<(Vec<bool>, u64)>> = starts
            .into_par_iter()
            .map(|lo| {
                let hi = (lo + SEGMENT - 1).min(n);
                let mut good = vec![true; (hi - lo + 1) as usize];
                for (m, roots) in &residues {
                    for &r in roots {
                        // first k >= lo with k = r mod m
                        let mut k = lo + (r + m - lo % m) % m;
                        while k <= hi {
                            good[(k - lo) as usize] = false;
                            k += m;
                        }
                    }
                }
                for &z in &zeros {
                    if (lo..=hi).contains(&z) {
                        good[(z - lo) as usize] = false;
                    }
                }
                let mut factored = 0;
                if capped {
                    for (i, flag) in good.iter_mut().enumerate() {
                        if !*flag {
                            continue;
                        }
                        let k = lo + i as u64;
                        let v = h.eval(&BigInt::from(k));
                        let f = arith::factor_with(&v, budget).map_err(|e| {
                            Error::budget("sieve", format!("could not factor h({k}): {e}"))
                        })?;
                        factored += 1;
                        *flag = f.factors().iter().all(|(q, e)| {
                            *e <= 1 || q.to_u64().is_some_and(|q| fixed.binary_search(&q).is_ok())
                        });
                    }
                }
                Ok((good, factored))
            })
            .collect();
        let mut out = Vec::with_capacity(n as usize);
        let mut factored = 0;
        for seg in segments {
            let (good, f) = seg?;
            out.extend(good);
            factored += f;
        }
        Ok((out, s, factored))
    })?
}

/// Squarefree flags for `h(1), ..., h(n)` away from the fixed primes.
pub fn squarefree_flags(h: &IntPoly, n: u64, opts: &SieveOptions) -> Result<Vec<bool>> {
    require_nonconstant(h)?;
    let fixed = fixed_square_primes(h)?;
    Ok(flags(h, n, &fixed, opts)?.0)
}

/// Count with the default Euler bound and options.
pub fn squarefree_value_count(h: &IntPoly, n: u64) -> Result<SieveReport> {
    squarefree_value_count_with(h, n, DEFAULT_EULER_BOUND, &SieveOptions::default())
}

pub fn squarefree_value_count_with(
    h: &IntPoly,
    n: u64,
    euler_bound: u64,
    opts: &SieveOptions,
) -> Result<SieveReport> {
    Ok(squarefree_survey(h, n, euler_bound, opts)?.0)
}

/// The report together with the per-`n` squarefree flags it was built from.
pub fn squarefree_survey(
    h: &IntPoly,
    n: u64,
    euler_bound: u64,
    opts: &SieveOptions,
) -> Result<(SieveReport, Vec<bool>)> {
    require_nonconstant(h)?;
    if n == 0 {
        return Err(Error::domain("sieve", "N >= 1 required"));
    }
    let fixed = fixed_square_primes(h)?;
    let (good, sieve_bound, factored_values) = flags(h, n, &fixed, opts)?;
    let count = good.iter().filter(|&&g| g).count() as u64;
    let report = SieveReport {
        h: h.clone(),
        n,
        fixed_square_primes: fixed,
        count,
        density: count as f64 / n as f64,
        euler_product: euler_density(h, euler_bound)?,
        euler_bound,
        sieve_bound,
        factored_values,
    };
    Ok((report, good))
}

/// `prod (1 - rho(p^2)/p^2)` over non-fixed primes `p <= bound`, where
/// `rho(m)` counts roots of `h` modulo `m`. Non-separable `h` is replaced by
/// its radical.
pub fn euler_density(h: &IntPoly, bound: u64) -> Result<f64> {
    require_nonconstant(h)?;
    let h = if polyring::discriminant(h)?.is_zero() {
        polyring::radical(h)?
    } else {
        h.clone()
    };
    let fixed = fixed_square_primes(&h)?;
    let mut product = 1.0f64;
    for p in arith::primes_up_to(bound) {
        if fixed.binary_search(&p).is_ok() {
            continue;
        }
        let rho = polyring::roots_mod(&h, p * p)?;
        product *= 1.0 - rho as f64 / (p * p) as f64;
    }
    Ok(product)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactOrderReport {
    pub g: IntPoly,
    pub n: u64,
    /// Number of primes `q >= n` with `v_q(g(m)) = 1` for some `m <= n`.
    pub count: u64,
    pub ratio: f64,
}

/// Counts primes `q >= n` dividing some `g(m)`, `m <= n`, exactly once.
pub fn exact_order_prime_ratio(g: &IntPoly, n: u64) -> Result<ExactOrderReport> {
    exact_order_prime_ratio_with(g, n, &SieveOptions::default())
}

pub fn exact_order_prime_ratio_with(
    g: &IntPoly,
    n: u64,
    opts: &SieveOptions,
) -> Result<ExactOrderReport> {
    if n == 0 {
        return Err(Error::domain("sieve", "n >= 1 required"));
    }
    if g.degree() < 2 {
        return Err(Error::domain("sieve", "g must have degree at least 2"));
    }
    let fac = polyring::factor_over_q_with(g, 4 * polyring::DEFAULT_DEGREE_BOUND)?;
    if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
        return Err(Error::domain(
            "sieve",
            format!("g = {g} must be irreducible over Q"),
        ));
    }
    let min = BigUint::from(n);
    let budget = opts.factor_budget;
    let sets: Vec<Result<Vec<BigUint>>> = run_pool(opts.jobs, || {
        (1..=n)
            .into_par_iter()
            .map(|m| {
                let v = g.eval(&BigInt::from(m));
                if v.is_zero() {
                    return Ok(Vec::new());
                }
                let f = arith::factor_with(&v, budget)
                    .map_err(|e| Error::budget("sieve", format!("could not factor g({m}): {e}")))?;
                Ok(f.factors()
                    .iter()
                    .filter(|(q, e)| *e == 1 && *q >= min)
                    .map(|(q, _)| q.clone())
                    .collect())
            })
            .collect()
    })?;
    let mut all = BTreeSet::new();
    for s in sets {
        all.extend(s?);
    }
    let count = all.len() as u64;
    Ok(ExactOrderReport {
        g: g.clone(),
        n,
        count,
        ratio: count as f64 / n as f64,
    })
}
