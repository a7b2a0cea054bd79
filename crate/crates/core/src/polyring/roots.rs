//! Counting roots of integer polynomials modulo integers.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{modp, IntPoly};
use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};

/// Moduli up to this size are handled by exhaustive search.
const EXHAUSTIVE_LIMIT: u64 = 4096;

fn eval_mod(coeffs: &[u64], x: u64, m: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod(acc, x, m) + c) % m)
}

/// All residues `r mod p^e` with `f(r) = 0 mod p^e`, sorted, obtained by
/// lifting roots modulo `p` one power at a time.
pub(crate) fn roots_prime_power(f: &IntPoly, p: u64, e: u32) -> Vec<u64> {
    if e == 0 {
        return vec![0];
    }
    let fp = f.reduce_mod(p);
    if fp.is_empty() {
        // every coefficient is divisible by p
        let lower = roots_prime_power(&f.div_scalar(&BigInt::from(p)), p, e - 1);
        let step = p.pow(e - 1);
        let mut out: Vec<u64> = lower
            .iter()
            .flat_map(|&r| (0..p).map(move |k| r + k * step))
            .collect();
        out.sort_unstable();
        return out;
    }
    let deriv = f.derivative().reduce_mod(p);
    let mut current = modp::roots(&fp, p);
    let mut pk = p;
    for _ in 1..e {
        let next_mod = pk * p;
        let reduced = f.reduce_mod(next_mod);
        let mut next = Vec::new();
        for &r in &current {
            let v = eval_mod(&reduced, r, next_mod);
            let d = modp::eval(&deriv, r % p, p);
            if d != 0 {
                let w = (v / pk) % p;
                let t = mul_mod((p - w) % p, modp::inv(d, p), p);
                next.push(r + t * pk);
            } else if v == 0 {
                next.extend((0..p).map(|t| r + t * pk));
            }
        }
        current = next;
        pk = next_mod;
    }
    current.sort_unstable();
    current
}

/// Number of residues `r mod m` with `f(r) = 0 mod m`.
pub fn roots_mod(f: &IntPoly, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::domain("polyring", "modulus must be at least 2"));
    }
    if m <= EXHAUSTIVE_LIMIT {
        let reduced = f.reduce_mod(m);
        return Ok((0..m).filter(|&r| eval_mod(&reduced, r, m) == 0).count() as u64);
    }
    let fac = arith::factor(&BigInt::from(m))?;
    let mut total = 1u64;
    for (p, e) in fac.factors() {
        let p = p.to_u64().expect("prime factor of a u64");
        total *= roots_prime_power(f, p, *e).len() as u64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn brute(f: &IntPoly, m: u64) -> u64 {
        (0..m)
            .filter(|&r| (f.eval(&BigInt::from(r)) % BigInt::from(m)) == BigInt::from(0))
            .count() as u64
    }

    #[test]
    fn examples() {
        assert_eq!(roots_mod(&p(&[1, 0, 1]), 5).unwrap(), 2);
        assert_eq!(roots_mod(&p(&[1, 0, 1]), 3).unwrap(), 0);
        assert_eq!(roots_mod(&p(&[0, 1]), 4).unwrap(), 1);
        assert!(roots_mod(&p(&[0, 1]), 1).is_err());
    }

    #[test]
    fn lifting_matches_exhaustive_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d = rng.gen_range(1..5);
            let c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-30..31)).collect();
            let f = p(&c);
            for &q in &[2u64, 3, 5, 7, 11, 13, 67, 71] {
                for e in 1..=3 {
                    let m = q.pow(e);
                    if m > 20_000 {
                        continue;
                    }
                    let lifted = roots_prime_power(&f, q, e);
                    assert_eq!(lifted.len() as u64, brute(&f, m), "f = {f}, m = {q}^{e}");
                }
            }
        }
    }

    #[test]
    fn composite_moduli_use_crt() {
        let f = p(&[-1, 0, 1]);
        // x^2 = 1 has 2 roots mod odd prime powers and 4 mod 8
        assert_eq!(roots_mod(&f, 8 * 9 * 25 * 49).unwrap(), 4 * 2 * 2 * 2);
        assert_eq!(roots_mod(&f, 4999 * 4999).unwrap(), 2);
        assert_eq!(
            roots_mod(&p(&[4, 4]), 4 * 1031).unwrap(),
            brute(&p(&[4, 4]), 4 * 1031)
        );
    }
}
