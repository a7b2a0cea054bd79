//! Prime tables and primality tests.
//!
//! Word-sized inputs use a deterministic Miller-Rabin base set. Larger inputs
//! use Miller-Rabin on the first thirteen primes (deterministic below
//! 3.3 * 10^24) followed by a strong Lucas test, i.e. the Baillie-PSW test.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Upper end of the shared prime table.
pub const SIEVE_LIMIT: u32 = 1_000_000;

static TABLE: OnceLock<Vec<u32>> = OnceLock::new();

/// All primes up to [`SIEVE_LIMIT`], built once on first use.
pub fn small_primes() -> &'static [u32] {
    TABLE.get_or_init(|| {
        primes_up_to(SIEVE_LIMIT as u64)
            .into_iter()
            .map(|p| p as u32)
            .collect()
    })
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Iterator over all primes in increasing order, unbounded.
pub fn primes() -> impl Iterator<Item = u64> {
    small_primes()
        .iter()
        .map(|&p| p as u64)
        .chain(((SIEVE_LIMIT as u64 + 1)..).filter(|&n| is_prime_u64(n)))
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, a: u64) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = BigUint::from(a).modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a / n) for odd positive n.
pub(crate) fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut n = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n);
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    let half: BigInt = x >> 1;
    half.mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let nn = BigInt::from(n.clone());
    let mut d_param: i64 = 5;
    loop {
        match jacobi(&BigInt::from(d_param), n) {
            -1 => break,
            0 if BigInt::from(d_param).abs() != nn => {
                return false;
            }
            _ => {}
        }
        d_param = if d_param > 0 {
            -(d_param + 2)
        } else {
            -d_param + 2
        };
        if d_param.abs() > 1_000_000 {
            // Only perfect squares fail to find D this late; checked by the caller.
            return false;
        }
    }
    let p = BigInt::one();
    let q = BigInt::from((1 - d_param) / 4);
    let d = BigInt::from(d_param);
    let n_plus_1: BigInt = &nn + 1;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&nn);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&nn);
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if k.bit(i) {
            let u2 = half_mod(&p * &u + &v, &nn);
            let v2 = half_mod(&d * &u + &p * &v, &nn);
            u = u2;
            v = v2;
            qk = (&qk * &q).mod_floor(&nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&nn);
    }
    false
}

/// Primality of an arbitrary-size natural number.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !MR_BASES.iter().all(|&a| strong_probable_prime(n, a)) {
        return false;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        return false;
    }
    strong_lucas(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_trial_division() {
        let table = primes_up_to(2000);
        for n in 0..2000u64 {
            let brute = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(table.binary_search(&n).is_ok(), brute, "n = {n}");
            assert_eq!(is_prime_u64(n), brute, "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 3215031751, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_primality() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes
        let m89 = (BigUint::one() << 89) - 1u32;
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m89));
        assert!(is_prime(&m127));
        let composite = &m89 * &m127;
        assert!(!is_prime(&composite));
        let square = &m89 * &m89;
        assert!(!is_prime(&square));
        // 3.186658578340311511e23, a strong pseudoprime to the first 12 prime bases
        let spsp: BigUint = "318665857834031151167461".parse().unwrap();
        assert!(!is_prime(&spsp));
    }

    #[test]
    fn jacobi_small_table() {
        // (a/15) computed from (a/3)(a/5)
        let leg3 = [0, 1, -1];
        let leg5 = [0, 1, -1, -1, 1];
        for a in 0..30i64 {
            let expected = leg3[(a % 3) as usize] * leg5[(a % 5) as usize];
            assert_eq!(jacobi(&BigInt::from(a), &BigUint::from(15u32)), expected);
        }
    }
}
