//! Dense polynomials over the prime field F_q for word-sized odd or even q,
//! lowest degree first. Used for splitting types, root finding and as the
//! starting point of Hensel lifting.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::{mul_mod, pow_mod};

pub(crate) type ModPoly = Vec<u64>;

fn trim(a: &mut ModPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

pub(crate) fn degree(a: &[u64]) -> usize {
    a.len().saturating_sub(1)
}

pub(crate) fn sub(a: &[u64], b: &[u64], q: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut out: ModPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + q - y) % q
        })
        .collect();
    trim(&mut out);
    out
}

#[cfg(test)]
pub(crate) fn add(a: &[u64], b: &[u64], q: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut out: ModPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % q)
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], q: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, q)) % q;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u64], k: u64, q: u64) -> ModPoly {
    let mut out: ModPoly = a.iter().map(|&x| mul_mod(x, k, q)).collect();
    trim(&mut out);
    out
}

pub(crate) fn monic(a: &[u64], q: u64) -> ModPoly {
    match a.last() {
        Some(&lc) => scale(a, inv(lc, q), q),
        None => Vec::new(),
    }
}

pub(crate) fn divrem(a: &[u64], b: &[u64], q: u64) -> (ModPoly, ModPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lc_inv = inv(b[db], q);
    let mut quot = vec![0u64; r.len() - db];
    for i in (0..quot.len()).rev() {
        let t = mul_mod(r[i + db], lc_inv, q);
        if t == 0 {
            continue;
        }
        quot[i] = t;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + q - mul_mod(t, bj, q)) % q;
        }
    }
    trim(&mut r);
    trim(&mut quot);
    (quot, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], q: u64) -> ModPoly {
    divrem(a, b, q).1
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u64], b: &[u64], q: u64) -> ModPoly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, q);
        a = b;
        b = r;
    }
    monic(&a, q)
}

/// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub(crate) fn ext_gcd(a: &[u64], b: &[u64], q: u64) -> (ModPoly, ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (ModPoly, ModPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (ModPoly, ModPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quo, r) = divrem(&r0, &r1, q);
        let s = sub(&s0, &mul(&quo, &s1, q), q);
        let t = sub(&t0, &mul(&quo, &t1, q), q);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc_inv = inv(*r0.last().expect("gcd of zero polynomials"), q);
    (
        scale(&r0, lc_inv, q),
        scale(&s0, lc_inv, q),
        scale(&t0, lc_inv, q),
    )
}

pub(crate) fn derivative(a: &[u64], q: u64) -> ModPoly {
    let mut out: ModPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % q, q))
        .collect();
    trim(&mut out);
    out
}

/// `base^exp mod modulus`.
pub(crate) fn pow_mod_poly(base: &[u64], exp: &BigUint, modulus: &[u64], q: u64) -> ModPoly {
    let mut acc: ModPoly = rem(&[1], modulus, q);
    let base = rem(base, modulus, q);
    for i in (0..exp.bits()).rev() {
        acc = rem(&mul(&acc, &acc, q), modulus, q);
        if exp.bit(i) {
            acc = rem(&mul(&acc, &base, q), modulus, q);
        }
    }
    acc
}

pub(crate) fn eval(a: &[u64], x: u64, q: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod(acc, x, q) + c) % q)
}

pub(crate) fn is_squarefree(a: &[u64], q: u64) -> bool {
    degree(&gcd(a, &derivative(a, q), q)) == 0
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(d, product of all irreducible factors of degree d)`.
pub(crate) fn distinct_degree(f: &[u64], q: u64) -> Vec<(usize, ModPoly)> {
    let mut f = monic(f, q);
    let mut out = Vec::new();
    let x: ModPoly = vec![0, 1];
    let qb = BigUint::from(q);
    let mut h = rem(&x, &f, q);
    let mut d = 1;
    while degree(&f) >= 2 * d {
        h = pow_mod_poly(&h, &qb, &f, q);
        let g = gcd(&sub(&h, &x, q), &f, q);
        if degree(&g) > 0 {
            f = divrem(&f, &g, q).0;
            h = rem(&h, &f, q);
            out.push((d, g));
        }
        d += 1;
    }
    if degree(&f) > 0 {
        out.push((degree(&f), f));
    }
    out
}

/// Splitting type: sorted degrees of the irreducible factors of a
/// squarefree polynomial.
pub(crate) fn factor_degrees(f: &[u64], q: u64) -> Vec<u32> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, q) {
        for _ in 0..degree(&g) / d {
            out.push(d as u32);
        }
    }
    out.sort_unstable();
    out
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a monic squarefree `f`
/// whose irreducible factors all have degree `d`. Requires odd `q`.
pub(crate) fn equal_degree(f: &[u64], d: usize, q: u64) -> Vec<ModPoly> {
    assert!(
        q % 2 == 1,
        "equal-degree splitting needs odd characteristic"
    );
    let mut rng = SplitMix(0x5eed ^ q ^ ((f.len() as u64) << 32));
    let exp = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1u32;
    let mut pending = vec![monic(f, q)];
    let mut done = Vec::new();
    while let Some(g) = pending.pop() {
        if degree(&g) <= d {
            done.push(g);
            continue;
        }
        loop {
            let mut a: ModPoly = (0..degree(&g)).map(|_| rng.next() % q).collect();
            trim(&mut a);
            if degree(&a) == 0 {
                continue;
            }
            let mut split = gcd(&a, &g, q);
            if degree(&split) == 0 {
                let b = pow_mod_poly(&a, &exp, &g, q);
                split = gcd(&sub(&b, &[1], q), &g, q);
            }
            if degree(&split) > 0 && degree(&split) < degree(&g) {
                let other = divrem(&g, &split, q).0;
                pending.push(split);
                pending.push(monic(&other, q));
                break;
            }
        }
    }
    done.sort();
    done
}

/// Complete factorization of a squarefree polynomial into monic irreducibles.
pub(crate) fn factor_squarefree(f: &[u64], q: u64) -> Vec<ModPoly> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, q) {
        if degree(&g) == d {
            out.push(g);
        } else {
            out.extend(equal_degree(&g, d, q));
        }
    }
    out
}

/// Distinct roots in F_q of a nonzero polynomial.
pub(crate) fn roots(f: &[u64], q: u64) -> Vec<u64> {
    debug_assert!(!f.is_empty());
    if q <= 64 || degree(f) == 0 {
        return (0..q).filter(|&x| eval(f, x, q) == 0).collect();
    }
    let fm = monic(f, q);
    let xq = pow_mod_poly(&[0, 1], &BigUint::from(q), &fm, q);
    let g = gcd(&sub(&xq, &[0, 1], q), &fm, q);
    if degree(&g) == 0 {
        return Vec::new();
    }
    let mut out: Vec<u64> = equal_degree(&g, 1, q)
        .into_iter()
        .map(|lin| (q - lin[0]) % q)
        .collect();
    out.sort_unstable();
    out
}
