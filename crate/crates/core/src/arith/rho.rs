//! Pollard rho with Brent's cycle detection and batched gcds.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::primes::mul_mod;

const BATCH: u64 = 128;

/// Iteration counter shared by all rho attempts of one factorization.
#[derive(Debug)]
pub(crate) struct Budget {
    remaining: u64,
}

impl Budget {
    pub(crate) fn new(iterations: u64) -> Self {
        Budget {
            remaining: iterations,
        }
    }

    fn spend(&mut self, n: u64) -> bool {
        if self.remaining < n {
            self.remaining = 0;
            false
        } else {
            self.remaining -= n;
            true
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn brent_u64(n: u64, c: u64, budget: &mut Budget) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2 % n;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        if !budget.spend(r) {
            return None;
        }
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if !budget.spend(steps) {
                return None;
            }
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            if !budget.spend(1) {
                return None;
            }
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// A nontrivial divisor of the odd composite `n`, or `None` once the budget runs out.
pub(crate) fn split_u64(n: u64, budget: &mut Budget) -> Option<u64> {
    debug_assert!(n > 3 && n % 2 == 1);
    let r = (n as f64).sqrt() as u64;
    for cand in [r.saturating_sub(1), r, r + 1] {
        if cand > 1 && cand.checked_mul(cand) == Some(n) {
            return Some(cand);
        }
    }
    for c in 1.. {
        if budget.remaining == 0 {
            return None;
        }
        if let Some(d) = brent_u64(n, c, budget) {
            return Some(d);
        }
    }
    None
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

fn brent_big(n: &BigUint, c: u64, budget: &mut Budget) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32) % n;
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        if !budget.spend(r) {
            return None;
        }
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if !budget.spend(steps) {
                return None;
            }
            for _ in 0..steps {
                y = f(&y);
                q = (&q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            if !budget.spend(1) {
                return None;
            }
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n && !g.is_zero()).then_some(g)
}

pub(crate) fn split_big(n: &BigUint, budget: &mut Budget) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        return Some(r);
    }
    for c in 1.. {
        if budget.remaining == 0 {
            return None;
        }
        if let Some(d) = brent_big(n, c, budget) {
            return Some(d);
        }
    }
    None
}
