//! Incremental row reduction over F_p with columns discovered online.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;

use crate::arith::{mul_mod, Factorization};

/// Basis of the span of exponent vectors seen so far, modulo `p`.
///
/// Columns are primes in order of first appearance; for `p = 2` column 0 is
/// the sign.
#[derive(Debug)]
pub(crate) struct ExponentSpan {
    p: u64,
    columns: HashMap<BigUint, usize>,
    next_column: usize,
    basis: Basis,
}

#[derive(Debug)]
enum Basis {
    Binary(HashMap<usize, Vec<u64>>),
    Sparse(HashMap<usize, BTreeMap<usize, u64>>),
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn inverse(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

impl ExponentSpan {
    pub(crate) fn new(p: u64) -> Self {
        let (basis, next_column) = if p == 2 {
            (Basis::Binary(HashMap::new()), 1)
        } else {
            (Basis::Sparse(HashMap::new()), 0)
        };
        ExponentSpan {
            p,
            columns: HashMap::new(),
            next_column,
            basis,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        match &self.basis {
            Basis::Binary(b) => b.len(),
            Basis::Sparse(b) => b.len(),
        }
    }

    /// Number of distinct primes met so far.
    pub(crate) fn primes_seen(&self) -> usize {
        self.columns.len()
    }

    fn column(&mut self, q: &BigUint) -> usize {
        if let Some(&c) = self.columns.get(q) {
            return c;
        }
        let c = self.next_column;
        self.next_column += 1;
        self.columns.insert(q.clone(), c);
        c
    }

    /// Adds the exponent vector of `f` (exponents taken mod `p`); returns
    /// whether the rank grew.
    pub(crate) fn insert(&mut self, f: &Factorization) -> bool {
        let p = self.p;
        let entries: Vec<(usize, u64)> = f
            .factors()
            .iter()
            .filter(|(_, e)| !(*e as u64).is_multiple_of(p))
            .map(|(q, e)| (self.column(q), *e as u64 % p))
            .collect();
        match &mut self.basis {
            Basis::Binary(basis) => {
                let mut row = vec![0u64; self.next_column / 64 + 1];
                if f.is_negative() {
                    row[0] |= 1;
                }
                for (c, _) in entries {
                    row[c / 64] ^= 1 << (c % 64);
                }
                while let Some(b) = lowest_bit(&row) {
                    match basis.get(&b) {
                        Some(pivot) => {
                            for (w, x) in row.iter_mut().zip(pivot) {
                                *w ^= x;
                            }
                        }
                        None => {
                            basis.insert(b, row);
                            return true;
                        }
                    }
                }
                false
            }
            Basis::Sparse(basis) => {
                let mut row: BTreeMap<usize, u64> = entries.into_iter().collect();
                while let Some((&b, &c)) = row.iter().next() {
                    match basis.get(&b) {
                        Some(pivot) => {
                            for (&k, &v) in pivot {
                                let cur = row.get(&k).copied().unwrap_or(0);
                                let next = (cur + p - mul_mod(c, v, p)) % p;
                                if next == 0 {
                                    row.remove(&k);
                                } else {
                                    row.insert(k, next);
                                }
                            }
                        }
                        None => {
                            let s = inverse(c, p);
                            for v in row.values_mut() {
                                *v = mul_mod(*v, s, p);
                            }
                            basis.insert(b, row);
                            return true;
                        }
                    }
                }
                false
            }
        }
    }
}
