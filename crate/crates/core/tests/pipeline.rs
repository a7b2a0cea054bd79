//! End-to-end checks through the public API against brute-force oracles.

use std::collections::{BTreeMap, HashSet};

use fiberfield::covers::parse_cover;
use fiberfield::diversity::{strong_diversity_rank, weak_diversity_count, EngineOptions, Method};
use fiberfield::polyring::IntPoly;
use fiberfield::sieve::squarefree_value_count;

fn trial_factor(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Exponents mod 3 of a positive integer, with zero entries dropped.
fn cube_class(v: u64, twist: u32) -> Vec<(u64, u32)> {
    trial_factor(v)
        .into_iter()
        .map(|(q, e)| (q, (e * twist) % 3))
        .filter(|&(_, e)| e != 0)
        .collect()
}

#[test]
fn cubic_cover_matches_twist_oracle() {
    // -1 is a cube, so only |x^2 + 1| matters
    let cover = parse_cover("y^3 = x^2 + 1").unwrap();
    let n = 400;
    let report = weak_diversity_count(&cover, n, Method::Exact, &EngineOptions::default()).unwrap();
    let mut seen = HashSet::new();
    for k in 1..=n {
        let v = k * k + 1;
        let key = cube_class(v, 1).min(cube_class(v, 2));
        seen.insert(key);
        assert_eq!(report.series[k as usize - 1], seen.len() as u64, "n = {k}");
    }
}

#[test]
fn method_ordering_on_a_cubic_cover() {
    let cover = parse_cover("y^3 = x^2 + 1").unwrap();
    let opts = EngineOptions::default();
    let exact = weak_diversity_count(&cover, 300, Method::Exact, &opts).unwrap();
    let ramified = weak_diversity_count(&cover, 300, Method::Ramified, &opts).unwrap();
    let fingerprint = weak_diversity_count(&cover, 300, Method::Fingerprint, &opts).unwrap();
    for i in 0..300 {
        assert!(ramified.series[i] <= exact.series[i]);
        assert!(fingerprint.series[i] <= exact.series[i]);
    }
}

/// Rank over F_3 by dense elimination.
fn rank_mod3(rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][c]; // 1 and 2 are self-inverse mod 3
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % 3;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x = (*x + 3 * 3 - f * y) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn cubic_compositum_rank_matches_elimination() {
    let cover = parse_cover("y^3 = x^2 + 2").unwrap();
    let n = 80u64;
    let report = strong_diversity_rank(&cover, n, &EngineOptions::default()).unwrap();
    let factored: Vec<_> = (1..=n).map(|k| trial_factor(k * k + 2)).collect();
    let primes: Vec<u64> = factored
        .iter()
        .flat_map(|f| f.keys().copied())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    for k in 1..=n as usize {
        let rows: Vec<Vec<u32>> = factored[..k]
            .iter()
            .map(|f| primes.iter().map(|q| f.get(q).copied().unwrap_or(0) % 3).collect())
            .collect();
        assert_eq!(report.rank_series[k - 1] as usize, rank_mod3(&rows), "n = {k}");
    }
}

#[test]
fn squarefree_count_matches_trial_division() {
    let h = IntPoly::parse("x^2 + x + 1").unwrap();
    let n = 3000;
    let report = squarefree_value_count(&h, n).unwrap();
    let expected = (1..=n)
        .filter(|&k| trial_factor(k * k + k + 1).values().all(|&e| e == 1))
        .count() as u64;
    assert!(report.fixed_square_primes.is_empty());
    assert_eq!(report.count, expected);
}
