//! Brute-force reference implementations used as oracles.
//!
//! Nothing here goes through composition vectors or the search walker:
//! sets come from plain combinations and images from evaluating the form on
//! every argument tuple.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

pub mod props;

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `|f(A)|` by evaluating all `k^m` tuples.
pub fn image_size(coeffs: &[u64], a: &[i64]) -> usize {
    let m = coeffs.len();
    let k = a.len();
    let mut values = Vec::with_capacity(k.pow(m as u32));
    let mut idx = vec![0usize; m];
    'outer: loop {
        values.push(
            coeffs
                .iter()
                .zip(&idx)
                .map(|(&u, &i)| u as i64 * a[i])
                .sum::<i64>(),
        );
        for i in idx.iter_mut() {
            *i += 1;
            if *i < k {
                continue 'outer;
            }
            *i = 0;
        }
        break;
    }
    values.sort_unstable();
    values.dedup();
    values.len()
}

/// `f(A)` as a set, through the itertools cartesian product.
pub fn image_set(coeffs: &[u64], a: &[i64]) -> BTreeSet<i64> {
    std::iter::repeat_n(a.iter(), coeffs.len())
        .multi_cartesian_product()
        .map(|args| coeffs.iter().zip(args).map(|(&u, &x)| u as i64 * x).sum())
        .collect()
}

/// Canonical k-sets `{0 < ... <= d}` with gcd 1, one per reflection pair
/// (the lexicographically smaller), in lexicographic order.
pub fn canonical_sets(k: usize, d: i64) -> Vec<Vec<i64>> {
    if k == 1 {
        return vec![vec![0]];
    }
    (1..=d)
        .combinations(k - 1)
        .filter(|rest| rest.iter().fold(0, |g, &x| gcd(g, x)) == 1)
        .map(|rest| {
            let mut s = vec![0];
            s.extend(rest);
            s
        })
        .filter(|s| {
            let top = *s.last().unwrap();
            let mut r: Vec<i64> = s.iter().map(|&x| top - x).collect();
            r.sort();
            *s <= r
        })
        .collect()
}

/// Minimum image size over canonical sets, and every set attaining it.
pub fn naive_min(coeffs: &[u64], k: usize, d: i64) -> (usize, Vec<Vec<i64>>) {
    let mut best = usize::MAX;
    let mut witnesses = Vec::new();
    for s in canonical_sets(k, d) {
        let n = image_size(coeffs, &s);
        if n < best {
            best = n;
            witnesses.clear();
        }
        if n == best {
            witnesses.push(s);
        }
    }
    (best, witnesses)
}

/// Image size census over canonical sets.
pub fn naive_census(coeffs: &[u64], k: usize, d: i64) -> BTreeMap<u64, u64> {
    let mut census = BTreeMap::new();
    for s in canonical_sets(k, d) {
        *census.entry(image_size(coeffs, &s) as u64).or_default() += 1;
    }
    census
}

/// Non-decreasing coefficient vectors with gcd 1.
pub fn forms(m: usize, max_coeff: u64) -> Vec<Vec<u64>> {
    (1..=max_coeff)
        .combinations_with_replacement(m)
        .filter(|c| c.iter().fold(0i64, |g, &x| gcd(g, x as i64)) == 1)
        .collect()
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
