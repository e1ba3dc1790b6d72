//! Machine-checkable lower bounds for `N_f(k)`.
//!
//! The main tool is the block decomposition: split a sorted `k`-set into `q`
//! overlapping blocks of `ℓ` elements plus a tail of `r + 1` elements, where
//! `k - 1 = q(ℓ - 1) + r`. Images of consecutive blocks share exactly one
//! value and are otherwise disjoint, so if `N_f(ℓ) >= λ` then
//!
//! ```text
//! |f(A)| >= (λ - 1) q + |f(tail)| >= (λ - 1) q + N_f(r + 1)
//! ```
//!
//! with a tail term of 1 when `r = 0`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{gcd, LinearForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// `|f(A)| = 1` for every singleton.
    TrivialK1,
    /// `N_f(2)` equals the number of subset sums of the coefficients.
    Nf2SubsetSums,
    /// Block decomposition over an exactly known `N_f(ℓ)`.
    LemmaBlock,
    /// Case analysis showing `N_f(3) >= 8` for binary forms other than
    /// `x + y` and `x + 2y`.
    BinaryNf3CaseAnalysis,
}

/// A lower bound on `N_f(k)` together with the data needed to recompute it.
///
/// `chain` lists the exact values `(ℓ, N_f(ℓ))` the bound depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub ell: usize,
    pub lambda: u64,
    pub chain: Vec<(usize, u64)>,
}

impl Certificate {
    pub fn trivial() -> Self {
        Certificate {
            kind: CertificateKind::TrivialK1,
            ell: 1,
            lambda: 1,
            chain: vec![(1, 1)],
        }
    }

    /// Recomputes the bound for `N_f(k)` from the certificate's own fields.
    pub fn bound(&self, k: usize) -> u64 {
        match self.kind {
            CertificateKind::TrivialK1 => 1,
            CertificateKind::Nf2SubsetSums | CertificateKind::BinaryNf3CaseAnalysis => self.lambda,
            CertificateKind::LemmaBlock => {
                let (q, r) = split(k, self.ell);
                (self.lambda - 1) * q as u64 + tail_bound(r, &self.chain).0
            }
        }
    }
}

/// `k - 1 = q(ℓ - 1) + r` with `0 <= r <= ℓ - 2`.
fn split(k: usize, ell: usize) -> (usize, usize) {
    ((k - 1) / (ell - 1), (k - 1) % (ell - 1))
}

/// Lower bound for the image of the `r + 1`-element tail block, and the
/// chain entry it was read from.
///
/// Uses the largest known `N_f(j)` with `j <= r + 1`, padded by one per
/// missing element (each new maximum adds at least one value).
fn tail_bound(r: usize, known: &[(usize, u64)]) -> (u64, Option<(usize, u64)>) {
    if r == 0 {
        return (1, None);
    }
    let size = r + 1;
    known
        .iter()
        .filter(|&&(j, _)| j <= size)
        .map(|&(j, v)| (v + (size - j) as u64, Some((j, v))))
        .max_by_key(|&(b, _)| b)
        .unwrap_or((size as u64, None))
}

/// Strongest block-decomposition bound for `N_f(k)` from exactly known
/// small values.
///
/// `known` maps `ℓ` to the exact `N_f(ℓ)`; it must contain `ℓ = 2`. The
/// entry `1 ↦ 1` is implied. Every `ℓ >= 2` in `known` is tried and the
/// largest resulting bound wins (smallest `ℓ` on ties).
pub fn lower_certificate(
    _f: &LinearForm,
    k: usize,
    known: &BTreeMap<usize, u64>,
) -> Result<Certificate> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let mut known = known.clone();
    known.entry(1).or_insert(1);
    if !known.contains_key(&2) {
        return Err(Error::MissingBaseValue);
    }
    let entries: Vec<(usize, u64)> = known.into_iter().filter(|&(l, _)| l >= 1).collect();
    if entries[0] != (1, 1) {
        return Err(Error::InconsistentKnown {
            lo: 1,
            lo_value: 1,
            hi: 1,
            hi_value: entries[0].1,
        });
    }
    for w in entries.windows(2) {
        let ((lo, lo_value), (hi, hi_value)) = (w[0], w[1]);
        if hi_value <= lo_value {
            return Err(Error::InconsistentKnown {
                lo,
                lo_value,
                hi,
                hi_value,
            });
        }
    }
    if k == 1 {
        return Ok(Certificate::trivial());
    }

    let mut best: Option<(u64, Certificate)> = None;
    for &(ell, lambda) in entries.iter().filter(|&&(l, _)| l >= 2) {
        let (q, r) = split(k, ell);
        let (mu, mu_entry) = tail_bound(r, &entries);
        let bound = (lambda - 1) * q as u64 + mu;

        // The refined bound always dominates ((λ-1)/(ℓ-1))k - λ + 2,
        // compared here after multiplying through by ℓ - 1.
        let lhs = bound as i128 * (ell as i128 - 1);
        let rhs = (lambda as i128 - 1) * k as i128 - (lambda as i128 - 2) * (ell as i128 - 1);
        assert!(
            lhs >= rhs,
            "refined block bound fell below the linear bound"
        );

        if best.as_ref().is_some_and(|(b, _)| *b >= bound) {
            continue;
        }
        let kind = if k == 2 && ell == 2 {
            CertificateKind::Nf2SubsetSums
        } else {
            CertificateKind::LemmaBlock
        };
        let mut chain = vec![(ell, lambda)];
        chain.extend(mu_entry);
        chain.sort_unstable();
        chain.dedup();
        best = Some((
            bound,
            Certificate {
                kind,
                ell,
                lambda,
                chain,
            },
        ));
    }
    Ok(best.expect("ℓ = 2 is always present").1)
}

/// Returns 8 when the binary form `u1 x + u2 y` (coprime, `u1 < u2`) falls
/// outside the two exceptional forms, i.e. when `u2 >= 3`.
///
/// Seven values of `f({a < b < c})` are always strictly ordered; reaching
/// only seven would force one of three pairs of linear coincidences. Two of
/// them reduce to `(u1² + u1·u2 - u2²)(c - b) = 0` and the third to
/// `(u2 - 2u1)(c - a) = 0`. Both factors are checked explicitly here.
pub fn binary_nf3_bound(u1: u64, u2: u64) -> Result<Option<u64>> {
    let (u1, u2) = (u1.min(u2), u1.max(u2));
    if gcd(u1, u2) != 1 {
        return Err(Error::NotCoprime(u1, u2));
    }
    if u1 == u2 || u2 < 3 {
        return Ok(None);
    }
    let (a, b) = (u1 as i128, u2 as i128);
    let quadratic = a * a + a * b - b * b;
    if quadratic != 0 && b != 2 * a {
        Ok(Some(8))
    } else {
        Ok(None)
    }
}

pub fn binary_nf3_certificate(f: &LinearForm) -> Result<Option<u64>> {
    match f.coeffs() {
        &[u1, u2] => binary_nf3_bound(u1, u2),
        c => Err(Error::NotBinary { arity: c.len() }),
    }
}

pub(crate) fn binary_certificate() -> Certificate {
    Certificate {
        kind: CertificateKind::BinaryNf3CaseAnalysis,
        ell: 3,
        lambda: 8,
        chain: Vec::new(),
    }
}
