//! Certified computation of `N_f(k)` and exact computation of `M_f(k)`.

mod certificate;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use certificate::{
    binary_nf3_bound, binary_nf3_certificate, lower_certificate, Certificate, CertificateKind,
};
pub(crate) use search::{is_reflection_representative, Visitor, Walker};
pub use search::{search_min, SearchConfig, SearchOutcome, DEFAULT_WITNESS_CAP};

use crate::error::{Error, Result};
use crate::forms::LinearForm;
use crate::sets::{composition_vectors, image};

/// `N_f(2)`, which is the number of subset sums of the coefficients.
///
/// On `{a < b}` the values are `U a + s (b - a)` for `s` a subset sum, and
/// these are pairwise distinct, so every 2-set gives the same count.
pub fn exact_nf2(f: &LinearForm) -> u64 {
    f.subset_sums().len() as u64
}

/// Search diameter used when none is given: `U (k - 1)`.
pub fn default_diameter(f: &LinearForm, k: usize) -> i64 {
    f.u_total() as i64 * (k as i64 - 1).max(0)
}

#[derive(Clone, Debug)]
pub struct NfConfig {
    /// Defaults to [`default_diameter`].
    pub diameter: Option<i64>,
    /// Largest `ℓ` for which an exact `N_f(ℓ)` is bootstrapped.
    pub ladder_max_ell: usize,
    pub witness_cap: Option<usize>,
    /// Node budget per individual search.
    pub budget_nodes: Option<u64>,
}

impl Default for NfConfig {
    fn default() -> Self {
        NfConfig {
            diameter: None,
            ladder_max_ell: 4,
            witness_cap: Some(DEFAULT_WITNESS_CAP),
            budget_nodes: None,
        }
    }
}

/// `N_f(k)` bracketed between a certified lower bound and the least image
/// size found within the searched diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalResult {
    #[serde(rename = "coeffs")]
    pub form: LinearForm,
    pub k: usize,
    pub diameter: i64,
    pub lower: u64,
    pub certificate: Certificate,
    pub best: u64,
    pub exact: bool,
    pub witnesses: Vec<crate::sets::KSet>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub witness_overflow: bool,
    pub nodes: u64,
}

/// Exact `N_f(ℓ)` for small `ℓ`, each certified by a lower bound meeting a
/// realized value. Always contains `1` and `2`; stops at the first `ℓ`
/// that cannot be certified.
pub fn certified_ladder(
    f: &LinearForm,
    config: &NfConfig,
    up_to: usize,
) -> Result<BTreeMap<usize, u64>> {
    let mut ladder = BTreeMap::from([(1, 1), (2, exact_nf2(f))]);
    for ell in 3..=up_to.min(config.ladder_max_ell) {
        let (lower, _) = certify(f, ell, &ladder)?;
        let search = SearchConfig {
            diameter: default_diameter(f, ell),
            prune_at: None,
            witness_cap: Some(1),
            budget_nodes: config.budget_nodes,
        };
        let best = search_min(f, ell, &search)?.best.expect("no pruning bound");
        if best < lower {
            return Err(Error::CertificateViolation {
                k: ell,
                lower,
                best,
            });
        }
        if best != lower {
            break;
        }
        ladder.insert(ell, best);
    }
    Ok(ladder)
}

/// Strongest available certificate for `N_f(k)` using ladder values below `k`.
fn certify(f: &LinearForm, k: usize, ladder: &BTreeMap<usize, u64>) -> Result<(u64, Certificate)> {
    let below: BTreeMap<usize, u64> = ladder.range(..k.max(3)).map(|(&l, &v)| (l, v)).collect();
    let mut cert = lower_certificate(f, k, &below)?;
    if k == 3 && f.arity() == 2 {
        if let Some(b) = binary_nf3_certificate(f)? {
            if b > cert.bound(k) {
                cert = certificate::binary_certificate();
            }
        }
    }
    Ok((cert.bound(k), cert))
}

/// Certified bracket for `N_f(k)`.
///
/// Bootstraps exact values `N_f(3..=ladder_max_ell)`, derives the best
/// lower certificate for `k` from them, and searches all canonical k-sets
/// within the diameter. The result is exact only when the two meet.
pub fn compute_nf(f: &LinearForm, k: usize, config: &NfConfig) -> Result<ExtremalResult> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let diameter = config.diameter.unwrap_or_else(|| default_diameter(f, k));
    let ladder = certified_ladder(f, config, k - 1)?;
    let (lower, certificate) = certify(f, k, &ladder)?;
    let search = SearchConfig {
        diameter,
        prune_at: None,
        witness_cap: config.witness_cap,
        budget_nodes: config.budget_nodes,
    };
    let out = search_min(f, k, &search)?;
    let best = out.best.expect("no pruning bound");
    if lower > best {
        return Err(Error::CertificateViolation { k, lower, best });
    }
    Ok(ExtremalResult {
        form: f.clone(),
        k,
        diameter,
        lower,
        certificate,
        best,
        exact: lower == best,
        witnesses: out.witnesses,
        witness_overflow: out.witness_overflow,
        nodes: out.nodes,
    })
}

/// All canonical minimizing k-sets within `diameter`, one per reflection
/// pair, in lexicographic order. Refuses unless `N_f(k)` is certified.
pub fn enumerate_minimizers(
    f: &LinearForm,
    k: usize,
    diameter: i64,
) -> Result<Vec<crate::sets::KSet>> {
    let config = NfConfig {
        diameter: Some(diameter),
        witness_cap: None,
        ..NfConfig::default()
    };
    let r = compute_nf(f, k, &config)?;
    if !r.exact {
        return Err(Error::NotCertifiedExact {
            k,
            lower: r.lower,
            best: r.best,
            diameter,
        });
    }
    Ok(r.witnesses)
}

/// `M_f(k)` with a set realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfResult {
    #[serde(rename = "coeffs")]
    pub form: LinearForm,
    pub k: usize,
    pub value: u64,
    /// `{1, g, ..., g^(k-1)}` with `g = m u_max + 1`.
    pub witness: Vec<i64>,
}

/// `M_f(k)` is the number of distinct composition vectors.
///
/// Every value on a k-set is a composition vector dotted with the set, so no
/// set does better. On `{1, g, ..., g^(k-1)}` with `g > m u_max >= U` each
/// slot sum is a base-`g` digit, so distinct vectors give distinct values.
/// The witness is evaluated before returning.
pub fn compute_mf(f: &LinearForm, k: usize) -> Result<MfResult> {
    let value = composition_vectors(f, k)?.len() as u64;
    let g = (f.arity() as i64)
        .checked_mul(f.u_max() as i64)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow)?;
    let mut witness = Vec::with_capacity(k);
    let mut p = 1i64;
    for t in 0..k {
        if t > 0 {
            p = p.checked_mul(g).ok_or(Error::Overflow)?;
        }
        witness.push(p);
    }
    let got = image(f, &witness)?.size() as u64;
    if got != value {
        return Err(Error::WitnessMismatch {
            expected: value,
            got,
        });
    }
    Ok(MfResult {
        form: f.clone(),
        k,
        value,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::KSet;

    fn form(c: &[u64]) -> LinearForm {
        LinearForm::from_coeffs(c).unwrap()
    }

    #[test]
    fn nf2_examples() {
        assert_eq!(exact_nf2(&form(&[1, 2, 3])), 7);
        assert_eq!(exact_nf2(&form(&[1, 1, 2])), 5);
        assert_eq!(exact_nf2(&form(&[1, 2, 4])), 8);
    }

    #[test]
    fn nf_examples() {
        let r = compute_nf(&form(&[1, 2, 3]), 4, &NfConfig::default()).unwrap();
        assert_eq!((r.lower, r.best, r.exact), (19, 19, true));
        assert_eq!(r.witnesses, vec![KSet::progression(4)]);

        let r = compute_nf(&form(&[1, 3]), 3, &NfConfig::default()).unwrap();
        assert_eq!((r.lower, r.best, r.exact), (8, 8, true));
        assert_eq!(r.certificate.kind, CertificateKind::BinaryNf3CaseAnalysis);

        let r = compute_nf(&form(&[1, 1]), 5, &NfConfig::default()).unwrap();
        assert_eq!((r.lower, r.best, r.exact), (9, 9, true));
    }

    #[test]
    fn nf_k1_is_trivial() {
        for f in [form(&[1]), form(&[3, 7]), form(&[1, 2, 2])] {
            let r = compute_nf(&f, 1, &NfConfig::default()).unwrap();
            assert_eq!((r.lower, r.best, r.exact), (1, 1, true));
            assert_eq!(r.certificate.kind, CertificateKind::TrivialK1);
        }
    }

    #[test]
    fn incomplete_binary_is_an_honest_bracket_at_k4() {
        let r = compute_nf(&form(&[1, 3]), 4, &NfConfig::default()).unwrap();
        assert_eq!(r.lower, 11);
        assert_eq!(r.best, 12);
        assert!(!r.exact);
        assert!(r.witnesses.iter().any(|w| w.elems() == [0, 1, 3, 4]));
        assert_eq!(r.lower, r.certificate.bound(4));
    }

    #[test]
    fn minimizer_examples() {
        let p = |k| vec![KSet::progression(k)];
        assert_eq!(enumerate_minimizers(&form(&[1, 2]), 3, 8).unwrap(), p(3));
        assert_eq!(enumerate_minimizers(&form(&[1, 1]), 3, 8).unwrap(), p(3));
        let w = enumerate_minimizers(&form(&[1, 3]), 3, 9).unwrap();
        let expected: Vec<KSet> = [vec![0, 1, 3], vec![0, 1, 4]]
            .into_iter()
            .map(|e| KSet::from_canonical(e).unwrap())
            .collect();
        assert_eq!(w, expected);
        assert!(w.iter().all(|s| !s.is_arithmetic_progression()));
        assert!(matches!(
            enumerate_minimizers(&form(&[1, 3]), 4, 12),
            Err(Error::NotCertifiedExact { .. })
        ));
    }

    #[test]
    fn mf_examples() {
        assert_eq!(compute_mf(&form(&[1, 1]), 3).unwrap().value, 6);
        assert_eq!(compute_mf(&form(&[1, 2, 4]), 2).unwrap().value, 8);
        assert_eq!(compute_mf(&form(&[1, 1, 1]), 2).unwrap().value, 4);
        let r = compute_mf(&form(&[1, 2, 4]), 3).unwrap();
        assert_eq!(r.value, 27);
        assert_eq!(r.witness, vec![1, 13, 169]);
    }

    #[test]
    fn mf_overflow_is_reported() {
        let err = compute_mf(&form(&[1, 1000]), 10).unwrap_err();
        assert!(err.is_capacity());
    }
}
