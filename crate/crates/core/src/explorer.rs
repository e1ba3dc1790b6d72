//! Spectra of image sizes, and bounded scans for two converse questions:
//! must a form be complete when its minimum is `U k - U + 1`, and must it be
//! complete when its only minimizers are arithmetic progressions?
//!
//! Everything here is relative to a searched diameter. A bracket that is not
//! exact is never counted as evidence either way.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{compute_nf, is_reflection_representative, NfConfig, Visitor, Walker};
use crate::error::Result;
use crate::forms::LinearForm;
use crate::sets::composition_vectors;
use crate::theory::{complete_formula, normalized_forms};

/// Every image size reached by canonical `k`-sets within a diameter, with
/// the number of sets (one per reflection pair) reaching it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    #[serde(rename = "coeffs")]
    pub form: LinearForm,
    pub k: usize,
    pub diameter: i64,
    pub values: Vec<u64>,
    pub census: BTreeMap<u64, u64>,
    pub is_interval: bool,
    /// The largest value found equals `M_f(k)`.
    pub mf_reached: bool,
}

impl SpectrumReport {
    /// Total number of sets counted.
    pub fn total(&self) -> u64 {
        self.census.values().sum()
    }
}

#[derive(Default)]
struct Census {
    counts: BTreeMap<u64, u64>,
}

impl Visitor for Census {
    fn threshold(&self) -> u64 {
        u64::MAX
    }

    fn leaf(&mut self, elems: &[i64], size: u64) {
        if is_reflection_representative(elems) {
            *self.counts.entry(size).or_default() += 1;
        }
    }
}

/// Enumerates all canonical `k`-sets up to `diameter` without pruning.
///
/// Realizing `M_f(k)` may need a set far wider than `diameter` (the generic
/// witness has diameter about `(m u_max + 1)^(k-2)`); `mf_reached` reports
/// whether it happened.
pub fn spectrum(
    f: &LinearForm,
    k: usize,
    diameter: i64,
    budget_nodes: Option<u64>,
) -> Result<SpectrumReport> {
    let walker = Walker::new(f, k, diameter, budget_nodes)?;
    let mut root = Census::default();
    walker.walk_root(&mut root)?;
    let parts = walker
        .branches()
        .par_iter()
        .map(|&a1| {
            let mut c = Census::default();
            walker.walk_branch(a1, &mut c).map(|()| c.counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut census = root.counts;
    for part in parts {
        for (v, n) in part {
            *census.entry(v).or_default() += n;
        }
    }
    let values: Vec<u64> = census.keys().copied().collect();
    let (lo, hi) = (values[0], *values.last().unwrap());
    let mf = composition_vectors(f, k)?.len() as u64;
    Ok(SpectrumReport {
        form: f.clone(),
        k,
        diameter,
        is_interval: hi - lo + 1 == values.len() as u64,
        mf_reached: hi == mf,
        values,
        census,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanStatus {
    Consistent,
    /// Exact data answering the scanned question in the negative.
    CandidateCounterexample,
    /// The bracket for `N_f(k)` is not exact and does not settle the case.
    Inconclusive,
    /// A complete form with a minimizer that is not a progression; this
    /// contradicts a theorem and means the engine is wrong.
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFinding {
    #[serde(rename = "coeffs")]
    pub form: LinearForm,
    pub k: usize,
    pub lower: u64,
    pub best: u64,
    pub exact: bool,
    /// `U k - U + 1`.
    pub predicted: u64,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all_minimizers_ap: Option<bool>,
    pub status: ScanStatus,
}

#[derive(Clone, Debug)]
pub struct ScanBounds {
    pub m: usize,
    pub max_coeff: u64,
    pub k: usize,
    /// `U (k - 1)` when absent.
    pub diameter: Option<i64>,
    pub budget_nodes: Option<u64>,
}

impl ScanBounds {
    pub fn new(m: usize, max_coeff: u64, k: usize) -> Self {
        ScanBounds {
            m,
            max_coeff,
            k,
            diameter: None,
            budget_nodes: None,
        }
    }

    fn config(&self) -> NfConfig {
        NfConfig {
            diameter: self.diameter,
            witness_cap: None,
            budget_nodes: self.budget_nodes,
            ..NfConfig::default()
        }
    }
}

/// Incomplete forms checked for `N_f(k) = U k - U + 1`.
///
/// At `k = 1` every form has the value 1, so those findings are consistent
/// by definition.
pub fn scan_completeness_converse(bounds: &ScanBounds) -> Result<Vec<ScanFinding>> {
    let forms: Vec<LinearForm> = normalized_forms(bounds.m, bounds.max_coeff)
        .into_iter()
        .filter(|f| !f.is_complete())
        .collect();
    forms
        .par_iter()
        .map(|f| {
            let r = compute_nf(f, bounds.k, &bounds.config())?;
            let predicted = complete_formula(f.u_total(), bounds.k as u64);
            let status = if r.exact {
                if r.best == predicted && bounds.k >= 2 {
                    ScanStatus::CandidateCounterexample
                } else {
                    ScanStatus::Consistent
                }
            } else if (r.lower..=r.best).contains(&predicted) {
                ScanStatus::Inconclusive
            } else {
                ScanStatus::Consistent
            };
            Ok(ScanFinding {
                form: f.clone(),
                k: bounds.k,
                lower: r.lower,
                best: r.best,
                exact: r.exact,
                predicted,
                complete: false,
                all_minimizers_ap: None,
                status,
            })
        })
        .collect()
}

/// Every form checked for the relation between completeness and having only
/// progressions as minimizers.
///
/// For `k <= 2` every set is a progression, so the property says nothing and
/// those findings are consistent by definition.
pub fn scan_ap_minimizer_converse(bounds: &ScanBounds) -> Result<Vec<ScanFinding>> {
    let forms = normalized_forms(bounds.m, bounds.max_coeff);
    forms
        .par_iter()
        .map(|f| {
            let r = compute_nf(f, bounds.k, &bounds.config())?;
            let complete = f.is_complete();
            let all_ap = r.witnesses.iter().all(|w| w.is_arithmetic_progression());
            let status = if !r.exact {
                ScanStatus::Inconclusive
            } else if complete && !all_ap {
                ScanStatus::Contradiction
            } else if !complete && all_ap && bounds.k >= 3 {
                ScanStatus::CandidateCounterexample
            } else {
                ScanStatus::Consistent
            };
            Ok(ScanFinding {
                form: f.clone(),
                k: bounds.k,
                lower: r.lower,
                best: r.best,
                exact: r.exact,
                predicted: complete_formula(f.u_total(), bounds.k as u64),
                complete,
                all_minimizers_ap: r.exact.then_some(all_ap),
                status,
            })
        })
        .collect()
}
