//! Closed-form values and case tables, and suites that check the engine
//! against them.
//!
//! The formulas here are proven facts about linear forms. A suite mismatch
//! therefore points at a bug in the engine (or in this module), never at the
//! mathematics, and reports say so.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{compute_mf, compute_nf, exact_nf2, NfConfig};
use crate::error::{Error, Result};
use crate::forms::{gcd, LinearForm};
use crate::sets::KSet;

/// Least `N_f(k)` over forms in `m` variables with distinct coefficients:
/// `((m² + m)/2) k - (m² + m - 2)/2`, attained by `x_1 + 2x_2 + ... + m x_m`
/// on `{0, ..., k-1}`.
pub fn nstar_formula(m: u64, k: u64) -> u64 {
    (m * m + m) / 2 * k - (m * m + m - 2) / 2
}

/// `N_f(k) = U k - U + 1` for forms with complete coefficient sequences.
pub fn complete_formula(u_total: u64, k: u64) -> u64 {
    u_total * k - u_total + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinaryCase {
    /// `x_1 + x_2`
    SumForm,
    /// `x_1 + 2 x_2`
    DoubleForm,
    General,
}

/// A binary form's case together with its known value or lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryClass {
    pub case: BinaryCase,
}

impl BinaryClass {
    /// True when [`bound`](Self::bound) is the exact value of `N_f(k)`.
    pub fn is_exact(&self) -> bool {
        self.case != BinaryCase::General
    }

    /// `2k - 1`, `3k - 2`, or for the general case the lower bound
    /// `(7k - 5)/2` for odd `k` and `(7k - 6)/2` for even `k`.
    pub fn bound(&self, k: u64) -> u64 {
        match self.case {
            BinaryCase::SumForm => 2 * k - 1,
            BinaryCase::DoubleForm => 3 * k - 2,
            BinaryCase::General if k % 2 == 1 => (7 * k - 5) / 2,
            BinaryCase::General => (7 * k - 6) / 2,
        }
    }
}

pub fn classify_binary(f: &LinearForm) -> Result<BinaryClass> {
    let case = match f.coeffs() {
        [1, 1] => BinaryCase::SumForm,
        [1, 2] => BinaryCase::DoubleForm,
        [_, _] => BinaryCase::General,
        c => return Err(Error::NotBinary { arity: c.len() }),
    };
    Ok(BinaryClass { case })
}

/// `N_f(2)` for a ternary form, read off from the coefficient pattern.
pub fn ternary_nf2_table(f: &LinearForm) -> Result<u64> {
    let &[u1, u2, u3] = f.coeffs() else {
        return Err(Error::NotTernary { arity: f.arity() });
    };
    Ok(if u1 == u3 {
        4
    } else if u1 == u2 {
        if u3 == 2 * u1 {
            5
        } else {
            6
        }
    } else if u2 == u3 {
        6
    } else if u1 + u2 == u3 {
        7
    } else {
        8
    })
}

/// Lower bound on `N_f(k)` for ternary forms with distinct coefficients:
/// `7k - 6` when `u1 + u2 != u3` (then `N_f(2) = 8`), else `6k - 5`.
pub fn ternary_lower(f: &LinearForm, k: u64) -> Result<u64> {
    let &[u1, u2, u3] = f.coeffs() else {
        return Err(Error::NotTernary { arity: f.arity() });
    };
    if !f.is_strictly_increasing() {
        return Err(Error::NotStrictlyIncreasing(f.coeffs().to_vec()));
    }
    Ok(if u1 + u2 != u3 { 7 * k - 6 } else { 6 * k - 5 })
}

/// All normalized forms in `m` variables with coefficients at most
/// `max_coeff`, in lexicographic order.
pub fn normalized_forms(m: usize, max_coeff: u64) -> Vec<LinearForm> {
    fn go(m: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<LinearForm>) {
        if cur.len() == m {
            if cur.iter().copied().fold(0, gcd) == 1 {
                out.push(LinearForm::from_coeffs(cur).expect("small positive coefficients"));
            }
            return;
        }
        for c in lo..=max {
            cur.push(c);
            go(m, c, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 {
        go(m, 1, max_coeff, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

pub(crate) fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `N_f(k) >= nstar_formula` for distinct coefficients, with equality
    /// at `(1, 2, ..., m)`.
    Thm23,
    /// Binary forms against [`classify_binary`].
    Thm31,
    /// Ternary `N_f(2)` table against the subset-sum count.
    Lem32,
    /// Complete forms: exact value `U k - U + 1`, progressions as the only
    /// minimizers.
    Thm41,
    /// `C(k, m) <= M_f(k) <= k^m` and its equality cases.
    MfBounds,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Thm23,
        Suite::Thm31,
        Suite::Lem32,
        Suite::Thm41,
        Suite::MfBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm23 => "thm23",
            Suite::Thm31 => "thm31",
            Suite::Lem32 => "lem32",
            Suite::Thm41 => "thm41",
            Suite::MfBounds => "mf_bounds",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse {
                what: "suite",
                input: s.to_string(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_m: usize,
    pub max_coeff: u64,
    pub max_k: usize,
    /// Search diameter; `U (k - 1)` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<i64>,
    /// Node budget per search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_nodes: Option<u64>,
}

impl Bounds {
    pub fn new(max_m: usize, max_coeff: u64, max_k: usize) -> Self {
        Bounds {
            max_m,
            max_coeff,
            max_k,
            diameter: None,
            budget_nodes: None,
        }
    }

    fn nf_config(&self, witness_cap: Option<usize>) -> NfConfig {
        NfConfig {
            diameter: self.diameter,
            witness_cap,
            budget_nodes: self.budget_nodes,
            ..NfConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub coeffs: Vec<u64>,
    pub k: usize,
    pub check: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub bounds: Bounds,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
    pub passed: bool,
}

impl VerificationReport {
    /// One-line summary; a failure is labelled as an implementation bug
    /// because the checked statements are theorems.
    pub fn summary(&self) -> String {
        if self.passed {
            format!(
                "{}: passed ({} instances checked)",
                self.suite, self.checked
            )
        } else {
            format!(
                "{}: FAILED with {} mismatches in {} instances; the checked statements are theorems, so this is an implementation bug",
                self.suite,
                self.mismatches.len(),
                self.checked
            )
        }
    }
}

struct Tally {
    checked: u64,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            mismatches: Vec::new(),
        }
    }

    fn check(
        &mut self,
        f: &LinearForm,
        k: usize,
        what: &str,
        ok: bool,
        expected: String,
        got: String,
    ) {
        if !ok {
            self.mismatches.push(Mismatch {
                coeffs: f.coeffs().to_vec(),
                k,
                check: what.to_string(),
                expected,
                got,
            });
        }
    }
}

/// Runs one verification suite over every normalized form within `bounds`.
///
/// Work fans out per form; results are merged in form order.
pub fn verify_suite(suite: Suite, bounds: &Bounds) -> Result<VerificationReport> {
    let forms: Vec<LinearForm> = match suite {
        Suite::Thm23 => (1..=bounds.max_m)
            .flat_map(|m| normalized_forms(m, bounds.max_coeff))
            .filter(|f| f.is_strictly_increasing())
            .collect(),
        Suite::Thm31 => normalized_forms(2, bounds.max_coeff),
        Suite::Lem32 => normalized_forms(3, bounds.max_coeff),
        Suite::Thm41 => (1..=bounds.max_m)
            .flat_map(|m| normalized_forms(m, bounds.max_coeff))
            .filter(|f| f.is_complete())
            .collect(),
        Suite::MfBounds => (1..=bounds.max_m)
            .flat_map(|m| normalized_forms(m, bounds.max_coeff))
            .collect(),
    };
    let tallies = forms
        .par_iter()
        .map(|f| check_form(suite, f, bounds))
        .collect::<Result<Vec<Tally>>>()?;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for t in tallies {
        checked += t.checked;
        mismatches.extend(t.mismatches);
    }
    Ok(VerificationReport {
        suite,
        bounds: bounds.clone(),
        checked,
        passed: mismatches.is_empty(),
        mismatches,
    })
}

fn check_form(suite: Suite, f: &LinearForm, bounds: &Bounds) -> Result<Tally> {
    let mut t = Tally::new();
    let m = f.arity() as u64;
    match suite {
        Suite::Lem32 => {
            t.checked += 1;
            let table = ternary_nf2_table(f)?;
            let exact = exact_nf2(f);
            t.check(
                f,
                2,
                "N_f(2) table",
                table == exact,
                table.to_string(),
                exact.to_string(),
            );
        }
        Suite::Thm23 => {
            let extremal = f.coeffs().iter().copied().eq(1..=m);
            for k in 1..=bounds.max_k {
                t.checked += 1;
                let r = compute_nf(f, k, &bounds.nf_config(Some(1)))?;
                let n = nstar_formula(m, k as u64);
                t.check(
                    f,
                    k,
                    "best >= N*",
                    r.best >= n,
                    format!(">= {n}"),
                    r.best.to_string(),
                );
                if extremal {
                    let ok = r.exact && r.best == n;
                    t.check(
                        f,
                        k,
                        "N* attained",
                        ok,
                        format!("{n} exact"),
                        bracket(r.lower, r.best),
                    );
                }
            }
        }
        Suite::Thm31 => {
            let class = classify_binary(f)?;
            for k in 1..=bounds.max_k {
                t.checked += 1;
                let r = compute_nf(f, k, &bounds.nf_config(Some(1)))?;
                let b = class.bound(k as u64);
                if class.is_exact() {
                    let ok = r.exact && r.best == b;
                    t.check(
                        f,
                        k,
                        "exact binary value",
                        ok,
                        format!("{b} exact"),
                        bracket(r.lower, r.best),
                    );
                } else {
                    t.check(
                        f,
                        k,
                        "binary lower bound",
                        r.best >= b,
                        format!(">= {b}"),
                        r.best.to_string(),
                    );
                }
            }
        }
        Suite::Thm41 => {
            for k in 1..=bounds.max_k {
                t.checked += 1;
                let r = compute_nf(f, k, &bounds.nf_config(None))?;
                let n = complete_formula(f.u_total(), k as u64);
                let ok = r.exact && r.best == n;
                t.check(
                    f,
                    k,
                    "complete-form value",
                    ok,
                    format!("{n} exact"),
                    bracket(r.lower, r.best),
                );
                let ap = vec![KSet::progression(k)];
                t.check(
                    f,
                    k,
                    "minimizers are the progression",
                    r.exact && r.witnesses == ap,
                    format!("{ap:?}"),
                    format!("{:?}", r.witnesses),
                );
            }
        }
        Suite::MfBounds => {
            let distinct = f.has_distinct_subset_sums();
            let injective_coeffs = f.is_strictly_increasing();
            for k in 1..=bounds.max_k {
                t.checked += 1;
                let value = compute_mf(f, k)?.value as u128;
                let lo = binomial(k as u64, m);
                let hi = (k as u128).pow(m as u32);
                t.check(
                    f,
                    k,
                    "C(k,m) <= M_f(k) <= k^m",
                    lo <= value && value <= hi,
                    format!("[{lo}, {hi}]"),
                    value.to_string(),
                );
                if k >= 2 {
                    t.check(
                        f,
                        k,
                        "M_f(k) = k^m iff distinct subset sums",
                        (value == hi) == distinct,
                        if distinct { "= k^m" } else { "< k^m" }.to_string(),
                        value.to_string(),
                    );
                }
                if injective_coeffs {
                    let falling =
                        (0..m).fold(1u128, |acc, i| acc * (k as u128).saturating_sub(i as u128));
                    t.check(
                        f,
                        k,
                        "M_f(k) >= k(k-1)...(k-m+1)",
                        value >= falling,
                        format!(">= {falling}"),
                        value.to_string(),
                    );
                }
            }
        }
    }
    Ok(t)
}

fn bracket(lower: u64, best: u64) -> String {
    if lower == best {
        format!("{best} exact")
    } else {
        format!("[{lower}, {best}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: &[u64]) -> LinearForm {
        LinearForm::from_coeffs(c).unwrap()
    }

    #[test]
    fn nstar_examples() {
        assert_eq!(nstar_formula(2, 3), 7);
        assert_eq!(nstar_formula(3, 2), 7);
        for k in 1..20 {
            assert_eq!(nstar_formula(1, k), k);
        }
    }

    #[test]
    fn nstar_is_complete_formula_at_triangular_u() {
        for m in 1..12 {
            for k in 1..30 {
                assert_eq!(nstar_formula(m, k), complete_formula(m * (m + 1) / 2, k));
            }
        }
    }

    #[test]
    fn complete_formula_examples() {
        assert_eq!(complete_formula(3, 4), 10);
        assert_eq!(complete_formula(6, 3), 13);
        for k in 1..20 {
            assert_eq!(complete_formula(2, k), 2 * k - 1);
        }
    }

    #[test]
    fn binary_classes() {
        let c = classify_binary(&form(&[1, 1])).unwrap();
        assert_eq!(c.case, BinaryCase::SumForm);
        assert!(c.is_exact());
        assert_eq!(c.bound(5), 9);

        let c = classify_binary(&form(&[1, 2])).unwrap();
        assert_eq!(c.case, BinaryCase::DoubleForm);
        assert_eq!(c.bound(5), 13);

        let c = classify_binary(&form(&[2, 5])).unwrap();
        assert_eq!(c.case, BinaryCase::General);
        assert!(!c.is_exact());
        let bounds: Vec<u64> = (1..=6).map(|k| c.bound(k)).collect();
        assert_eq!(bounds, [1, 4, 8, 11, 15, 18]);

        assert_eq!(
            classify_binary(&form(&[1, 2, 3])),
            Err(Error::NotBinary { arity: 3 })
        );
    }

    #[test]
    fn ternary_table_examples() {
        assert_eq!(ternary_nf2_table(&form(&[1, 1, 2])), Ok(5));
        assert_eq!(ternary_nf2_table(&form(&[1, 2, 3])), Ok(7));
        assert_eq!(ternary_nf2_table(&form(&[1, 2, 4])), Ok(8));
        assert_eq!(ternary_nf2_table(&form(&[1, 1, 1])), Ok(4));
        assert_eq!(ternary_nf2_table(&form(&[1, 1, 3])), Ok(6));
        assert_eq!(ternary_nf2_table(&form(&[1, 3, 3])), Ok(6));
        assert!(matches!(
            ternary_nf2_table(&form(&[1, 2])),
            Err(Error::NotTernary { arity: 2 })
        ));
    }

    #[test]
    fn ternary_table_agrees_with_subset_sums_up_to_16() {
        for f in normalized_forms(3, 16) {
            assert_eq!(ternary_nf2_table(&f).unwrap(), exact_nf2(&f), "{f}");
        }
    }

    #[test]
    fn ternary_lower_examples() {
        assert_eq!(ternary_lower(&form(&[1, 2, 3]), 5), Ok(25));
        assert_eq!(ternary_lower(&form(&[1, 2, 4]), 5), Ok(29));
        for f in [form(&[1, 2, 3]), form(&[2, 3, 7]), form(&[1, 4, 5])] {
            assert_eq!(ternary_lower(&f, 1), Ok(1));
        }
        assert!(matches!(
            ternary_lower(&form(&[1, 1, 2]), 3),
            Err(Error::NotStrictlyIncreasing(_))
        ));
    }

    #[test]
    fn normalized_form_enumeration() {
        let fs: Vec<String> = normalized_forms(2, 3)
            .iter()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(fs, ["1,1", "1,2", "1,3", "2,3"]);
        assert_eq!(normalized_forms(1, 9).len(), 1);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("thm99".parse::<Suite>().is_err());
    }

    #[test]
    fn suite_examples() {
        let r = verify_suite(Suite::Lem32, &Bounds::new(3, 8, 2)).unwrap();
        assert!(r.passed, "{:?}", r.mismatches);

        let r = verify_suite(Suite::Thm23, &Bounds::new(2, 6, 4)).unwrap();
        assert!(r.passed, "{:?}", r.mismatches);
        assert!(r.checked > 0);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let mut b = Bounds::new(2, 5, 5);
        b.budget_nodes = Some(10);
        assert!(verify_suite(Suite::Thm31, &b).unwrap_err().is_capacity());
    }
}
