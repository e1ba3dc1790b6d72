//! Linear forms `u_1 x_1 + ... + u_m x_m` with positive integer coefficients,
//! and the subset sums of their coefficient sequences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the coefficient sum; bounds the subset-sum bit table.
pub const DEFAULT_U_CAP: u64 = 1_000_000;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A linear form in normalized position: coefficients sorted ascending with
/// their common divisor removed.
///
/// Permuting coefficients does not change `f(A)` as a set, and dividing by a
/// common factor rescales every value by the same amount, so `|f(A)|` is the
/// same for the raw and the normalized form. The divisor is kept in
/// [`raw_gcd`](Self::raw_gcd) for traceability.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u64>")]
pub struct LinearForm {
    coeffs: Vec<u64>,
    u_total: u64,
    raw_gcd: u64,
}

impl LinearForm {
    /// Normalizes a raw coefficient vector under the default size cap.
    pub fn new(raw: &[i64]) -> Result<Self> {
        Self::with_cap(raw, DEFAULT_U_CAP)
    }

    /// Normalizes a raw coefficient vector, rejecting forms whose normalized
    /// coefficient sum exceeds `cap`.
    pub fn with_cap(raw: &[i64], cap: u64) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let mut coeffs = Vec::with_capacity(raw.len());
        for (index, &value) in raw.iter().enumerate() {
            if value <= 0 {
                return Err(Error::NonPositiveCoefficient { index, value });
            }
            coeffs.push(value as u64);
        }
        let raw_gcd = coeffs.iter().copied().fold(0, gcd);
        for c in &mut coeffs {
            *c /= raw_gcd;
        }
        coeffs.sort_unstable();
        let u_total = coeffs
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow)?;
        if u_total > cap {
            return Err(Error::CoefficientsTooLarge { u_total, cap });
        }
        Ok(LinearForm {
            coeffs,
            u_total,
            raw_gcd,
        })
    }

    /// Shorthand for forms built from literals in tests and docs.
    pub fn from_coeffs(coeffs: &[u64]) -> Result<Self> {
        let raw: Vec<i64> = coeffs
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| Error::Overflow))
            .collect::<Result<_>>()?;
        Self::new(&raw)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum of the coefficients, written `U` throughout the docs.
    pub fn u_total(&self) -> u64 {
        self.u_total
    }

    pub fn raw_gcd(&self) -> u64 {
        self.raw_gcd
    }

    /// Largest coefficient.
    pub fn u_max(&self) -> u64 {
        *self.coeffs.last().expect("forms are never empty")
    }

    /// True when the coefficients are pairwise distinct.
    pub fn is_strictly_increasing(&self) -> bool {
        self.coeffs.windows(2).all(|w| w[0] < w[1])
    }

    /// Runs of equal coefficients as `(value, multiplicity)`, ascending.
    pub fn runs(&self) -> Vec<(u64, usize)> {
        let mut runs: Vec<(u64, usize)> = Vec::new();
        for &c in &self.coeffs {
            match runs.last_mut() {
                Some((v, n)) if *v == c => *n += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }

    /// Evaluates the form at one argument tuple with checked arithmetic.
    pub fn eval(&self, args: &[i64]) -> Result<i64> {
        assert_eq!(args.len(), self.arity(), "argument count must equal arity");
        self.coeffs
            .iter()
            .zip(args)
            .try_fold(0i64, |acc, (&u, &x)| {
                (u as i64)
                    .checked_mul(x)
                    .and_then(|t| acc.checked_add(t))
                    .ok_or(Error::Overflow)
            })
    }

    pub fn subset_sums(&self) -> SubsetSumSet {
        subset_sums(self)
    }

    pub fn is_complete(&self) -> bool {
        is_complete(self)
    }

    pub fn has_distinct_subset_sums(&self) -> bool {
        has_distinct_subset_sums(self)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm({})", self)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    /// Parses a comma-separated decimal list such as `"1,2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let raw = parse_int_list(s, "coefficients")?;
        LinearForm::new(&raw)
    }
}

impl TryFrom<Vec<i64>> for LinearForm {
    type Error = Error;

    fn try_from(raw: Vec<i64>) -> Result<Self> {
        LinearForm::new(&raw)
    }
}

impl From<LinearForm> for Vec<u64> {
    fn from(f: LinearForm) -> Self {
        f.coeffs
    }
}

pub(crate) fn parse_int_list(s: &str, what: &'static str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            part.trim().parse::<i64>().map_err(|_| Error::Parse {
                what,
                input: s.to_string(),
            })
        })
        .collect()
}

/// The set of subset sums of a coefficient sequence, stored as a dense bit
/// table over `[0, U]`.
#[derive(Clone, PartialEq, Eq)]
pub struct SubsetSumSet {
    words: Vec<u64>,
    u_total: u64,
}

impl SubsetSumSet {
    fn empty(u_total: u64) -> Self {
        let bits = u_total as usize + 1;
        SubsetSumSet {
            words: vec![0; bits.div_ceil(64)],
            u_total,
        }
    }

    fn set(&mut self, n: usize) {
        self.words[n / 64] |= 1 << (n % 64);
    }

    /// `self |= self << shift`, truncated to `[0, U]`.
    fn or_shifted(&mut self, shift: usize) {
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        for i in (word_shift..self.words.len()).rev() {
            let src = i - word_shift;
            let mut w = self.words[src] << bit_shift;
            if bit_shift != 0 && src > 0 {
                w |= self.words[src - 1] >> (64 - bit_shift);
            }
            self.words[i] |= w;
        }
        let tail = (self.u_total as usize + 1) % 64;
        if tail != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
    }

    pub fn u_total(&self) -> u64 {
        self.u_total
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.u_total && self.words[n as usize / 64] >> (n % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Never true: 0 is always a subset sum.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=self.u_total).filter(|&n| self.contains(n))
    }
}

impl fmt::Debug for SubsetSumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// All sums `Σ_{j∈J} u_j` over subsets `J` of the coefficient indices,
/// by shift-or over the bit table.
pub fn subset_sums(f: &LinearForm) -> SubsetSumSet {
    let mut table = SubsetSumSet::empty(f.u_total);
    table.set(0);
    for &u in &f.coeffs {
        table.or_shifted(u as usize);
    }
    table
}

/// Complete means the subset sums fill all of `[0, U]`.
pub fn is_complete(f: &LinearForm) -> bool {
    subset_sums(f).len() as u64 == f.u_total + 1
}

/// Distinct subset sums means all `2^m` subsets give different sums.
pub fn has_distinct_subset_sums(f: &LinearForm) -> bool {
    let m = f.arity();
    // 2^m subsets cannot fit into U + 1 slots once m is large enough.
    m < 64 && subset_sums(f).len() as u64 == 1u64 << m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(c: &[u64]) -> LinearForm {
        LinearForm::from_coeffs(c).unwrap()
    }

    #[test]
    fn normalization() {
        let f = LinearForm::new(&[2, 4]).unwrap();
        assert_eq!(f.coeffs(), &[1, 2]);
        assert_eq!(f.raw_gcd(), 2);

        let f = LinearForm::new(&[3, 1]).unwrap();
        assert_eq!(f.coeffs(), &[1, 3]);
        assert_eq!(f.raw_gcd(), 1);

        let f = LinearForm::new(&[1, 2, 3]).unwrap();
        assert_eq!(f.coeffs(), &[1, 2, 3]);
        assert_eq!(f.u_total(), 6);
    }

    #[test]
    fn rejects_bad_coefficients() {
        assert_eq!(LinearForm::new(&[]), Err(Error::EmptyCoefficients));
        assert_eq!(
            LinearForm::new(&[1, 0]),
            Err(Error::NonPositiveCoefficient { index: 1, value: 0 })
        );
        assert!(matches!(
            LinearForm::new(&[-3]),
            Err(Error::NonPositiveCoefficient { .. })
        ));
        assert!(matches!(
            LinearForm::new(&[700_000, 300_001]),
            Err(Error::CoefficientsTooLarge { .. })
        ));
        assert!("1,x".parse::<LinearForm>().is_err());
    }

    #[test]
    fn parses_comma_lists() {
        let f: LinearForm = " 4, 2 ,6".parse().unwrap();
        assert_eq!(f.coeffs(), &[1, 2, 3]);
        assert_eq!(f.raw_gcd(), 2);
        assert_eq!(f.to_string(), "1,2,3");
    }

    #[test]
    fn subset_sum_examples() {
        assert_eq!(
            form(&[1, 3]).subset_sums().iter().collect::<Vec<_>>(),
            [0, 1, 3, 4]
        );
        assert_eq!(
            form(&[1, 1, 3]).subset_sums().iter().collect::<Vec<_>>(),
            [0, 1, 2, 3, 4, 5]
        );
        assert_eq!(
            form(&[1, 2, 4]).subset_sums().iter().collect::<Vec<_>>(),
            (0..8).collect::<Vec<_>>()
        );
    }

    #[test]
    fn subset_sums_cross_word_boundaries() {
        let f = form(&[1, 50, 70]);
        let sums: Vec<u64> = f.subset_sums().iter().collect();
        assert_eq!(sums, [0, 1, 50, 51, 70, 71, 120, 121]);
    }

    #[test]
    fn completeness() {
        assert!(form(&[1, 2, 3]).is_complete());
        assert!(!form(&[1, 3]).is_complete());
        assert!(form(&[1]).is_complete());
        assert!(form(&[1, 1, 3]).is_complete());
    }

    #[test]
    fn distinct_subset_sums() {
        assert!(form(&[1, 2, 4]).has_distinct_subset_sums());
        assert!(!form(&[1, 2, 3]).has_distinct_subset_sums());
        assert!(form(&[1, 3, 9, 27]).has_distinct_subset_sums());
    }

    #[test]
    fn ternary_distinct_sums_characterization() {
        for a in 1..=8u64 {
            for b in a..=8 {
                for c in b..=8 {
                    if gcd(gcd(a, b), c) != 1 {
                        continue;
                    }
                    let f = form(&[a, b, c]);
                    let expected = a < b && b < c && a + b != c;
                    assert_eq!(f.has_distinct_subset_sums(), expected, "{f}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn subset_sums_are_symmetric(raw in prop::collection::vec(1i64..40, 1..7)) {
            let f = LinearForm::new(&raw).unwrap();
            let s = f.subset_sums();
            prop_assert!(s.contains(0) && s.contains(f.u_total()));
            for n in 0..=f.u_total() {
                prop_assert_eq!(s.contains(n), s.contains(f.u_total() - n));
            }
            let bound = (1u64 << f.arity()).min(f.u_total() + 1);
            prop_assert!(s.len() as u64 <= bound);
        }

        #[test]
        fn normalization_is_idempotent(raw in prop::collection::vec(1i64..60, 1..6)) {
            let f = LinearForm::new(&raw).unwrap();
            let again = LinearForm::from_coeffs(f.coeffs()).unwrap();
            prop_assert_eq!(again.coeffs(), f.coeffs());
            prop_assert_eq!(again.raw_gcd(), 1);
        }
    }
}
