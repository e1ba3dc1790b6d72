//! Finite integer sets up to affine equivalence, and the image `f(A)`.
//!
//! `|f(A)|` is unchanged by `A -> c*A + d` for `c != 0`, so every set is
//! represented by its canonical form: translated to minimum 0 and divided by
//! the gcd of its elements. Reflection (`c = -1`) is not folded into the
//! canonical form; search code deduplicates reflected witnesses separately.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{gcd, parse_int_list, LinearForm};

/// Default cap on the number of distinct composition vectors.
pub const DEFAULT_COMPOSITION_LIMIT: u64 = 10_000_000;

/// A finite set of integers in canonical form: strictly increasing, first
/// element 0, elements coprime as a whole.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct KSet {
    elems: Vec<i64>,
}

impl KSet {
    /// Wraps elements already known to be canonical.
    pub(crate) fn from_canonical_unchecked(elems: Vec<i64>) -> Self {
        debug_assert!(is_canonical(&elems), "{elems:?}");
        KSet { elems }
    }

    /// Validates that `elems` is already canonical without transforming it.
    pub fn from_canonical(elems: Vec<i64>) -> Result<Self> {
        if is_canonical(&elems) {
            Ok(KSet { elems })
        } else {
            Err(Error::NotCanonical(elems))
        }
    }

    /// The progression `{0, 1, ..., k-1}`.
    pub fn progression(k: usize) -> Self {
        assert!(k >= 1);
        KSet {
            elems: (0..k as i64).collect(),
        }
    }

    pub fn elems(&self) -> &[i64] {
        &self.elems
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    /// The largest element; the width of the set since the smallest is 0.
    pub fn diameter(&self) -> i64 {
        *self.elems.last().unwrap()
    }

    pub fn reflect(&self) -> KSet {
        reflect_canonical(self)
    }

    pub fn is_arithmetic_progression(&self) -> bool {
        is_arithmetic_progression(&self.elems)
    }
}

fn is_canonical(elems: &[i64]) -> bool {
    !elems.is_empty()
        && elems[0] == 0
        && elems.windows(2).all(|w| w[0] < w[1])
        && (elems.len() == 1 || elems.iter().fold(0, |g, &x| gcd(g, x as u64)) == 1)
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elems).finish()
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for KSet {
    type Err = Error;

    /// Parses a comma-separated list and canonicalizes it.
    fn from_str(s: &str) -> Result<Self> {
        canonicalize(&parse_int_list(s, "set")?)
    }
}

impl TryFrom<Vec<i64>> for KSet {
    type Error = Error;

    fn try_from(elems: Vec<i64>) -> Result<Self> {
        KSet::from_canonical(elems)
    }
}

impl From<KSet> for Vec<i64> {
    fn from(a: KSet) -> Self {
        a.elems
    }
}

/// Maps a set of distinct integers to its canonical representative.
pub fn canonicalize(raw: &[i64]) -> Result<KSet> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut elems = raw.to_vec();
    elems.sort_unstable();
    if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElements(w[0]));
    }
    let min = elems[0];
    let mut g = 0u64;
    for x in &mut elems {
        let d = x.checked_sub(min).ok_or(Error::Overflow)?;
        *x = d;
        g = gcd(g, d as u64);
    }
    if g > 1 {
        for x in &mut elems {
            *x /= g as i64;
        }
    }
    Ok(KSet { elems })
}

/// Canonical form of `{diameter - x : x ∈ A}`.
pub fn reflect_canonical(a: &KSet) -> KSet {
    let d = a.diameter();
    KSet {
        elems: a.elems.iter().rev().map(|&x| d - x).collect(),
    }
}

/// Constant consecutive differences; every set of size at most 2 qualifies.
pub fn is_arithmetic_progression(elems: &[i64]) -> bool {
    elems.len() <= 2 || elems.windows(3).all(|w| w[1] - w[0] == w[2] - w[1])
}

/// One way of distributing the coefficient mass over `k` labeled slots.
///
/// `bins[t]` is the sum of the coefficients whose variable takes the `t`-th
/// smallest element of the set, so every value of `f` on a `k`-set `A` is the
/// dot product of some composition vector with the sorted elements of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionVector {
    pub bins: Vec<u32>,
}

/// The distinct composition vectors of a form for a fixed `k`, stored flat
/// and in lexicographic order.
#[derive(Clone, PartialEq, Eq)]
pub struct CompositionSet {
    k: usize,
    data: Vec<u32>,
}

impl CompositionSet {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.k)
    }

    pub fn to_vectors(&self) -> Vec<CompositionVector> {
        self.iter()
            .map(|b| CompositionVector { bins: b.to_vec() })
            .collect()
    }

    /// Writes `{ s·A : s in self }` into `out` (unsorted, with repeats).
    /// Caller guarantees `U * max|a|` fits in an `i64`.
    pub(crate) fn dot_all(&self, elems: &[i64], out: &mut Vec<i64>) {
        debug_assert_eq!(elems.len(), self.k);
        out.clear();
        out.extend(self.iter().map(|bins| {
            bins.iter()
                .zip(elems)
                .map(|(&s, &a)| s as i64 * a)
                .sum::<i64>()
        }));
    }

    /// `|{ s·A }|` with a reusable scratch buffer.
    pub(crate) fn image_size(&self, elems: &[i64], scratch: &mut Vec<i64>) -> usize {
        self.dot_all(elems, scratch);
        scratch.sort_unstable();
        scratch.dedup();
        scratch.len()
    }
}

impl fmt::Debug for CompositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Distinct slot-sum vectors obtained by sending each coefficient to one of
/// `k` slots, under the default capacity limit.
pub fn composition_vectors(f: &LinearForm, k: usize) -> Result<CompositionSet> {
    composition_vectors_with_limit(f, k, DEFAULT_COMPOSITION_LIMIT)
}

/// Generates composition vectors run by run: a run of `c` equal coefficients
/// contributes one multiplicity split of `c` over the `k` slots, so equal
/// coefficients never cause factorial blowup.
pub fn composition_vectors_with_limit(
    f: &LinearForm,
    k: usize,
    limit: u64,
) -> Result<CompositionSet> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let mut rows: Vec<Vec<u32>> = vec![vec![0; k]];
    for (value, count) in f.runs() {
        let splits = multiplicity_splits(count, k);
        let mut next = Vec::with_capacity(rows.len().saturating_mul(splits.len()));
        for row in &rows {
            for split in &splits {
                let mut r = row.clone();
                for (bin, &n) in r.iter_mut().zip(split) {
                    *bin += value as u32 * n;
                }
                next.push(r);
            }
            if next.len() as u64 > limit.saturating_mul(4) {
                next.sort_unstable();
                next.dedup();
                if next.len() as u64 > limit {
                    return Err(Error::CapacityExceeded {
                        what: "composition vector count",
                        limit,
                    });
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.len() as u64 > limit {
            return Err(Error::CapacityExceeded {
                what: "composition vector count",
                limit,
            });
        }
        rows = next;
    }
    Ok(CompositionSet {
        k,
        data: rows.concat(),
    })
}

/// Every way of writing `count` as an ordered sum of `k` non-negative parts.
fn multiplicity_splits(count: usize, k: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, slot: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            out.push(cur.clone());
            return;
        }
        for n in 0..=left {
            cur[slot] = n;
            go(left - n, slot + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    go(count as u32, 0, &mut vec![0; k], &mut out);
    out
}

/// The image `f(A)` as a sorted set of values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueSet {
    values: Vec<i64>,
}

impl ValueSet {
    fn from_unsorted(mut values: Vec<i64>) -> Self {
        values.sort_unstable();
        values.dedup();
        ValueSet { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> i64 {
        self.values[0]
    }

    pub fn max(&self) -> i64 {
        *self.values.last().unwrap()
    }
}

fn sorted_distinct(raw: &[i64]) -> Result<Vec<i64>> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut elems = raw.to_vec();
    elems.sort_unstable();
    if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElements(w[0]));
    }
    Ok(elems)
}

/// `f(A)` for any finite set of distinct integers (canonical or not).
///
/// Goes through composition vectors, or enumerates argument tuples directly
/// when the form has a single variable. Both routes are public so they can
/// check each other.
pub fn image(f: &LinearForm, a: &[i64]) -> Result<ValueSet> {
    if f.arity() == 1 {
        image_by_tuples(f, a)
    } else {
        image_by_compositions(f, a)
    }
}

pub fn image_by_compositions(f: &LinearForm, a: &[i64]) -> Result<ValueSet> {
    let elems = sorted_distinct(a)?;
    let comps = composition_vectors(f, elems.len())?;
    let mut values = Vec::with_capacity(comps.len());
    for bins in comps.iter() {
        let v = bins.iter().zip(&elems).try_fold(0i64, |acc, (&s, &x)| {
            (s as i64)
                .checked_mul(x)
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow)
        })?;
        values.push(v);
    }
    Ok(ValueSet::from_unsorted(values))
}

/// Evaluates `f` at all `k^m` argument tuples.
pub fn image_by_tuples(f: &LinearForm, a: &[i64]) -> Result<ValueSet> {
    let elems = sorted_distinct(a)?;
    let m = f.arity();
    let k = elems.len();
    let total = (k as u64)
        .checked_pow(m as u32)
        .filter(|&t| t <= DEFAULT_COMPOSITION_LIMIT)
        .ok_or(Error::CapacityExceeded {
            what: "argument tuple count",
            limit: DEFAULT_COMPOSITION_LIMIT,
        })?;
    let mut values = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; m];
    let mut args = vec![elems[0]; m];
    loop {
        values.push(f.eval(&args)?);
        // odometer step
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(ValueSet::from_unsorted(values));
            }
            idx[pos] += 1;
            if idx[pos] < k {
                args[pos] = elems[idx[pos]];
                break;
            }
            idx[pos] = 0;
            args[pos] = elems[0];
            pos += 1;
        }
    }
}
