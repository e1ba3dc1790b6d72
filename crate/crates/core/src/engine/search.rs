//! Depth-first enumeration of canonical k-sets `{0 = a_0 < a_1 < ... <
//! a_{k-1} <= D}` with branch-and-bound pruning on the image size.
//!
//! Appending a new maximum `x` to a partial set adds at least the value
//! `f(x, ..., x)`, which exceeds every earlier value, so a partial set of
//! size `j` with image size `s` can only complete to sets of image size at
//! least `s + (k - j)`. Branches are cut when that exceeds the incumbent.
//! The cut is strict so that every set tying the incumbent is still seen.
//!
//! Work is split on the value of `a_1`. The search runs twice: a probe pass
//! whose workers share an atomic incumbent that only tightens, then a
//! collection pass at the final minimum. The second pass has a fixed
//! threshold, so witnesses and node counts do not depend on thread count or
//! on when the incumbent propagated.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{gcd, LinearForm};
use crate::sets::{composition_vectors, CompositionSet, KSet};

/// Default cap on reported witnesses.
pub const DEFAULT_WITNESS_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest element allowed in a canonical set.
    pub diameter: i64,
    /// Only sets with image size at most this are of interest.
    pub prune_at: Option<u64>,
    /// `None` keeps every witness.
    pub witness_cap: Option<usize>,
    /// Aborts with [`Error::CapacityExceeded`] past this many visited nodes.
    pub budget_nodes: Option<u64>,
}

impl SearchConfig {
    pub fn new(diameter: i64) -> Self {
        SearchConfig {
            diameter,
            prune_at: None,
            witness_cap: Some(DEFAULT_WITNESS_CAP),
            budget_nodes: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Least image size found; `None` only when `prune_at` excluded every set.
    pub best: Option<u64>,
    /// Canonical minimizers in lexicographic order, one per reflection pair.
    pub witnesses: Vec<KSet>,
    /// Number of witnesses before capping.
    pub witness_count: u64,
    pub witness_overflow: bool,
    /// Nodes visited by the collection pass.
    pub nodes: u64,
}

/// What a walk does at each complete canonical set.
pub(crate) trait Visitor {
    /// Branches whose completions cannot reach at most this are cut.
    fn threshold(&self) -> u64;
    fn leaf(&mut self, elems: &[i64], size: u64);
}

/// Shared read-only state of one walk over `(f, k, D)`.
pub(crate) struct Walker {
    k: usize,
    diameter: i64,
    /// `comps[j - 1]` holds the composition vectors for `j` slots.
    comps: Vec<CompositionSet>,
    nodes: AtomicU64,
    budget: Option<u64>,
    aborted: AtomicBool,
}

impl Walker {
    pub(crate) fn new(
        f: &LinearForm,
        k: usize,
        diameter: i64,
        budget: Option<u64>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroK);
        }
        let needed = k as i64 - 1;
        if diameter < needed {
            return Err(Error::DiameterTooSmall { diameter, needed });
        }
        // every value is at most U * D
        (f.u_total() as i64)
            .checked_mul(diameter)
            .ok_or(Error::Overflow)?;
        let comps = (1..=k)
            .map(|j| composition_vectors(f, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Walker {
            k,
            diameter,
            comps,
            nodes: AtomicU64::new(0),
            budget,
            aborted: AtomicBool::new(false),
        })
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub(crate) fn reset_nodes(&self) {
        self.nodes.store(0, Ordering::Relaxed);
    }

    /// Values of `a_1` that partition the walk.
    pub(crate) fn branches(&self) -> Vec<i64> {
        if self.k == 1 {
            Vec::new()
        } else {
            (1..=self.diameter - (self.k as i64 - 2)).collect()
        }
    }

    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(limit) = self.budget {
            if n > limit {
                self.aborted.store(true, Ordering::Relaxed);
                return Err(Error::CapacityExceeded {
                    what: "search node budget",
                    limit,
                });
            }
        }
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Error::CapacityExceeded {
                what: "search node budget",
                limit: self.budget.unwrap_or(u64::MAX),
            });
        }
        Ok(())
    }

    /// Visits the root `{0}`; for `k = 1` that is the only set.
    pub(crate) fn walk_root<V: Visitor>(&self, visitor: &mut V) -> Result<()> {
        self.tick()?;
        if self.k == 1 {
            visitor.leaf(&[0], 1);
        }
        Ok(())
    }

    /// Walks every canonical set whose second element is `a1`.
    pub(crate) fn walk_branch<V: Visitor>(&self, a1: i64, visitor: &mut V) -> Result<()> {
        let mut elems = Vec::with_capacity(self.k);
        elems.push(0);
        elems.push(a1);
        let mut scratch = Vec::new();
        self.descend(&mut elems, a1 as u64, &mut scratch, visitor)
    }

    fn descend<V: Visitor>(
        &self,
        elems: &mut Vec<i64>,
        g: u64,
        scratch: &mut Vec<i64>,
        visitor: &mut V,
    ) -> Result<()> {
        self.tick()?;
        let j = elems.len();
        if j == self.k {
            if g == 1 {
                let size = self.comps[j - 1].image_size(elems, scratch) as u64;
                visitor.leaf(elems, size);
            }
            return Ok(());
        }
        let size = self.comps[j - 1].image_size(elems, scratch) as u64;
        if size + (self.k - j) as u64 > visitor.threshold() {
            return Ok(());
        }
        let last = *elems.last().unwrap();
        let room = (self.k - j - 1) as i64;
        for x in last + 1..=self.diameter - room {
            elems.push(x);
            let r = self.descend(elems, gcd(g, x as u64), scratch, visitor);
            elems.pop();
            r?;
        }
        Ok(())
    }
}

/// True when `elems` is the lexicographically smaller of itself and its
/// reflection.
pub(crate) fn is_reflection_representative(elems: &[i64]) -> bool {
    let d = *elems.last().unwrap();
    let reflected = elems.iter().rev().map(|&x| d - x);
    elems.iter().copied().cmp(reflected).is_le()
}

struct Probe<'a> {
    incumbent: &'a AtomicU64,
    found: bool,
}

impl Visitor for Probe<'_> {
    fn threshold(&self) -> u64 {
        self.incumbent.load(Ordering::Relaxed)
    }

    fn leaf(&mut self, _elems: &[i64], size: u64) {
        if size <= self.incumbent.load(Ordering::Relaxed) {
            self.found = true;
            self.incumbent.fetch_min(size, Ordering::Relaxed);
        }
    }
}

struct Collect {
    best: u64,
    cap: usize,
    witnesses: Vec<KSet>,
    count: u64,
}

impl Visitor for Collect {
    fn threshold(&self) -> u64 {
        self.best
    }

    fn leaf(&mut self, elems: &[i64], size: u64) {
        if size == self.best && is_reflection_representative(elems) {
            self.count += 1;
            if self.witnesses.len() < self.cap {
                self.witnesses
                    .push(KSet::from_canonical_unchecked(elems.to_vec()));
            }
        }
    }
}

/// Least `|f(A)|` over canonical `k`-sets with diameter at most
/// `config.diameter`, with all minimizers up to reflection.
pub fn search_min(f: &LinearForm, k: usize, config: &SearchConfig) -> Result<SearchOutcome> {
    let walker = Walker::new(f, k, config.diameter, config.budget_nodes)?;
    let cap = config.witness_cap.unwrap_or(usize::MAX);

    // The progression {0..k-1} is always in range; start from its value.
    let ap = walker.comps[k - 1].image_size(KSet::progression(k).elems(), &mut Vec::new()) as u64;
    let seed = config.prune_at.map_or(ap, |p| p.min(ap));

    let incumbent = AtomicU64::new(seed);
    let mut found = {
        let mut root = Probe {
            incumbent: &incumbent,
            found: false,
        };
        walker.walk_root(&mut root)?;
        root.found
    };
    let branches = walker.branches();
    let probes = branches
        .par_iter()
        .map(|&a1| {
            let mut p = Probe {
                incumbent: &incumbent,
                found: false,
            };
            walker.walk_branch(a1, &mut p).map(|()| p.found)
        })
        .collect::<Result<Vec<bool>>>()?;
    found |= probes.into_iter().any(|b| b);
    if !found {
        return Ok(SearchOutcome {
            best: None,
            witnesses: Vec::new(),
            witness_count: 0,
            witness_overflow: false,
            nodes: walker.nodes(),
        });
    }
    let best = incumbent.load(Ordering::Relaxed);

    walker.reset_nodes();
    let fresh = || Collect {
        best,
        cap,
        witnesses: Vec::new(),
        count: 0,
    };
    let mut root = fresh();
    walker.walk_root(&mut root)?;
    let parts = branches
        .par_iter()
        .map(|&a1| {
            let mut c = fresh();
            walker.walk_branch(a1, &mut c).map(|()| c)
        })
        .collect::<Result<Vec<Collect>>>()?;

    let mut witnesses = root.witnesses;
    let mut count = root.count;
    for part in parts {
        count += part.count;
        let room = cap.saturating_sub(witnesses.len());
        witnesses.extend(part.witnesses.into_iter().take(room));
    }
    Ok(SearchOutcome {
        best: Some(best),
        witnesses,
        witness_count: count,
        witness_overflow: count > cap as u64,
        nodes: walker.nodes(),
    })
}
