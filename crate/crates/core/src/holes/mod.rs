//! Holes: detection, counting, and the hole-freeness oracle.
//!
//! An `l`-hole of `A` is an `l`-subset in convex position whose hull has
//! nonempty interior containing no point of `A`. Hole-freeness quantifies
//! over every `l`-subset, convex or not: `A` is `l`-hole-free when each
//! `l`-subset has some point of `A` strictly inside its hull.

mod dp2d;

pub use dp2d::largest_empty_polygon;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{GeneralPosition, PointSet};

/// Enumeration budgets. Exceeding one yields a `CapExceeded`-style answer,
/// never a sampled one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_subsets: u64,
    pub max_predicate_calls: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_subsets: 100_000_000,
            max_predicate_calls: 100_000_000,
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// True iff `s` (indices into `a`) is a hole of `a`.
pub fn is_hole(a: &PointSet, s: &[usize]) -> bool {
    if s.len() < a.dim() + 1 {
        return false;
    }
    let hull = a.hull(s);
    if !hull.is_full_dimensional() || !a.convex_position(s) {
        return false;
    }
    (0..a.len())
        .filter(|i| !s.contains(i))
        .all(|i| !hull.strictly_contains(a.point(i)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HoleFreeVerdict {
    Pass {
        subsets_checked: u64,
        predicate_calls: u64,
    },
    /// An `l`-subset with no point of the set inside its hull.
    Violation {
        subset: Vec<usize>,
        predicate_calls: u64,
    },
    CapExceeded {
        subsets_required: u128,
    },
}

impl HoleFreeVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, HoleFreeVerdict::Pass { .. })
    }

    pub fn predicate_calls(&self) -> u64 {
        match self {
            HoleFreeVerdict::Pass {
                predicate_calls, ..
            }
            | HoleFreeVerdict::Violation {
                predicate_calls, ..
            } => *predicate_calls,
            HoleFreeVerdict::CapExceeded { .. } => 0,
        }
    }
}

/// First subset (in lexicographic order within the partition led by `lead`)
/// whose hull interior misses every point.
fn scan_partition(a: &PointSet, ell: usize, lead: usize) -> (Option<Vec<usize>>, u64, u64) {
    let mut calls = 0u64;
    let mut subsets = 0u64;
    for rest in (lead + 1..a.len()).combinations(ell - 1) {
        let mut s = Vec::with_capacity(ell);
        s.push(lead);
        s.extend(rest);
        subsets += 1;
        calls += 1;
        let hull = a.hull(&s);
        let mut covered = false;
        if hull.is_full_dimensional() {
            for i in 0..a.len() {
                calls += 1;
                if hull.strictly_contains(a.point(i)) {
                    covered = true;
                    break;
                }
            }
        }
        if !covered {
            return (Some(s), calls, subsets);
        }
    }
    (None, calls, subsets)
}

/// Decides `l`-hole-freeness by checking every `l`-subset. Sets with fewer
/// than `l` points pass vacuously.
pub fn is_hole_free(a: &PointSet, ell: usize, caps: &Caps) -> HoleFreeVerdict {
    let n = a.len();
    if ell == 0 {
        return HoleFreeVerdict::Violation {
            subset: Vec::new(),
            predicate_calls: 0,
        };
    }
    let required = binomial(n as u64, ell as u64);
    let worst_calls = required * (n as u128 + 1);
    if required > caps.max_subsets as u128 || worst_calls > caps.max_predicate_calls as u128 {
        return HoleFreeVerdict::CapExceeded {
            subsets_required: required,
        };
    }
    if ell > n {
        return HoleFreeVerdict::Pass {
            subsets_checked: 0,
            predicate_calls: 0,
        };
    }
    let parts: Vec<_> = (0..=n - ell)
        .into_par_iter()
        .map(|lead| scan_partition(a, ell, lead))
        .collect();
    let calls = parts.iter().map(|p| p.1).sum();
    for (found, _, _) in &parts {
        if let Some(subset) = found {
            return HoleFreeVerdict::Violation {
                subset: subset.clone(),
                predicate_calls: calls,
            };
        }
    }
    HoleFreeVerdict::Pass {
        subsets_checked: parts.iter().map(|p| p.2).sum(),
        predicate_calls: calls,
    }
}

/// How [`decide_hole_free`] reached its verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoleFreeMethod {
    Exhaustive,
    /// Planar general position: `l`-hole-free iff the largest hole is
    /// smaller than `l`.
    LargestHole,
}

/// [`is_hole_free`] when the subset count fits the caps; otherwise, for
/// planar sets in general position, the largest-hole threshold.
pub fn decide_hole_free(
    a: &PointSet,
    ell: usize,
    caps: &Caps,
) -> (HoleFreeVerdict, HoleFreeMethod) {
    let verdict = is_hole_free(a, ell, caps);
    if !matches!(verdict, HoleFreeVerdict::CapExceeded { .. })
        || a.dim() != 2
        || a.general_position() != GeneralPosition::Pass
    {
        return (verdict, HoleFreeMethod::Exhaustive);
    }
    let (hole, calls) = largest_empty_polygon(a);
    let verdict = if hole.len() < ell {
        HoleFreeVerdict::Pass {
            subsets_checked: 0,
            predicate_calls: calls,
        }
    } else {
        HoleFreeVerdict::Violation {
            subset: hole[..ell].to_vec(),
            predicate_calls: calls,
        }
    };
    (verdict, HoleFreeMethod::LargestHole)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Brute,
    Dp2d,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleReport {
    pub hole_size: usize,
    pub witness_subset: Vec<usize>,
    pub verified_empty: bool,
    pub search_caps_hit: bool,
    pub predicate_calls: u64,
    pub algo: Algo,
}

/// Depth-first search over index-increasing subsets in convex position.
/// Full-dimensional subsets with a point inside are not extended: any
/// convex-position superset still has that point inside.
struct HoleSearch<'a> {
    a: &'a PointSet,
    max_size: usize,
    budget: u64,
    calls: u64,
    budget_hit: bool,
    size_hit: bool,
}

impl<'a> HoleSearch<'a> {
    fn new(a: &'a PointSet, max_size: usize, budget: u64) -> Self {
        HoleSearch {
            a,
            max_size,
            budget,
            calls: 0,
            budget_hit: false,
            size_hit: false,
        }
    }

    fn charge(&mut self, n: u64) -> bool {
        self.calls += n;
        if self.calls > self.budget {
            self.budget_hit = true;
        }
        !self.budget_hit
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[usize])) {
        let mut cur = Vec::with_capacity(self.max_size + 1);
        self.extend(&mut cur, 0, visit);
    }

    fn extend(&mut self, cur: &mut Vec<usize>, from: usize, visit: &mut dyn FnMut(&[usize])) {
        for j in from..self.a.len() {
            if self.budget_hit {
                return;
            }
            cur.push(j);
            if !self.charge(1) {
                cur.pop();
                return;
            }
            if self.a.convex_position(cur) {
                match self.empty_full_dimensional(cur) {
                    _ if self.budget_hit => {
                        cur.pop();
                        return;
                    }
                    Some(true) if cur.len() > self.max_size => {
                        // a hole beyond the cap exists; its size is not explored
                        self.size_hit = true;
                    }
                    Some(true) => {
                        visit(cur);
                        self.extend(cur, j + 1, visit);
                    }
                    Some(false) => {}
                    None if cur.len() <= self.max_size => self.extend(cur, j + 1, visit),
                    None => self.size_hit = true,
                }
            }
            cur.pop();
        }
    }

    /// `Some(empty)` for full-dimensional `cur`, `None` when flat or when
    /// the budget ran out.
    fn empty_full_dimensional(&mut self, cur: &[usize]) -> Option<bool> {
        if cur.len() <= self.a.dim() {
            return None;
        }
        let hull = self.a.hull(cur);
        if !hull.is_full_dimensional() {
            return None;
        }
        let others: Vec<usize> = (0..self.a.len()).filter(|i| !cur.contains(i)).collect();
        if !self.charge(others.len() as u64) {
            return None;
        }
        Some(
            others
                .iter()
                .all(|&i| !hull.strictly_contains(self.a.point(i))),
        )
    }

    fn caps_hit(&self) -> bool {
        self.budget_hit || self.size_hit
    }
}

fn brute_max_hole(a: &PointSet, cap_size: usize, caps: &Caps) -> HoleReport {
    let mut best: Vec<usize> = Vec::new();
    let mut search = HoleSearch::new(a, cap_size, caps.max_predicate_calls);
    search.run(&mut |s| {
        if s.len() > best.len() {
            best = s.to_vec();
        }
    });
    HoleReport {
        hole_size: best.len(),
        verified_empty: !best.is_empty() && is_hole(a, &best),
        witness_subset: best,
        search_caps_hit: search.caps_hit(),
        predicate_calls: search.calls,
        algo: Algo::Brute,
    }
}

/// Size of the largest hole (0 when there is none).
///
/// `cap_size` bounds the brute-force search; when a convex subset larger
/// than the cap exists the report carries `search_caps_hit` and the best
/// size found so far. `Dp2d` is exact for planar sets in general position.
pub fn max_hole(a: &PointSet, cap_size: usize, algo: Algo, caps: &Caps) -> Result<HoleReport> {
    let algo = match algo {
        Algo::Auto => {
            if a.dim() == 2 && a.general_position() == GeneralPosition::Pass {
                Algo::Dp2d
            } else {
                Algo::Brute
            }
        }
        other => other,
    };
    match algo {
        Algo::Dp2d => {
            if a.dim() != 2 {
                return Err(Error::DimensionMismatch(
                    "dp2d works on planar sets only".into(),
                ));
            }
            let (witness, calls) = largest_empty_polygon(a);
            Ok(HoleReport {
                hole_size: witness.len(),
                verified_empty: !witness.is_empty() && is_hole(a, &witness),
                witness_subset: witness,
                search_caps_hit: false,
                predicate_calls: calls,
                algo: Algo::Dp2d,
            })
        }
        _ => Ok(brute_max_hole(a, cap_size, caps)),
    }
}

/// Number of `l`-holes.
pub fn count_holes(a: &PointSet, ell: usize) -> u64 {
    let mut count = 0u64;
    let mut search = HoleSearch::new(a, ell, u64::MAX);
    search.run(&mut |s| {
        if s.len() == ell {
            count += 1;
        }
    });
    count
}

/// Every hole up to `max_size` points, in DFS order.
pub fn list_holes(a: &PointSet, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut search = HoleSearch::new(a, max_size, u64::MAX);
    search.run(&mut |s| out.push(s.to_vec()));
    out
}
