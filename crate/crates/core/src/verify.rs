//! Exhaustive verification over finite degree ranges: enumeration of
//! admissible pairs, a brute-force audit of the classification trichotomy,
//! a check of the vanishing criterion, and a scan for below-bound node
//! counts among pairs that violate condition three.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use rayon::prelude::*;

use crate::count::{bound_raw, is_exceptional_raw, s_value_raw, NodeCount};
use crate::error::{Error, Result};
use crate::seq::{
    is_subsequence, violation_three, violation_two, Condition, ConfigPair,
};

// ===========================================================================
// Search ranges
// ===========================================================================

/// A finite rectangle of configurations: codimensions `k_min..=k_max` and
/// degree entries `1..=deg_max` (threefold degrees starting at 2 when
/// `require_d1_ge_2` is set).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchRange {
    pub k_min: usize,
    pub k_max: usize,
    pub deg_max: u64,
    pub require_d1_ge_2: bool,
}

impl SearchRange {
    pub fn new(k_min: usize, k_max: usize, deg_max: u64, require_d1_ge_2: bool) -> Result<Self> {
        if k_min < 1 || k_min > k_max {
            return Err(Error::InvalidRange(format!(
                "need 1 <= k_min <= k_max, got k_min={k_min}, k_max={k_max}"
            )));
        }
        if deg_max < 1 {
            return Err(Error::InvalidRange("deg_max must be at least 1".into()));
        }
        Ok(SearchRange {
            k_min,
            k_max,
            deg_max,
            require_d1_ge_2,
        })
    }

    fn d_min(&self) -> u64 {
        if self.require_d1_ge_2 {
            2
        } else {
            1
        }
    }
}

// ===========================================================================
// Enumeration
// ===========================================================================

/// All non-decreasing sequences of length `len` with entries in
/// `[lo, hi]`, in lexicographic order.
fn nondecreasing_sequences(len: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(len);
    fn rec(len: usize, lo: u64, hi: u64, buf: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if buf.len() == len {
            out.push(buf.clone());
            return;
        }
        for v in lo..=hi {
            buf.push(v);
            rec(len, v, hi, buf, out);
            buf.pop();
        }
    }
    rec(len, lo, hi, &mut buf, &mut out);
    out
}

/// Visits, in lexicographic order, every non-decreasing surface sequence
/// `e` of length `k+1` that satisfies condition one against `d`
/// (`e_i <= d_i` for `i <= k`; the final entry is capped by `deg_max`).
fn for_each_surface_seq(d: &[u64], deg_max: u64, f: &mut impl FnMut(&[u64])) {
    let k = d.len();
    let mut buf: Vec<u64> = Vec::with_capacity(k + 1);
    fn rec(d: &[u64], deg_max: u64, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        let j = buf.len();
        let k = d.len();
        if j == k + 1 {
            f(buf);
            return;
        }
        let lo = buf.last().copied().unwrap_or(1);
        let hi = if j < k { d[j] } else { deg_max };
        for v in lo..=hi {
            buf.push(v);
            rec(d, deg_max, buf, f);
            buf.pop();
        }
    }
    rec(d, deg_max, &mut buf, f);
}

/// One unit of parallel work: a fixed codimension and threefold degrees.
fn d_tasks(range: &SearchRange) -> Vec<Vec<u64>> {
    let mut tasks = Vec::new();
    for k in range.k_min..=range.k_max {
        tasks.extend(nondecreasing_sequences(k, range.d_min(), range.deg_max));
    }
    tasks
}

/// Streams every admissible pair in the range exactly once, ordered
/// lexicographically by `(k, d, e)`.
pub fn enumerate_admissible(range: &SearchRange) -> impl Iterator<Item = ConfigPair> {
    let deg_max = range.deg_max;
    d_tasks(range).into_iter().flat_map(move |d| {
        let mut found = Vec::new();
        for_each_surface_seq(&d, deg_max, &mut |e| {
            if violation_two(&d, e).is_none() && violation_three(&d, e).is_none() {
                found.push(ConfigPair::from_entries(&d, e).expect("generated pairs are valid"));
            }
        });
        found
    })
}

// ===========================================================================
// Trichotomy audit
// ===========================================================================

/// Tallies from an exhaustive audit.  The four classes partition the
/// examined pairs, so
/// `pairs_examined = vanishing_count + at_least_bound_count +
/// exceptional_pairs.len() + violations.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub range: SearchRange,
    pub pairs_examined: u64,
    pub vanishing_count: u64,
    pub at_least_bound_count: u64,
    pub exceptional_pairs: Vec<ConfigPair>,
    /// Admissible pairs with `0 < S < bound` outside the exceptional
    /// catalogue.  Any entry here disproves the trichotomy.
    pub violations: Vec<ConfigPair>,
    pub elapsed_ms: u64,
}

#[derive(Default)]
struct Tally {
    examined: u64,
    vanishing: u64,
    at_least: u64,
    exceptional: Vec<ConfigPair>,
    violations: Vec<ConfigPair>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.examined += other.examined;
        self.vanishing += other.vanishing;
        self.at_least += other.at_least;
        self.exceptional.extend(other.exceptional);
        self.violations.extend(other.violations);
        self
    }
}

fn audit_one_d(d: &[u64], deg_max: u64) -> Tally {
    let mut tally = Tally::default();
    let bound = bound_raw(d);
    for_each_surface_seq(d, deg_max, &mut |e| {
        if violation_two(d, e).is_some() || violation_three(d, e).is_some() {
            return;
        }
        tally.examined += 1;
        let s = s_value_raw(d, e);
        if s.is_zero() {
            tally.vanishing += 1;
        } else if is_exceptional_raw(d, e) {
            tally
                .exceptional
                .push(ConfigPair::from_entries(d, e).expect("generated pairs are valid"));
        } else if s >= bound {
            tally.at_least += 1;
        } else {
            tally
                .violations
                .push(ConfigPair::from_entries(d, e).expect("generated pairs are valid"));
        }
    });
    tally
}

/// Classifies every admissible pair in the range by brute force and tallies
/// the outcome.  Counter-examples to the trichotomy are recorded in
/// [`AuditReport::violations`] rather than raised as errors.
///
/// The leading threefold degree is always required to be at least 2 here
/// (the classification is about pairs with `d_1 >= 2`), regardless of the
/// flag in the supplied range; the report carries the effective range.
///
/// Work is partitioned by threefold degree sequence and merged in a fixed
/// order, so the result is identical no matter how many threads the
/// surrounding thread pool provides.
pub fn audit_trichotomy(range: &SearchRange) -> AuditReport {
    let range = SearchRange {
        require_d1_ge_2: true,
        ..range.clone()
    };
    let start = Instant::now();
    let deg_max = range.deg_max;
    let tally = d_tasks(&range)
        .par_iter()
        .map(|d| audit_one_d(d, deg_max))
        .reduce(Tally::default, Tally::merge);
    let mut exceptional_pairs = tally.exceptional;
    let mut violations = tally.violations;
    exceptional_pairs.sort();
    violations.sort();
    AuditReport {
        range,
        pairs_examined: tally.examined,
        vanishing_count: tally.vanishing,
        at_least_bound_count: tally.at_least,
        exceptional_pairs,
        violations,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Checks, over the whole range, that an admissible pair has vanishing node
/// count exactly when `d` embeds into `e` as a subsequence.
pub fn verify_vanishing_equivalence(range: &SearchRange) -> bool {
    let deg_max = range.deg_max;
    d_tasks(range).par_iter().all(|d| {
        let mut ok = true;
        for_each_surface_seq(d, deg_max, &mut |e| {
            if violation_two(d, e).is_some() || violation_three(d, e).is_some() {
                return;
            }
            let vanishes = s_value_raw(d, e).is_zero();
            if vanishes != is_subsequence(d, e) {
                ok = false;
            }
        });
        ok
    })
}

// ===========================================================================
// Relaxed scan
// ===========================================================================

/// A pair that satisfies all admissibility conditions except the dropped
/// one and whose node count undercuts the factoriality bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxedFinding {
    pub pair: ConfigPair,
    pub s_value: NodeCount,
    pub bound_value: NodeCount,
    pub violated_condition: Condition,
}

fn scan_one_d(d: &[u64], deg_max: u64) -> Vec<RelaxedFinding> {
    let mut found = Vec::new();
    let bound = bound_raw(d);
    for_each_surface_seq(d, deg_max, &mut |e| {
        if violation_two(d, e).is_some() || violation_three(d, e).is_none() {
            return;
        }
        let s = s_value_raw(d, e);
        if s > BigInt::zero() && s < bound {
            found.push(RelaxedFinding {
                pair: ConfigPair::from_entries(d, e).expect("generated pairs are valid"),
                s_value: NodeCount::from(s),
                bound_value: NodeCount::from(bound.clone()),
                violated_condition: Condition::Three,
            });
        }
    });
    found
}

/// Scans pairs that satisfy conditions one and two but violate the dropped
/// condition, reporting those with `0 < S < bound` — configurations whose
/// special geometry defeats the generic node count.
///
/// Only condition three can be dropped: dropping condition one or two makes
/// the count formula itself meaningless, so those requests are rejected.
pub fn scan_relaxed(range: &SearchRange, drop: Condition) -> Result<Vec<RelaxedFinding>> {
    if drop != Condition::Three {
        return Err(Error::UnsupportedDrop {
            requested: drop,
            supported: Condition::Three,
        });
    }
    let deg_max = range.deg_max;
    let mut findings: Vec<RelaxedFinding> = d_tasks(range)
        .par_iter()
        .map(|d| scan_one_d(d, deg_max))
        .reduce(Vec::new, |mut a, b| {
            a.extend(b);
            a
        });
    findings.sort_by(|a, b| a.pair.cmp(&b.pair));
    Ok(findings)
}

// ===========================================================================
// Tests
// ===========================================================================
