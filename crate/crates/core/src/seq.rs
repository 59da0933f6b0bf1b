//! Degree sequences, degree-pair configurations, and the admissibility
//! conditions under which the node-count formula is geometrically meaningful.
//!
//! A configuration consists of a non-decreasing sequence `d = (d_1,...,d_k)`
//! of threefold degrees together with a non-decreasing sequence
//! `e = (e_1,...,e_{k+1})` of surface degrees, one entry longer.  Three
//! combinatorial conditions relate the two sequences; a pair satisfying all
//! of them is called *admissible*:
//!
//! * condition one: `d_i >= e_i` for every `i <= k`;
//! * condition two: whenever `d_i < e_{i+1}` (for `i <= k`), the prefixes
//!   `(d_1,...,d_i)` and `(e_1,...,e_i)` coincide;
//! * condition three: whenever `d_i < e_{i+2}` (for `i <= k-1`), the prefix
//!   `(d_1,...,d_i)` embeds into `(e_1,...,e_{i+1})` as a subsequence.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

// ===========================================================================
// Degree sequences
// ===========================================================================

/// A non-empty, non-decreasing sequence of positive integer degrees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSeq(Vec<u64>);

impl DegreeSeq {
    /// Validates and wraps a list of degrees.
    ///
    /// Fails if the list is empty, contains a zero, or is not sorted in
    /// non-decreasing order.
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(z) = entries.iter().position(|&v| v == 0) {
            let _ = z;
            return Err(Error::NonPositiveEntry("0".into()));
        }
        if let Some(pos) = entries.windows(2).position(|w| w[0] > w[1]) {
            // Report the 1-based position of the entry that breaks the order.
            return Err(Error::OutOfOrder { position: pos + 2 });
        }
        Ok(DegreeSeq(entries))
    }

    /// Sorts the entries first, then validates as in [`DegreeSeq::new`].
    pub fn from_unsorted(mut entries: Vec<u64>) -> Result<Self> {
        entries.sort_unstable();
        DegreeSeq::new(entries)
    }

    /// Parses a comma-separated list such as `"1,1,5"`.
    ///
    /// With `sort = true` the entries are sorted before validation, so
    /// out-of-order input is accepted; otherwise it is rejected.
    pub fn parse(text: &str, sort: bool) -> Result<Self> {
        let mut entries = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            match token.parse::<u64>() {
                Ok(0) => return Err(Error::NonPositiveEntry(token.into())),
                Ok(v) => entries.push(v),
                Err(_) => return Err(Error::ParseSequence(token.into())),
            }
        }
        if sort {
            DegreeSeq::from_unsorted(entries)
        } else {
            DegreeSeq::new(entries)
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty sequences
    }

    pub fn first(&self) -> u64 {
        self.0[0]
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("sequence is non-empty")
    }

    /// The all-ones sequence of the given length, e.g. the surface degrees
    /// of a complete flag of hyperplanes.
    pub fn ones(len: usize) -> Self {
        DegreeSeq(vec![1; len.max(1)])
    }
}

impl fmt::Display for DegreeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sep = "";
        for v in &self.0 {
            write!(f, "{sep}{v}")?;
            sep = ",";
        }
        Ok(())
    }
}

impl FromStr for DegreeSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DegreeSeq::parse(s, false)
    }
}

// ===========================================================================
// Configurations
// ===========================================================================

/// A pair of degree sequences `(d; e)` with `len(e) = len(d) + 1`.
///
/// `d` lists the degrees of the equations cutting out a threefold, `e` the
/// degrees of the equations cutting out a surface inside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConfigPair {
    d: DegreeSeq,
    e: DegreeSeq,
}

impl ConfigPair {
    pub fn new(d: DegreeSeq, e: DegreeSeq) -> Result<Self> {
        if e.len() != d.len() + 1 {
            return Err(Error::LengthMismatch {
                d_len: d.len(),
                e_len: e.len(),
            });
        }
        Ok(ConfigPair { d, e })
    }

    /// Convenience constructor from raw entry lists.
    pub fn from_entries(d: &[u64], e: &[u64]) -> Result<Self> {
        ConfigPair::new(DegreeSeq::new(d.to_vec())?, DegreeSeq::new(e.to_vec())?)
    }

    pub fn d(&self) -> &DegreeSeq {
        &self.d
    }

    pub fn e(&self) -> &DegreeSeq {
        &self.e
    }

    /// The codimension `k = len(d)` of the threefold.
    pub fn k(&self) -> usize {
        self.d.len()
    }
}

impl fmt::Display for ConfigPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}; e={})", self.d, self.e)
    }
}

impl PartialOrd for ConfigPair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConfigPair {
    /// Orders configurations by `(k, d, e)`, the order in which the
    /// enumeration engine produces them.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.k(), &self.d, &self.e).cmp(&(other.k(), &other.d, &other.e))
    }
}

// ===========================================================================
// Admissibility conditions
// ===========================================================================

/// Identifies one of the three admissibility conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `d_i >= e_i` for all `i <= k`.
    One,
    /// `d_i < e_{i+1}` forces the length-`i` prefixes of `d` and `e` to agree.
    Two,
    /// `d_i < e_{i+2}` forces `(d_1..d_i)` to embed into `(e_1..e_{i+1})`.
    Three,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::One => "cond-one",
            Condition::Two => "cond-two",
            Condition::Three => "cond-three",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cond-one" | "condition-one" => Ok(Condition::One),
            "cond-two" | "condition-two" => Ok(Condition::Two),
            "cond-three" | "condition-three" => Ok(Condition::Three),
            other => Err(Error::ParseSequence(other.into())),
        }
    }
}

/// Outcome of checking the three admissibility conditions on a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub cond_one_holds: bool,
    pub cond_two_holds: bool,
    pub cond_three_holds: bool,
    /// The smallest failing `(condition, index)` in condition-then-index
    /// order, or `None` when the pair is admissible.  Indices are 1-based
    /// and range over the quantifier of the respective condition.
    pub first_violation: Option<(Condition, usize)>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.cond_one_holds && self.cond_two_holds && self.cond_three_holds
    }
}

/// Greedy left-to-right subsequence test: does `needle` embed into `hay`
/// keeping the relative order of entries?
///
/// For the non-decreasing sequences used throughout this crate the greedy
/// scan is equivalent to multiset containment, but the scan also works for
/// arbitrary slices.
pub fn is_subsequence(needle: &[u64], hay: &[u64]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

/// Smallest `i` (1-based) at which condition one fails, if any.
pub(crate) fn violation_one(d: &[u64], e: &[u64]) -> Option<usize> {
    (0..d.len()).find(|&i| d[i] < e[i]).map(|i| i + 1)
}

/// Smallest `i` (1-based) at which condition two fails, if any.
pub(crate) fn violation_two(d: &[u64], e: &[u64]) -> Option<usize> {
    (0..d.len())
        .find(|&i| d[i] < e[i + 1] && d[..=i] != e[..=i])
        .map(|i| i + 1)
}

/// Smallest `i` (1-based) at which condition three fails, if any.
pub(crate) fn violation_three(d: &[u64], e: &[u64]) -> Option<usize> {
    let k = d.len();
    (0..k.saturating_sub(1))
        .find(|&i| d[i] < e[i + 2] && !is_subsequence(&d[..=i], &e[..=i + 1]))
        .map(|i| i + 1)
}

pub(crate) fn report_on(d: &[u64], e: &[u64]) -> AdmissibilityReport {
    let one = violation_one(d, e);
    let two = violation_two(d, e);
    let three = violation_three(d, e);
    let first_violation = one
        .map(|i| (Condition::One, i))
        .or_else(|| two.map(|i| (Condition::Two, i)))
        .or_else(|| three.map(|i| (Condition::Three, i)));
    AdmissibilityReport {
        cond_one_holds: one.is_none(),
        cond_two_holds: two.is_none(),
        cond_three_holds: three.is_none(),
        first_violation,
    }
}

/// Evaluates all three admissibility conditions on a pair.
pub fn check_conditions(pair: &ConfigPair) -> AdmissibilityReport {
    report_on(pair.d().values(), pair.e().values())
}

/// Returns the admissibility error for `pair`, if it is inadmissible.
pub(crate) fn require_admissible(pair: &ConfigPair) -> Result<()> {
    match check_conditions(pair).first_violation {
        None => Ok(()),
        Some((condition, index)) => Err(Error::Inadmissible { condition, index }),
    }
}

// ===========================================================================
// Index function
// ===========================================================================

/// How many of the surface equations the `i`-th threefold equation needs as
/// generators when the threefold is written over the surface.
///
/// Defined only on admissible pairs.  For `i <= k-1` the value is
///
/// * `i`   if `d_i < e_{i+1}`,
/// * `i+1` if `e_{i+1} <= d_i < e_{i+2}`,
/// * `i+2` otherwise,
///
/// and for `i = k` it is `k+1`.  Both `i` and the result are 1-based.
pub fn index_function(pair: &ConfigPair, i: usize) -> Result<usize> {
    require_admissible(pair)?;
    let k = pair.k();
    if i == 0 || i > k {
        return Err(Error::IndexOutOfRange { i, k });
    }
    Ok(iota_unchecked(pair.d().values(), pair.e().values(), i))
}

/// `index_function` without the admissibility and range checks; callers
/// guarantee `1 <= i <= k` on an admissible pair.
pub(crate) fn iota_unchecked(d: &[u64], e: &[u64], i: usize) -> usize {
    let k = d.len();
    if i == k {
        return k + 1;
    }
    // 0-based: d_i = d[i-1], e_{i+1} = e[i], e_{i+2} = e[i+1].
    if d[i - 1] < e[i] {
        i
    } else if d[i - 1] < e[i + 1] {
        i + 1
    } else {
        i + 2
    }
}

// ===========================================================================
// Tests
// ===========================================================================
