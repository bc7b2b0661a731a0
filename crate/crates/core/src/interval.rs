//! Interval codes: codes realizable by closed intervals on the line.
//!
//! Two independent recognizers are provided. The reference one enumerates
//! every assignment of integer endpoints in `[1, 2n]` and collects the
//! realized codes. The scalable one searches for an [`AtomWord`], the left
//! to right sequence of atoms of a realization, by backtracking.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{Code, Codeword};
use crate::error::{Error, Result};
use crate::geometry::{code_of_realization, Interval, Rational, Realization};
use crate::normalize::sort_endpoints;

/// Largest `n` for which [`enumerate_interval_codes`] runs.
pub const ENUMERATION_CAP: usize = 4;

/// One closed interval `[l, r]` with `1 <= l <= r <= 2n` per index, or empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EndpointAssignment {
    pairs: Vec<Option<(u8, u8)>>,
}

impl EndpointAssignment {
    pub fn new(pairs: Vec<Option<(u8, u8)>>) -> Result<Self> {
        let max = 2 * pairs.len();
        for &(l, r) in pairs.iter().flatten() {
            if l == 0 || l > r || r as usize > max {
                return Err(Error::Parse(format!(
                    "endpoint pair ({l}, {r}) outside 1 <= l <= r <= {max}"
                )));
            }
        }
        Ok(EndpointAssignment { pairs })
    }

    pub fn pairs(&self) -> &[Option<(u8, u8)>] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn to_realization(&self) -> Realization {
        Realization::from_intervals(self.pairs.iter().map(|p| match *p {
            None => Interval::Empty,
            Some((l, r)) => Interval::closed(l as i64, r as i64).expect("l <= r"),
        }))
        .expect("assignment has at least one index")
    }

    fn from_integer_realization(r: &Realization) -> Self {
        let pairs = r
            .axis_intervals(0)
            .iter()
            .map(|iv| {
                iv.as_closed().map(|c| {
                    let to_u8 = |v: Rational| {
                        debug_assert!(v.is_integer());
                        v.numer() as u8
                    };
                    (to_u8(c.lo()), to_u8(c.hi()))
                })
            })
            .collect();
        EndpointAssignment { pairs }
    }
}

/// Every endpoint choice for one index: empty, or `1 <= l <= r <= 2n`.
fn slot_options(n: usize) -> Vec<Interval> {
    let top = 2 * n as i64;
    let mut v = vec![Interval::Empty];
    for l in 1..=top {
        for r in l..=top {
            v.push(Interval::closed(l, r).unwrap());
        }
    }
    v
}

/// All codes realizable by `n` closed intervals (empty intervals allowed).
pub fn enumerate_interval_codes(n: usize) -> Result<BTreeSet<Code>> {
    enumerate_interval_codes_capped(n, ENUMERATION_CAP)
}

pub fn enumerate_interval_codes_capped(n: usize, cap: usize) -> Result<BTreeSet<Code>> {
    if n == 0 || n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let options = slot_options(n);
    let k = options.len();
    let total = k.pow(n as u32);
    let found = (0..total)
        .into_par_iter()
        .fold(HashSet::new, |mut acc, mut idx| {
            let mut intervals = Vec::with_capacity(n);
            for _ in 0..n {
                intervals.push(options[idx % k]);
                idx /= k;
            }
            let r = Realization::from_intervals(intervals).expect("n >= 1");
            acc.insert(code_of_realization(&r));
            acc
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found.into_iter().collect())
}

/// Process-wide memo of [`enumerate_interval_codes`] for `n <= ENUMERATION_CAP`.
pub fn interval_codes(n: usize) -> Result<&'static BTreeSet<Code>> {
    static CACHE: [OnceLock<BTreeSet<Code>>; ENUMERATION_CAP] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if n == 0 || n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(CACHE[n - 1].get_or_init(|| enumerate_interval_codes(n).expect("n within cap")))
}

/// Reference recognizer: membership in the full enumeration (`n <= 4`).
pub fn is_interval_code_by_enumeration(c: &Code) -> Result<bool> {
    Ok(interval_codes(c.n())?.contains(c))
}

/// The left-to-right sequence of atoms of an interval realization, split into
/// components at the gaps where no interval is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomWord {
    pub components: Vec<Vec<Codeword>>,
}

impl AtomWord {
    /// Flattened positions, with one `∅` between consecutive components.
    pub fn positions(&self) -> Vec<Codeword> {
        let mut out = Vec::new();
        for (k, comp) in self.components.iter().enumerate() {
            if k > 0 {
                out.push(Codeword::EMPTY);
            }
            out.extend_from_slice(comp);
        }
        out
    }

    /// Checks the structural invariants against `c`: consecutive occurrences
    /// of every index, nested neighbours, and exactly `c`'s nonempty words.
    pub fn is_valid_for(&self, c: &Code) -> bool {
        let pos = self.positions();
        if self.components.iter().any(|comp| comp.is_empty()) {
            return false;
        }
        if pos[..].windows(2).any(|w| {
            w[0] == w[1] || !(w[0].is_subset_of(w[1]) || w[1].is_subset_of(w[0]))
        }) {
            return false;
        }
        for i in 1..=c.n() {
            let hits: Vec<usize> = (0..pos.len()).filter(|&k| pos[k].contains(i)).collect();
            if let (Some(&a), Some(&b)) = (hits.first(), hits.last()) {
                if b - a + 1 != hits.len() {
                    return false;
                }
            }
        }
        let used: BTreeSet<Codeword> = pos.iter().copied().filter(|w| !w.is_empty()).collect();
        let want: BTreeSet<Codeword> = c.nonempty_words().collect();
        used == want
    }

    /// Intervals realizing the atom word: atom `k` occupies `(2k, 2k + 2)` and
    /// index `i` spans from its first to its last atom.
    pub fn to_realization(&self, n: usize) -> Realization {
        let pos = self.positions();
        let intervals = (1..=n).map(|i| {
            let hits: Vec<usize> = (0..pos.len()).filter(|&k| pos[k].contains(i)).collect();
            match (hits.first(), hits.last()) {
                (Some(&a), Some(&b)) => {
                    Interval::closed(2 * a as i64, 2 * b as i64 + 2).expect("a <= b")
                }
                _ => Interval::Empty,
            }
        });
        Realization::from_intervals(intervals).expect("n >= 1")
    }
}

struct AtomSearch<'a> {
    words: &'a [Codeword],
    all: u64,
    dead: HashSet<(Codeword, u16, u64)>,
    path: Vec<Codeword>,
}

impl AtomSearch<'_> {
    // `closed`: indices whose run has ended; `covered`: words placed so far
    fn go(&mut self, cur: Codeword, closed: u16, covered: u64) -> bool {
        if covered == self.all {
            return true;
        }
        if self.dead.contains(&(cur, closed, covered)) {
            return false;
        }
        for (k, &w) in self.words.iter().enumerate() {
            if w == cur || w.bits() & closed != 0 {
                continue;
            }
            if !(cur.is_subset_of(w) || w.is_subset_of(cur)) {
                continue;
            }
            let next_closed = closed | (cur.bits() & !w.bits());
            if self.stranded(next_closed, covered | 1 << k) {
                continue;
            }
            self.path.push(w);
            if self.go(w, next_closed, covered | 1 << k) {
                return true;
            }
            self.path.pop();
        }
        if !cur.is_empty() {
            let next_closed = closed | cur.bits();
            if !self.stranded(next_closed, covered) {
                self.path.push(Codeword::EMPTY);
                if self.go(Codeword::EMPTY, next_closed, covered) {
                    return true;
                }
                self.path.pop();
            }
        }
        self.dead.insert((cur, closed, covered));
        false
    }

    // some unplaced word uses an index that can no longer appear
    fn stranded(&self, closed: u16, covered: u64) -> bool {
        self.words
            .iter()
            .enumerate()
            .any(|(k, w)| covered & (1 << k) == 0 && w.bits() & closed != 0)
    }
}

/// Backtracking search for an atom word of `c`.
pub fn find_atom_word(c: &Code) -> Option<AtomWord> {
    let words: Vec<Codeword> = c.nonempty_words().collect();
    // each position opens or closes some index, so at most 2n - 1 positions
    if words.len() > (2 * c.n()).saturating_sub(1) {
        return None;
    }
    let mut search = AtomSearch {
        words: &words,
        all: if words.is_empty() { 0 } else { u64::MAX >> (64 - words.len()) },
        dead: HashSet::new(),
        path: Vec::new(),
    };
    if !search.go(Codeword::EMPTY, 0, 0) {
        return None;
    }
    let mut components = Vec::new();
    let mut current = Vec::new();
    for w in search.path {
        if w.is_empty() {
            components.push(std::mem::take(&mut current));
        } else {
            current.push(w);
        }
    }
    if !current.is_empty() {
        components.push(current);
    }
    Some(AtomWord { components })
}

/// Whether `c` is realizable by closed intervals (atom-word search).
pub fn is_interval_code(c: &Code) -> bool {
    find_atom_word(c).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalRealization {
    Realized(EndpointAssignment),
    NotRealizable,
}

impl IntervalRealization {
    pub fn assignment(&self) -> Option<&EndpointAssignment> {
        match self {
            IntervalRealization::Realized(a) => Some(a),
            IntervalRealization::NotRealizable => None,
        }
    }
}

/// A witness with integer endpoints in `[1, 2n]`, checked against the grid
/// oracle before it is returned.
pub fn realize_interval_code(c: &Code) -> IntervalRealization {
    let Some(word) = find_atom_word(c) else {
        return IntervalRealization::NotRealizable;
    };
    let ranked = sort_endpoints(&word.to_realization(c.n())).expect("1-dimensional");
    let assignment = EndpointAssignment::from_integer_realization(&ranked);
    assert_eq!(
        &code_of_realization(&assignment.to_realization()),
        c,
        "interval witness does not realize the code"
    );
    IntervalRealization::Realized(assignment)
}

/// True when some index of `c` appears in no codeword, so any realization
/// must use an empty interval for it.
pub fn needs_empty_intervals(c: &Code) -> bool {
    !c.unused_indices().is_empty()
}
