//! Combinatorial codes on the index set `[n] = {1, ..., n}`.
//!
//! A [`Codeword`] is a subset of `[n]` packed into a `u16` (bit `i - 1` holds
//! index `i`), so universes are capped at [`MAX_UNIVERSE`]. A [`Code`] is a
//! duplicate-free set of codewords that always contains the empty word; its
//! words are kept sorted by their bit pattern so that equality, hashing and
//! ordering are structural.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported universe size.
pub const MAX_UNIVERSE: usize = 16;

/// A subset of `[n]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(u16);

impl Codeword {
    pub const EMPTY: Codeword = Codeword(0);

    pub const fn from_bits(bits: u16) -> Self {
        Codeword(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// The full word `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_UNIVERSE);
        if n >= 16 {
            Codeword(u16::MAX)
        } else {
            Codeword((1u16 << n) - 1)
        }
    }

    /// Builds a word from 1-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut bits = 0u16;
        for i in indices {
            if i == 0 || i > MAX_UNIVERSE {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: MAX_UNIVERSE,
                });
            }
            bits |= 1 << (i - 1);
        }
        Ok(Codeword(bits))
    }

    pub fn singleton(i: usize) -> Self {
        assert!((1..=MAX_UNIVERSE).contains(&i), "index {i} out of range");
        Codeword(1 << (i - 1))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_UNIVERSE).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_subset_of(self, other: Codeword) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Codeword) -> Codeword {
        Codeword(self.0 & other.0)
    }

    pub fn union(self, other: Codeword) -> Codeword {
        Codeword(self.0 | other.0)
    }

    /// Largest index present, or 0 for the empty word.
    pub fn max_index(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..16).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    /// Relabels indices: old index `i` (0-based) goes to `perm[i]`.
    pub fn permuted(self, perm: &[usize]) -> Codeword {
        let mut out = 0u16;
        let mut bits = self.0;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            out |= 1 << perm[b];
            bits &= bits - 1;
        }
        Codeword(out)
    }

    /// Presentation order: larger words first, then lexicographic on the
    /// sorted index lists.
    pub fn display_cmp(&self, other: &Codeword) -> Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        if self.max_index() <= 9 {
            for i in self.indices() {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

pub type WordSet = BTreeSet<Codeword>;

/// What to do when a code is built without the empty codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmptyWordPolicy {
    /// Add `∅` and report that it was added.
    Insert,
    /// Reject the input.
    Strict,
}

/// A combinatorial code on `[n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    n: u8,
    // sorted by bits, deduplicated, words[0] == ∅
    words: Vec<Codeword>,
}

fn check_universe(n: usize) -> Result<()> {
    if n == 0 || n > MAX_UNIVERSE {
        return Err(Error::UniverseOutOfRange {
            n,
            max: MAX_UNIVERSE,
        });
    }
    Ok(())
}

impl Code {
    /// Builds a code, inserting `∅` when absent.
    pub fn new<I: IntoIterator<Item = Codeword>>(n: usize, words: I) -> Result<Self> {
        Self::try_new(n, words, EmptyWordPolicy::Insert).map(|(c, _)| c)
    }

    /// Builds a code under an explicit policy for the empty word. The flag is
    /// `true` when `∅` had to be inserted.
    pub fn try_new<I: IntoIterator<Item = Codeword>>(
        n: usize,
        words: I,
        policy: EmptyWordPolicy,
    ) -> Result<(Self, bool)> {
        check_universe(n)?;
        let mut words: Vec<Codeword> = words.into_iter().collect();
        for w in &words {
            if w.max_index() > n {
                return Err(Error::IndexOutOfRange {
                    index: w.max_index(),
                    n,
                });
            }
        }
        let inserted = !words.contains(&Codeword::EMPTY);
        if inserted {
            if policy == EmptyWordPolicy::Strict {
                return Err(Error::MissingEmptyWord);
            }
            words.push(Codeword::EMPTY);
        }
        words.sort_unstable();
        words.dedup();
        Ok((Code { n: n as u8, words }, inserted))
    }

    /// Builds a code from 1-based index lists.
    pub fn from_index_lists<W, I>(n: usize, lists: W) -> Result<Self>
    where
        W: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let words = lists
            .into_iter()
            .map(Codeword::from_indices)
            .collect::<Result<Vec<_>>>()?;
        Code::new(n, words)
    }

    /// Parses the compact text form, e.g. `"123, 24, 12, ∅"` or
    /// `"{123, 24, 1, ∅}"`. Each digit `1..=9` is one index. When `n` is
    /// `None` the universe is the largest index mentioned.
    pub fn parse_text(text: &str, n: Option<usize>) -> Result<Self> {
        let words = parse_word_list(text)?;
        let n = match n {
            Some(n) => n,
            None => words.iter().map(|w| w.max_index()).max().unwrap_or(0).max(1),
        };
        Code::new(n, words)
    }

    /// The code `{[n], ∅}`, the identity for the intersection product.
    pub fn full_and_empty(n: usize) -> Result<Self> {
        check_universe(n)?;
        Code::new(n, [Codeword::full(n)])
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Words in internal (bit pattern) order.
    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    /// Words in presentation order (largest first).
    pub fn display_words(&self) -> Vec<Codeword> {
        let mut ws = self.words.clone();
        ws.sort_by(Codeword::display_cmp);
        ws
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// A code always contains `∅`, so it is never empty as a set.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, w: Codeword) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    pub fn contains_full_word(&self) -> bool {
        self.contains(Codeword::full(self.n()))
    }

    pub fn word_set(&self) -> WordSet {
        self.words.iter().copied().collect()
    }

    /// Nonempty codewords.
    pub fn nonempty_words(&self) -> impl Iterator<Item = Codeword> + '_ {
        self.words.iter().copied().filter(|w| !w.is_empty())
    }

    pub fn is_subset_of(&self, other: &Code) -> bool {
        self.n == other.n && self.words.iter().all(|w| other.contains(*w))
    }

    pub fn union(&self, other: &Code) -> Result<Code> {
        self.check_same_universe(other)?;
        Code::new(self.n(), self.words.iter().chain(other.words.iter()).copied())
    }

    /// Adds arbitrary words (their indices must lie in `[n]`).
    pub fn with_words<I: IntoIterator<Item = Codeword>>(&self, extra: I) -> Result<Code> {
        Code::new(self.n(), self.words.iter().copied().chain(extra))
    }

    fn check_same_universe(&self, other: &Code) -> Result<()> {
        if self.n != other.n {
            return Err(Error::UniverseMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Indices of `[n]` that appear in no codeword. A realization of such a
    /// code must use the empty set for those indices.
    pub fn unused_indices(&self) -> Vec<usize> {
        let used = self.words.iter().fold(0u16, |acc, w| acc | w.bits());
        (1..=self.n()).filter(|i| used & (1 << (i - 1)) == 0).collect()
    }

    /// Relabels indices; `perm[i]` is the new 0-based position of old index `i`.
    pub fn permuted(&self, perm: &[usize]) -> Code {
        debug_assert_eq!(perm.len(), self.n());
        let mut words: Vec<Codeword> = self.words.iter().map(|w| w.permuted(perm)).collect();
        words.sort_unstable();
        Code { n: self.n, words }
    }

    pub fn intersection_product(&self, other: &Code) -> Result<Code> {
        intersection_product(self, other)
    }

    pub fn maximal_codewords(&self) -> Vec<Codeword> {
        maximal_codewords(self)
    }

    pub fn simplicial_complex(&self) -> Code {
        simplicial_complex(self)
    }

    pub fn is_max_intersection_complete(&self) -> bool {
        is_max_intersection_complete(self)
    }

    pub fn canonical_form(&self) -> (Code, Vec<usize>) {
        canonical_form(self)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.display_words().iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, {})", self.n, self)
    }
}

/// Parses a comma or whitespace separated list of digit words.
pub fn parse_word_list(text: &str) -> Result<Vec<Codeword>> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(trimmed);
    let mut words = Vec::new();
    for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if matches!(token, "∅" | "{}" | "e" | "empty") {
            words.push(Codeword::EMPTY);
            continue;
        }
        let mut indices = Vec::new();
        for ch in token.chars() {
            match ch.to_digit(10) {
                Some(d) if d >= 1 => indices.push(d as usize),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid codeword {token:?}: expected digits 1-9 or ∅"
                    )))
                }
            }
        }
        words.push(Codeword::from_indices(indices)?);
    }
    Ok(words)
}

/// `{ c1 ∩ c2 : c1 ∈ a, c2 ∈ b }`.
pub fn intersection_product(a: &Code, b: &Code) -> Result<Code> {
    a.check_same_universe(b)?;
    let mut words = Vec::with_capacity(a.len() * b.len());
    for &x in &a.words {
        for &y in &b.words {
            words.push(x.intersection(y));
        }
    }
    words.sort_unstable();
    words.dedup();
    Ok(Code { n: a.n, words })
}

/// Folds [`intersection_product`] over a nonempty list of codes.
pub fn product_of_all<'a, I: IntoIterator<Item = &'a Code>>(codes: I) -> Result<Option<Code>> {
    let mut acc: Option<Code> = None;
    for c in codes {
        acc = Some(match acc {
            None => c.clone(),
            Some(a) => intersection_product(&a, c)?,
        });
    }
    Ok(acc)
}

/// Codewords with no proper superset in the code.
pub fn maximal_codewords(c: &Code) -> Vec<Codeword> {
    c.words
        .iter()
        .copied()
        .filter(|&w| !c.words.iter().any(|&v| v != w && w.is_subset_of(v)))
        .collect()
}

/// The downward closure `Δ(c)`.
pub fn simplicial_complex(c: &Code) -> Code {
    let mut seen = WordSet::new();
    for w in maximal_codewords(c) {
        // enumerate all submasks of w
        let bits = w.bits();
        let mut sub = bits;
        loop {
            seen.insert(Codeword(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & bits;
        }
    }
    Code {
        n: c.n,
        words: seen.into_iter().collect(),
    }
}

/// True iff every word of `ambient` lying below a word of `d` is itself in `d`.
pub fn is_downward_closed_in(d: &WordSet, ambient: &WordSet) -> Result<bool> {
    if let Some(w) = d.iter().find(|w| !ambient.contains(w)) {
        return Err(Error::NotInAmbient {
            word: w.to_string(),
        });
    }
    Ok(first_downward_violation(d, ambient).is_none())
}

/// A pair `(w, below)` with `below ⊆ w`, `w ∈ d`, `below ∈ ambient \ d`.
pub(crate) fn first_downward_violation(
    d: &WordSet,
    ambient: &WordSet,
) -> Option<(Codeword, Codeword)> {
    for &w in d {
        for &v in ambient {
            if v.is_subset_of(w) && !d.contains(&v) {
                return Some((w, v));
            }
        }
    }
    None
}

/// Every intersection of a nonempty family of maximal codewords is a codeword.
pub fn is_max_intersection_complete(c: &Code) -> bool {
    let maxes = maximal_codewords(c);
    let mut closed: WordSet = maxes.iter().copied().collect();
    // close under pairwise intersection; reaches every family intersection
    let mut frontier: Vec<Codeword> = maxes.clone();
    while let Some(w) = frontier.pop() {
        for &m in &maxes {
            let x = w.intersection(m);
            if closed.insert(x) {
                frontier.push(x);
            }
        }
    }
    closed.iter().all(|w| c.contains(*w))
}

/// Lexicographically least relabeling of `c` and a permutation producing it.
///
/// Brute force over all `n!` permutations.
pub fn canonical_form(c: &Code) -> (Code, Vec<usize>) {
    let n = c.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = c.clone();
    let mut best_perm = perm.clone();
    // Heap's algorithm
    let mut counters = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            let candidate = c.permuted(&perm);
            if candidate < best {
                best = candidate;
                best_perm.clone_from(&perm);
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    (best, best_perm)
}

/// All permutations of `0..n` in a fixed order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
