//! Box embedding dimension.
//!
//! A code is realizable by boxes in `R^d` exactly when it is the intersection
//! product of `d` interval codes. [`closure`] therefore runs a breadth-first
//! search over products of generator codes: layer `d` holds every product of
//! at most `d` generators. All codes on `[n]` live in a finite lattice, so the
//! search reaches a fixpoint.
//!
//! Codes are packed into a `u64` (bit `w` set when word `w` is present), which
//! limits the search to `n <= 6`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::code::{intersection_product, Code, Codeword};
use crate::error::{Error, Result};
use crate::geometry::{product_realization, Realization};
use crate::interval::{interval_codes, is_interval_code, realize_interval_code, ENUMERATION_CAP};

/// Largest universe the packed closure supports.
pub const PACKED_CAP: usize = 6;
/// Largest universe for closures over every interval code.
pub const FULL_CLOSURE_CAP: usize = ENUMERATION_CAP;
/// Largest universe for anchored queries.
pub const ANCHORED_CAP: usize = PACKED_CAP;
/// Upper limit on candidate subcodes examined by an anchored query.
pub const ANCHORED_CANDIDATE_LIMIT: u128 = 1 << 22;

const CHUNK: usize = 4096;

type Packed = u64;

/// Lookup tables for the product of packed codes on a fixed `[n]`.
///
/// `table[(w * bytes + j) * 256 + v]` is the packed set `{ w ∩ x }` over the
/// words `x` whose bits appear in byte `j` of a packed code with value `v`.
struct PackedUniverse {
    n: usize,
    bytes: usize,
    table: Vec<Packed>,
}

impl std::fmt::Debug for PackedUniverse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PackedUniverse").field("n", &self.n).finish()
    }
}

impl PackedUniverse {
    fn new(n: usize) -> Self {
        assert!((1..=PACKED_CAP).contains(&n));
        let words = 1usize << n;
        let bytes = words.div_ceil(8);
        let mut table = vec![0; words * bytes * 256];
        for w in 0..words {
            for j in 0..bytes {
                for v in 0..256usize {
                    let mut out = 0;
                    for b in 0..8 {
                        let x = 8 * j + b;
                        if v & (1 << b) != 0 && x < words {
                            out |= 1 << (w & x);
                        }
                    }
                    table[(w * bytes + j) * 256 + v] = out;
                }
            }
        }
        PackedUniverse { n, bytes, table }
    }

    fn product(&self, a: Packed, b: Packed) -> Packed {
        let bb = b.to_le_bytes();
        let mut out = 0;
        let mut rest = a;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            let base = w * self.bytes;
            for (j, &v) in bb.iter().enumerate().take(self.bytes) {
                out |= self.table[(base + j) * 256 + v as usize];
            }
            rest &= rest - 1;
        }
        out
    }

    fn pack(&self, c: &Code) -> Packed {
        c.words().iter().fold(0, |acc, w| acc | 1 << w.bits())
    }

    fn unpack(&self, p: Packed) -> Code {
        let words = (0..64u16)
            .filter(|&w| p & (1 << w) != 0)
            .map(Codeword::from_bits);
        Code::new(self.n, words).expect("packed code within universe")
    }
}

fn universe(n: usize) -> Arc<PackedUniverse> {
    static CACHE: OnceLock<Vec<OnceLock<Arc<PackedUniverse>>>> = OnceLock::new();
    let slots = CACHE.get_or_init(|| (0..PACKED_CAP).map(|_| OnceLock::new()).collect());
    slots[n - 1]
        .get_or_init(|| Arc::new(PackedUniverse::new(n)))
        .clone()
}

#[derive(Clone, Debug, Default)]
pub struct ClosureOptions {
    /// Stop after this many layers even without a fixpoint.
    pub max_dim: Option<usize>,
    /// Keep only codes contained in this code. Products only grow once a
    /// factor containing `[n]` is applied, so this is safe for anchored
    /// searches.
    pub within: Option<Code>,
}

/// Layers of products of generator codes.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    universe: Arc<PackedUniverse>,
    generators: Vec<Packed>,
    // frontiers[k]: codes first reached with k + 1 factors
    frontiers: Vec<Vec<Packed>>,
    first_dim: HashMap<Packed, usize>,
    // code -> (code with one factor fewer, generator index)
    parent: HashMap<Packed, (Packed, u32)>,
    fixpoint_reached: bool,
}

fn check_packed(n: usize) -> Result<()> {
    if n == 0 || n > PACKED_CAP {
        return Err(Error::ClosureCap { n, cap: PACKED_CAP });
    }
    Ok(())
}

/// Closure with the default generators (all interval codes on `[n]`, `n <= 4`)
/// or with user-supplied ones (`n <= 6`).
pub fn closure(n: usize, generators: Option<&[Code]>) -> Result<ClosureResult> {
    closure_with(n, generators, &ClosureOptions::default())
}

pub fn closure_with(
    n: usize,
    generators: Option<&[Code]>,
    options: &ClosureOptions,
) -> Result<ClosureResult> {
    let gens: Vec<Code> = match generators {
        Some(g) => {
            check_packed(n)?;
            if let Some(bad) = g.iter().find(|c| c.n() != n) {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: bad.n(),
                });
            }
            g.to_vec()
        }
        None => {
            if n == 0 || n > FULL_CLOSURE_CAP {
                return Err(Error::ClosureCap {
                    n,
                    cap: FULL_CLOSURE_CAP,
                });
            }
            interval_codes(n)?.iter().cloned().collect()
        }
    };
    if let Some(w) = &options.within {
        if w.n() != n {
            return Err(Error::UniverseMismatch {
                left: n,
                right: w.n(),
            });
        }
    }
    let uni = universe(n);
    let within = options.within.as_ref().map(|c| uni.pack(c));
    let keep = |p: Packed| within.is_none_or(|w| p & !w == 0);

    let mut packed: Vec<Packed> = gens.iter().map(|c| uni.pack(c)).collect();
    packed.sort_unstable();
    packed.dedup();

    let mut first_dim = HashMap::new();
    let mut parent = HashMap::new();
    let mut frontier: Vec<Packed> = Vec::new();
    for &g in &packed {
        if keep(g) && first_dim.insert(g, 1).is_none() {
            frontier.push(g);
        }
    }
    let mut frontiers = Vec::new();
    let mut fixpoint_reached = frontier.is_empty();
    if !frontier.is_empty() {
        frontiers.push(frontier);
    }
    while !fixpoint_reached {
        if options.max_dim.is_some_and(|m| frontiers.len() >= m) {
            break;
        }
        let depth = frontiers.len() + 1;
        let mut next = Vec::new();
        for chunk in frontiers.last().unwrap().chunks(CHUNK) {
            let found: Vec<Vec<(Packed, Packed, u32)>> = chunk
                .par_iter()
                .map(|&a| {
                    let mut local = HashSet::new();
                    let mut out = Vec::new();
                    for (gi, &g) in packed.iter().enumerate() {
                        let p = uni.product(a, g);
                        if keep(p) && !first_dim.contains_key(&p) && local.insert(p) {
                            out.push((p, a, gi as u32));
                        }
                    }
                    out
                })
                .collect();
            for (p, a, gi) in found.into_iter().flatten() {
                if let std::collections::hash_map::Entry::Vacant(e) = first_dim.entry(p) {
                    e.insert(depth);
                    parent.insert(p, (a, gi));
                    next.push(p);
                }
            }
        }
        if next.is_empty() {
            fixpoint_reached = true;
        } else {
            frontiers.push(next);
        }
    }
    Ok(ClosureResult {
        universe: uni,
        generators: packed,
        frontiers,
        first_dim,
        parent,
        fixpoint_reached,
    })
}

/// Memoized closure over all interval codes for `n <= 4`.
pub fn full_closure(n: usize) -> Result<&'static ClosureResult> {
    static CACHE: [OnceLock<ClosureResult>; FULL_CLOSURE_CAP] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if n == 0 || n > FULL_CLOSURE_CAP {
        return Err(Error::ClosureCap {
            n,
            cap: FULL_CLOSURE_CAP,
        });
    }
    Ok(CACHE[n - 1].get_or_init(|| closure(n, None).expect("n within cap")))
}

impl ClosureResult {
    pub fn n(&self) -> usize {
        self.universe.n
    }

    pub fn generators(&self) -> Vec<Code> {
        self.generators.iter().map(|&p| self.universe.unpack(p)).collect()
    }

    /// Number of layers that produced new codes.
    pub fn depth(&self) -> usize {
        self.frontiers.len()
    }

    pub fn fixpoint_reached(&self) -> bool {
        self.fixpoint_reached
    }

    /// Total number of distinct codes reached.
    pub fn len(&self) -> usize {
        self.first_dim.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_dim.is_empty()
    }

    /// Codes first reached at layer `d` (1-based).
    pub fn new_at(&self, d: usize) -> BTreeSet<Code> {
        d.checked_sub(1)
            .and_then(|k| self.frontiers.get(k))
            .map(|f| f.iter().map(|&p| self.universe.unpack(p)).collect())
            .unwrap_or_default()
    }

    /// Every code that is a product of at most `d` generators.
    pub fn layer(&self, d: usize) -> BTreeSet<Code> {
        self.frontiers
            .iter()
            .take(d)
            .flatten()
            .map(|&p| self.universe.unpack(p))
            .collect()
    }

    /// Cumulative layers `1..=depth`; when the fixpoint was reached the last
    /// entry is repeated to record that one more layer added nothing.
    pub fn layers(&self) -> Vec<BTreeSet<Code>> {
        let mut out: Vec<BTreeSet<Code>> = (1..=self.depth()).map(|d| self.layer(d)).collect();
        if self.fixpoint_reached {
            if let Some(last) = out.last().cloned() {
                out.push(last);
            }
        }
        out
    }

    /// Smallest layer containing `c`.
    pub fn first_dim(&self, c: &Code) -> Option<usize> {
        if c.n() != self.n() {
            return None;
        }
        self.first_dim.get(&self.universe.pack(c)).copied()
    }

    pub fn contains(&self, c: &Code) -> bool {
        self.first_dim(c).is_some()
    }

    /// Generators whose product is `c`, as found by the search.
    pub fn factor_witness(&self, c: &Code) -> Option<Vec<Code>> {
        let mut p = self.universe.pack(c);
        self.first_dim.get(&p)?;
        let mut factors = Vec::new();
        while let Some(&(prev, gi)) = self.parent.get(&p) {
            factors.push(self.universe.unpack(self.generators[gi as usize]));
            p = prev;
        }
        factors.push(self.universe.unpack(p));
        factors.reverse();
        Some(factors)
    }

    /// An explicit box realization of `c`, built from interval witnesses of
    /// the factors. `None` when `c` was not reached or a factor is not an
    /// interval code.
    pub fn realize(&self, c: &Code) -> Option<Realization> {
        let parts = self
            .factor_witness(c)?
            .iter()
            .map(|f| realize_interval_code(f).assignment().map(|a| a.to_realization()))
            .collect::<Option<Vec<_>>>()?;
        product_realization(&parts).ok()
    }

    /// Box dimension of `c` as far as this closure can tell.
    pub fn bdim_of(&self, c: &Code) -> Bdim {
        match self.first_dim(c) {
            Some(d) => Bdim::Dim(d),
            None if self.fixpoint_reached => Bdim::NotBoxConvex {
                fixpoint_layers: self.depth(),
            },
            None => Bdim::Exceeds {
                max_dim: self.depth(),
            },
        }
    }
}

/// Serialized as `{"bdim": 2}`, `{"bdim": "not_box_convex", "fixpoint_layers": 3}`
/// or `{"bdim": "exceeds", "max_dim": 4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bdim {
    /// Realizable by boxes in `R^d` and not in lower dimension.
    Dim(usize),
    /// Not realizable by boxes in any dimension; the search saturated after
    /// `fixpoint_layers` layers.
    NotBoxConvex { fixpoint_layers: usize },
    /// Not realizable in dimension `<= max_dim`; higher dimensions unexplored.
    Exceeds { max_dim: usize },
}

impl Serialize for Bdim {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(if matches!(self, Bdim::Dim(_)) { 1 } else { 2 }))?;
        match *self {
            Bdim::Dim(d) => m.serialize_entry("bdim", &d)?,
            Bdim::NotBoxConvex { fixpoint_layers } => {
                m.serialize_entry("bdim", "not_box_convex")?;
                m.serialize_entry("fixpoint_layers", &fixpoint_layers)?;
            }
            Bdim::Exceeds { max_dim } => {
                m.serialize_entry("bdim", "exceeds")?;
                m.serialize_entry("max_dim", &max_dim)?;
            }
        }
        m.end()
    }
}

impl Bdim {
    pub fn dim(self) -> Option<usize> {
        match self {
            Bdim::Dim(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Anchored when `[n]` is a codeword, full closure otherwise.
    #[default]
    Auto,
    Anchored,
    Full,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BdimOptions {
    pub strategy: Strategy,
    pub max_dim: Option<usize>,
}

pub fn bdim(c: &Code) -> Result<Bdim> {
    bdim_with(c, BdimOptions::default())
}

pub fn bdim_with(c: &Code, options: BdimOptions) -> Result<Bdim> {
    let n = c.n();
    let strategy = match options.strategy {
        Strategy::Auto if c.contains_full_word() && n <= ANCHORED_CAP => Strategy::Anchored,
        Strategy::Auto => Strategy::Full,
        s => s,
    };
    match strategy {
        Strategy::Anchored => {
            let gens = anchored_generators(c)?;
            let result = closure_with(
                n,
                Some(&gens),
                &ClosureOptions {
                    max_dim: options.max_dim,
                    within: Some(c.clone()),
                },
            )?;
            Ok(result.bdim_of(c))
        }
        _ => {
            let result = full_closure(n)?;
            Ok(match (result.bdim_of(c), options.max_dim) {
                (Bdim::Dim(d), Some(m)) if d > m => Bdim::Exceeds { max_dim: m },
                (Bdim::NotBoxConvex { .. }, Some(m)) if m < result.depth() => {
                    Bdim::Exceeds { max_dim: m }
                }
                (b, _) => b,
            })
        }
    }
}

pub fn is_box_convex_in_dim(c: &Code, d: usize) -> Result<bool> {
    let b = bdim_with(
        c,
        BdimOptions {
            max_dim: Some(d),
            ..Default::default()
        },
    )?;
    Ok(matches!(b, Bdim::Dim(k) if k <= d))
}

fn binomial_prefix_sum(m: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut term = 1u128;
    for i in 0..=k.min(m) {
        total += term;
        term = term * (m - i) as u128 / (i + 1) as u128;
    }
    total
}

/// Subcodes `A ⊆ c` with `[n] ∈ A` of at most `max_extra` further nonempty
/// words.
fn anchored_subcodes(c: &Code, max_extra: usize) -> Result<Vec<Code>> {
    let n = c.n();
    let full = Codeword::full(n);
    if !c.contains(full) {
        return Err(Error::NotAnchored { n });
    }
    let others: Vec<Codeword> = c
        .nonempty_words()
        .filter(|&w| w != full)
        .collect();
    let count = binomial_prefix_sum(others.len(), max_extra);
    if count > ANCHORED_CANDIDATE_LIMIT {
        return Err(Error::AnchoredTooLarge {
            candidates: count,
            limit: ANCHORED_CANDIDATE_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut chosen = vec![full];
    fn go(
        others: &[Codeword],
        start: usize,
        budget: usize,
        chosen: &mut Vec<Codeword>,
        n: usize,
        out: &mut Vec<Code>,
    ) {
        out.push(Code::new(n, chosen.iter().copied()).expect("subcode of a valid code"));
        if budget == 0 {
            return;
        }
        for k in start..others.len() {
            chosen.push(others[k]);
            go(others, k + 1, budget - 1, chosen, n, out);
            chosen.pop();
        }
    }
    go(&others, 0, max_extra, &mut chosen, n, &mut out);
    Ok(out)
}

/// Every subcode `A ⊆ c` with `[n] ∈ A` and `∅ ∈ A` (no size bound).
pub fn anchored_candidates(c: &Code) -> Result<Vec<Code>> {
    anchored_subcodes(c, usize::MAX)
}

/// Interval codes `A` with `[n] ∈ A ⊆ c`. Any factorization of `c` into
/// interval codes uses only such factors when `[n] ∈ c`.
pub fn anchored_generators(c: &Code) -> Result<Vec<Code>> {
    let n = c.n();
    if n > ANCHORED_CAP {
        return Err(Error::AnchoredCap {
            n,
            cap: ANCHORED_CAP,
        });
    }
    // an interval code has at most 2n + 1 words, ∅ and [n] among them
    let subcodes = anchored_subcodes(c, 2 * n - 1)?;
    Ok(subcodes.into_iter().filter(is_interval_code).collect())
}

/// All codes on `[n]` (each containing `∅`), `n <= 4`.
pub fn all_codes(n: usize) -> Result<Vec<Code>> {
    if n == 0 || n > FULL_CLOSURE_CAP {
        return Err(Error::EnumerationCap {
            n,
            cap: FULL_CLOSURE_CAP,
        });
    }
    let nonempty = (1usize << n) - 1;
    Ok((0u64..1 << nonempty)
        .map(|mask| {
            let words = (0..nonempty)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| Codeword::from_bits(b as u16 + 1));
            Code::new(n, words).expect("n within cap")
        })
        .collect())
}

/// Unordered pairs `(a, b)` of candidates, `a <= b`, with `a ⋒ b = c`.
pub fn factorizations(c: &Code, candidates: &[Code]) -> Result<BTreeSet<(Code, Code)>> {
    if let Some(bad) = candidates.iter().find(|x| x.n() != c.n()) {
        return Err(Error::UniverseMismatch {
            left: c.n(),
            right: bad.n(),
        });
    }
    let mut cands: Vec<&Code> = candidates.iter().collect();
    cands.sort();
    cands.dedup();
    let mut out = BTreeSet::new();
    if c.n() <= PACKED_CAP {
        let uni = universe(c.n());
        let target = uni.pack(c);
        let packed: Vec<Packed> = cands.iter().map(|x| uni.pack(x)).collect();
        for i in 0..packed.len() {
            for j in i..packed.len() {
                if uni.product(packed[i], packed[j]) == target {
                    out.insert((cands[i].clone(), cands[j].clone()));
                }
            }
        }
    } else {
        for i in 0..cands.len() {
            for j in i..cands.len() {
                if &intersection_product(cands[i], cands[j])? == c {
                    out.insert((cands[i].clone(), cands[j].clone()));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(n: usize, s: &str) -> Code {
        Code::parse_text(s, Some(n)).unwrap()
    }

    #[test]
    fn packed_product_matches_code_product() {
        for n in 2..=PACKED_CAP {
            let uni = universe(n);
            let a = code(n, "1, 12, 2");
            let b = Code::full_and_empty(n).unwrap().with_words([Codeword::singleton(2)]).unwrap();
            let p = uni.unpack(uni.product(uni.pack(&a), uni.pack(&b)));
            assert_eq!(p, intersection_product(&a, &b).unwrap());
        }
    }

    #[test]
    fn n1_fixpoint_at_layer_one() {
        let r = closure(1, None).unwrap();
        assert!(r.fixpoint_reached());
        assert_eq!(r.depth(), 1);
        // oracle: every product of the two codes on [1]
        let codes = all_codes(1).unwrap();
        for a in &codes {
            for b in &codes {
                assert!(r.layer(1).contains(&intersection_product(a, b).unwrap()));
            }
        }
        let layers = r.layers();
        assert_eq!(layers[layers.len() - 1], layers[layers.len() - 2]);
    }

    #[test]
    fn sunflower_dims() {
        assert_eq!(bdim(&code(4, "1234, 1, 2, 3, 4")).unwrap(), Bdim::Dim(2));
        assert_eq!(bdim(&code(2, "12, 1, 2")).unwrap(), Bdim::Dim(1));
    }

    #[test]
    fn c4_not_box_convex() {
        assert!(matches!(
            bdim(&code(4, "1234, 12, 13, 14")).unwrap(),
            Bdim::NotBoxConvex { .. }
        ));
    }

    #[test]
    fn box_convex_in_dim() {
        let f4 = code(4, "1234, 1, 2, 3, 4");
        assert!(!is_box_convex_in_dim(&f4, 1).unwrap());
        assert!(is_box_convex_in_dim(&f4, 2).unwrap());
        assert!(is_box_convex_in_dim(&code(3, "123, 12, 13"), 1).unwrap());
        let c3 = code(3, "12, 13, 23, 1, 2, 3");
        for d in 1..=4 {
            assert!(!is_box_convex_in_dim(&c3, d).unwrap());
        }
    }

    #[test]
    fn max_dim_limits_answer() {
        let f4 = code(4, "1234, 1, 2, 3, 4");
        let opts = BdimOptions {
            max_dim: Some(1),
            ..Default::default()
        };
        assert_eq!(bdim_with(&f4, opts).unwrap(), Bdim::Exceeds { max_dim: 1 });
    }

    #[test]
    fn anchored_requires_full_word() {
        let opts = BdimOptions {
            strategy: Strategy::Anchored,
            ..Default::default()
        };
        assert_eq!(
            bdim_with(&code(3, "12, 3"), opts).unwrap_err(),
            Error::NotAnchored { n: 3 }
        );
    }

    #[test]
    fn caps() {
        assert!(matches!(bdim(&code(5, "12345, 1")), Ok(Bdim::Dim(1))));
        assert!(matches!(bdim(&code(5, "1, 2")), Err(Error::ClosureCap { .. })));
        assert!(matches!(closure(7, Some(&[])), Err(Error::ClosureCap { .. })));
    }

    #[test]
    fn factorization_identity_pair() {
        let n = 3;
        let id = Code::full_and_empty(n).unwrap();
        let got = factorizations(&id, std::slice::from_ref(&id)).unwrap();
        assert_eq!(got.len(), 1);
        let other = code(3, "123, 1");
        assert!(factorizations(&other, std::slice::from_ref(&id)).unwrap().is_empty());
    }

    #[test]
    fn sunflower_factor_pair() {
        let f4 = code(4, "1234, 1, 2, 3, 4");
        let cands: Vec<Code> = interval_codes(4).unwrap().iter().cloned().collect();
        let pairs = factorizations(&f4, &cands).unwrap();
        let a = code(4, "1234, 1, 2");
        let b = code(4, "1234, 3, 4");
        assert!(pairs.contains(&(a, b)));
    }

    #[test]
    fn witnesses_rebuild_realizations() {
        let r = full_closure(3).unwrap();
        let target = code(3, "123, 1, 2, 3");
        assert_eq!(r.first_dim(&target), Some(2));
        let real = r.realize(&target).unwrap();
        assert_eq!(real.dim(), 2);
        assert_eq!(crate::geometry::code_of_realization(&real), target);
    }

    #[test]
    fn all_codes_count() {
        assert_eq!(all_codes(3).unwrap().len(), 128);
        assert_eq!(all_codes(2).unwrap().len(), 8);
    }
}
