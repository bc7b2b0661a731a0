//! Exact intervals, axis-parallel boxes and realizations, plus the grid
//! oracle that computes the code of a realization directly from point
//! membership.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::code::{Code, Codeword, MAX_UNIVERSE};
use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));
    pub const QUARTER: Rational = Rational(Ratio::new_raw(1, 4));

    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Ratio::new(numer, denom))
    }

    pub fn integer(v: i64) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn midpoint(self, other: Rational) -> Rational {
        (self + other) / Rational::integer(2)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::integer(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Rational::new(p, q))
            }
            None => s.parse::<i64>().map(Rational::integer).map_err(|_| bad()),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(Rational::integer(v)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A nonempty closed interval `[lo, hi]`; `lo == hi` is a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClosedInterval {
    lo: Rational,
    hi: Rational,
}

impl ClosedInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(ClosedInterval { lo, hi })
    }

    pub fn lo(&self) -> Rational {
        self.lo
    }

    pub fn hi(&self) -> Rational {
        self.hi
    }

    pub fn contains(&self, p: Rational) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn interior_contains(&self, p: Rational) -> bool {
        self.lo < p && p < self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

/// An interval on one axis: empty, or closed and nonempty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interval {
    Empty,
    Closed(ClosedInterval),
}

impl Interval {
    pub fn closed(lo: impl Into<Rational>, hi: impl Into<Rational>) -> Result<Self> {
        ClosedInterval::new(lo.into(), hi.into()).map(Interval::Closed)
    }

    pub fn as_closed(&self) -> Option<&ClosedInterval> {
        match self {
            Interval::Empty => None,
            Interval::Closed(c) => Some(c),
        }
    }
}

/// An axis-parallel box: empty, or a product of nonempty closed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxisBox {
    Empty,
    Product(Vec<ClosedInterval>),
}

impl AxisBox {
    /// Any empty factor collapses the whole box to [`AxisBox::Empty`].
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(factors: I) -> AxisBox {
        let mut out = Vec::new();
        for f in factors {
            match f {
                Interval::Empty => return AxisBox::Empty,
                Interval::Closed(c) => out.push(c),
            }
        }
        AxisBox::Product(out)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AxisBox::Empty)
    }

    pub fn intervals(&self) -> Option<&[ClosedInterval]> {
        match self {
            AxisBox::Empty => None,
            AxisBox::Product(v) => Some(v),
        }
    }

    /// Projection onto one axis.
    pub fn axis(&self, j: usize) -> Interval {
        match self {
            AxisBox::Empty => Interval::Empty,
            AxisBox::Product(v) => Interval::Closed(v[j]),
        }
    }
}

/// An ordered list of `n` boxes in `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Realization {
    dim: usize,
    boxes: Vec<AxisBox>,
}

impl Realization {
    pub fn new(dim: usize, boxes: Vec<AxisBox>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if boxes.is_empty() {
            return Err(Error::EmptyRealization);
        }
        if boxes.len() > MAX_UNIVERSE {
            return Err(Error::UniverseOutOfRange {
                n: boxes.len(),
                max: MAX_UNIVERSE,
            });
        }
        for (index, b) in boxes.iter().enumerate() {
            if let AxisBox::Product(v) = b {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch {
                        index,
                        expected: dim,
                        found: v.len(),
                    });
                }
            }
        }
        Ok(Realization { dim, boxes })
    }

    /// A 1-dimensional realization.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Result<Self> {
        let boxes = intervals
            .into_iter()
            .map(|i| AxisBox::from_intervals([i]))
            .collect();
        Realization::new(1, boxes)
    }

    /// Convenience for tests and examples: integer closed intervals.
    pub fn from_integer_intervals(pairs: &[(i64, i64)]) -> Result<Self> {
        Realization::from_intervals(
            pairs
                .iter()
                .map(|&(a, b)| Interval::closed(a, b))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    /// The intervals on axis `j`, one per box.
    pub fn axis_intervals(&self, j: usize) -> Vec<Interval> {
        self.boxes.iter().map(|b| b.axis(j)).collect()
    }

    /// Applies `x -> scale * x + shift` on axis `j`. `scale` must be positive.
    pub fn affine_axis(&self, j: usize, scale: Rational, shift: Rational) -> Realization {
        assert!(scale > Rational::ZERO, "scale must be positive");
        let boxes = self
            .boxes
            .iter()
            .map(|b| match b {
                AxisBox::Empty => AxisBox::Empty,
                AxisBox::Product(v) => {
                    let mut v = v.clone();
                    v[j] = ClosedInterval {
                        lo: scale * v[j].lo + shift,
                        hi: scale * v[j].hi + shift,
                    };
                    AxisBox::Product(v)
                }
            })
            .collect();
        Realization {
            dim: self.dim,
            boxes,
        }
    }

    /// All corner coordinates of nonempty boxes.
    pub fn endpoints(&self) -> impl Iterator<Item = Rational> + '_ {
        self.boxes
            .iter()
            .filter_map(|b| b.intervals())
            .flatten()
            .flat_map(|c| [c.lo, c.hi])
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Membership {
    Closed,
    Interior,
}

/// Sample points for one axis: every endpoint, `samples_per_gap` evenly
/// spaced points inside each gap, and one point beyond each end.
fn axis_candidates(endpoints: &mut Vec<Rational>, samples_per_gap: usize) -> Vec<Rational> {
    endpoints.sort_unstable();
    endpoints.dedup();
    if endpoints.is_empty() {
        return vec![Rational::ZERO];
    }
    let mut out = Vec::with_capacity(endpoints.len() * (samples_per_gap + 1) + 2);
    out.push(endpoints[0] - Rational::ONE);
    for (k, &v) in endpoints.iter().enumerate() {
        out.push(v);
        if let Some(&next) = endpoints.get(k + 1) {
            let steps = Rational::integer(samples_per_gap as i64 + 1);
            for t in 1..=samples_per_gap {
                out.push(v + (next - v) * Rational::integer(t as i64) / steps);
            }
        }
    }
    out.push(*endpoints.last().unwrap() + Rational::ONE);
    out
}

fn grid_code(r: &Realization, membership: Membership, samples_per_gap: usize) -> Code {
    let n = r.n();
    // per axis: for each candidate coordinate, the boxes whose factor contains it
    let axis_masks: Vec<Vec<u16>> = (0..r.dim)
        .map(|j| {
            let intervals = r.axis_intervals(j);
            let mut ends: Vec<Rational> = intervals
                .iter()
                .filter_map(Interval::as_closed)
                .flat_map(|c| [c.lo, c.hi])
                .collect();
            axis_candidates(&mut ends, samples_per_gap)
                .into_iter()
                .map(|p| {
                    let mut mask = 0u16;
                    for (i, iv) in intervals.iter().enumerate() {
                        if let Interval::Closed(c) = iv {
                            let inside = match membership {
                                Membership::Closed => c.contains(p),
                                Membership::Interior => c.interior_contains(p),
                            };
                            if inside {
                                mask |= 1 << i;
                            }
                        }
                    }
                    mask
                })
                .collect()
        })
        .collect();

    let mut seen = vec![false; 1usize << n];
    seen[0] = true;
    let all = if n >= 16 { u16::MAX } else { (1u16 << n) - 1 };
    visit_grid(&axis_masks, 0, all, &mut seen);
    let words = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(bits, _)| Codeword::from_bits(bits as u16));
    Code::new(n, words).expect("universe validated by Realization")
}

// depth-first walk over the candidate grid, carrying the running pattern
fn visit_grid(axis_masks: &[Vec<u16>], axis: usize, running: u16, seen: &mut [bool]) {
    if running == 0 {
        // every point below has the empty pattern, already recorded
        return;
    }
    match axis_masks.get(axis) {
        None => seen[running as usize] = true,
        Some(masks) => {
            for &m in masks {
                visit_grid(axis_masks, axis + 1, running & m, seen);
            }
        }
    }
}

/// `code(U)` for closed boxes, by exhaustive evaluation on the endpoint grid.
pub fn code_of_realization(r: &Realization) -> Code {
    grid_code(r, Membership::Closed, 1)
}

/// As [`code_of_realization`], sampling `samples_per_gap` points inside each
/// gap between consecutive endpoints instead of just the midpoint.
pub fn code_of_realization_refined(r: &Realization, samples_per_gap: usize) -> Code {
    grid_code(r, Membership::Closed, samples_per_gap.max(1))
}

/// The code realized by the interiors of the boxes. Degenerate and empty
/// boxes have empty interior.
pub fn code_of_interiors(r: &Realization) -> Code {
    grid_code(r, Membership::Interior, 1)
}

/// Splits a realization into its `dim` coordinate projections.
pub fn axis_decompose(r: &Realization) -> Vec<Realization> {
    (0..r.dim)
        .map(|j| Realization {
            dim: 1,
            boxes: r
                .boxes
                .iter()
                .map(|b| AxisBox::from_intervals([b.axis(j)]))
                .collect(),
        })
        .collect()
}

/// Box `i` of the result is the Cartesian product of box `i` of every part.
/// Parts of any dimension are accepted; dimensions add up.
pub fn product_realization(parts: &[Realization]) -> Result<Realization> {
    let first = parts.first().ok_or(Error::EmptyRealization)?;
    let n = first.n();
    if let Some(p) = parts.iter().find(|p| p.n() != n) {
        return Err(Error::BoxCountMismatch {
            left: n,
            right: p.n(),
        });
    }
    let dim = parts.iter().map(|p| p.dim).sum();
    let boxes = (0..n)
        .map(|i| {
            let mut factors = Vec::with_capacity(dim);
            for p in parts {
                match &p.boxes[i] {
                    AxisBox::Empty => return AxisBox::Empty,
                    AxisBox::Product(v) => factors.extend_from_slice(v),
                }
            }
            AxisBox::Product(factors)
        })
        .collect();
    Realization::new(dim, boxes)
}

// ---- JSON form: {"dim": 2, "boxes": [{"intervals": [["0","1"],["1/2","3"]]}, "empty"]}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoxRepr {
    Tag(String),
    Product { intervals: Vec<[Rational; 2]> },
}

#[derive(Serialize, Deserialize)]
struct RealizationRepr {
    dim: usize,
    boxes: Vec<BoxRepr>,
}

impl Serialize for Realization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = RealizationRepr {
            dim: self.dim,
            boxes: self
                .boxes
                .iter()
                .map(|b| match b {
                    AxisBox::Empty => BoxRepr::Tag("empty".into()),
                    AxisBox::Product(v) => BoxRepr::Product {
                        intervals: v.iter().map(|c| [c.lo, c.hi]).collect(),
                    },
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Realization {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RealizationRepr::deserialize(deserializer)?;
        let mut boxes = Vec::with_capacity(repr.boxes.len());
        for (index, b) in repr.boxes.into_iter().enumerate() {
            boxes.push(match b {
                BoxRepr::Tag(t) if t == "empty" => AxisBox::Empty,
                BoxRepr::Tag(t) => {
                    return Err(D::Error::custom(format!(
                        "boxes[{index}]: expected \"empty\" or an object, got {t:?}"
                    )))
                }
                BoxRepr::Product { intervals } => {
                    let mut v = Vec::with_capacity(intervals.len());
                    for [lo, hi] in intervals {
                        v.push(
                            ClosedInterval::new(lo, hi)
                                .map_err(|e| D::Error::custom(format!("boxes[{index}]: {e}")))?,
                        );
                    }
                    AxisBox::Product(v)
                }
            });
        }
        Realization::new(repr.dim, boxes).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(n: usize, s: &str) -> Code {
        Code::parse_text(s, Some(n)).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn rational_text() {
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::integer(3));
        assert_eq!("-2/4".parse::<Rational>().unwrap(), q(-1, 2));
        assert_eq!(q(6, -4).to_string(), "-3/2");
        assert_eq!(q(8, 4).to_string(), "2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn single_box() {
        let r = Realization::from_integer_intervals(&[(0, 1)]).unwrap();
        assert_eq!(code_of_realization(&r), code(1, "1, ∅"));
        assert_eq!(code_of_interiors(&r), code(1, "1, ∅"));
    }

    #[test]
    fn overlapping_pair() {
        // regions: (-inf,0) ∅, [0,1) 1, [1,2] 12, (2,3] 2, (3,inf) ∅
        let r = Realization::from_integer_intervals(&[(0, 2), (1, 3)]).unwrap();
        assert_eq!(code_of_realization(&r), code(2, "1, 12, 2, ∅"));
    }

    #[test]
    fn degenerate_interior_is_empty() {
        let r = Realization::from_integer_intervals(&[(1, 1)]).unwrap();
        assert_eq!(code_of_realization(&r), code(1, "1, ∅"));
        assert_eq!(code_of_interiors(&r), code(1, "∅"));
    }

    #[test]
    fn touching_endpoints() {
        let r = Realization::from_integer_intervals(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(code_of_realization(&r), code(2, "1, 12, 2, ∅"));
        assert_eq!(code_of_interiors(&r), code(2, "1, 2, ∅"));
    }

    #[test]
    fn empty_boxes_contribute_nothing() {
        let r = Realization::new(
            2,
            vec![
                AxisBox::Empty,
                AxisBox::from_intervals([Interval::closed(0, 1).unwrap(), Interval::closed(0, 1).unwrap()]),
            ],
        )
        .unwrap();
        assert_eq!(code_of_realization(&r), code(2, "2, ∅"));
        let all_empty = Realization::new(3, vec![AxisBox::Empty, AxisBox::Empty]).unwrap();
        assert_eq!(code_of_realization(&all_empty), code(2, "∅"));
    }

    #[test]
    fn empty_factor_collapses() {
        let b = AxisBox::from_intervals([Interval::closed(0, 1).unwrap(), Interval::Empty]);
        assert!(b.is_empty());
    }

    #[test]
    fn validation() {
        assert_eq!(Realization::new(1, vec![]).unwrap_err(), Error::EmptyRealization);
        assert_eq!(
            Realization::new(0, vec![AxisBox::Empty]).unwrap_err(),
            Error::ZeroDimension
        );
        let b = AxisBox::from_intervals([Interval::closed(0, 1).unwrap()]);
        assert!(matches!(
            Realization::new(2, vec![b]),
            Err(Error::DimensionMismatch { index: 0, expected: 2, found: 1 })
        ));
        assert!(matches!(
            Interval::closed(2, 1),
            Err(Error::InvertedInterval { .. })
        ));
    }

    #[test]
    fn decompose_and_recombine() {
        let r = Realization::new(
            2,
            vec![
                AxisBox::from_intervals([Interval::closed(0, 1).unwrap(), Interval::closed(q(1, 2), 3).unwrap()]),
                AxisBox::from_intervals([Interval::closed(1, 4).unwrap(), Interval::closed(0, 0).unwrap()]),
            ],
        )
        .unwrap();
        let parts = axis_decompose(&r);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.dim() == 1 && p.n() == 2));
        assert_eq!(product_realization(&parts).unwrap(), r);

        let one_d = Realization::from_integer_intervals(&[(0, 1)]).unwrap();
        assert_eq!(axis_decompose(&one_d), vec![one_d.clone()]);
    }

    #[test]
    fn product_of_two_unit_intervals() {
        let a = Realization::from_integer_intervals(&[(0, 1)]).unwrap();
        let b = Realization::from_integer_intervals(&[(2, 3)]).unwrap();
        let p = product_realization(&[a, b]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(
            p.boxes()[0].intervals().unwrap(),
            &[
                ClosedInterval::new(0.into(), 1.into()).unwrap(),
                ClosedInterval::new(2.into(), 3.into()).unwrap()
            ]
        );
    }

    #[test]
    fn product_with_empty_factor() {
        let a = Realization::from_integer_intervals(&[(0, 1), (0, 2)]).unwrap();
        let b = Realization::from_intervals([Interval::closed(0, 1).unwrap(), Interval::Empty]).unwrap();
        let p = product_realization(&[a, b]).unwrap();
        assert!(!p.boxes()[0].is_empty());
        assert!(p.boxes()[1].is_empty());
    }

    #[test]
    fn product_count_mismatch() {
        let a = Realization::from_integer_intervals(&[(0, 1)]).unwrap();
        let b = Realization::from_integer_intervals(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            product_realization(&[a, b]).unwrap_err(),
            Error::BoxCountMismatch { left: 1, right: 2 }
        );
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"dim":2,"boxes":[{"intervals":[["0","1"],["1/2","3"]]},"empty",{"intervals":[[0,2],["-1/3",5]]}]}"#;
        let r: Realization = serde_json::from_str(text).unwrap();
        assert_eq!(r.n(), 3);
        let back = serde_json::to_string(&r).unwrap();
        assert_eq!(
            back,
            r#"{"dim":2,"boxes":[{"intervals":[["0","1"],["1/2","3"]]},"empty",{"intervals":[["0","2"],["-1/3","5"]]}]}"#
        );
        let bad = r#"{"dim":1,"boxes":[{"intervals":[["2","1"]]}]}"#;
        assert!(serde_json::from_str::<Realization>(bad).is_err());
        let wrong_dim = r#"{"dim":2,"boxes":[{"intervals":[["0","1"]]}]}"#;
        assert!(serde_json::from_str::<Realization>(wrong_dim).is_err());
    }
}
