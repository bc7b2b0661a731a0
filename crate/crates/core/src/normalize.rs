//! Endpoint normalization for box realizations.
//!
//! Each axis is handled independently: endpoints are replaced by their
//! ranks, every interval is widened by a quarter on both sides so that no
//! point is both a left and a right endpoint, and the ranks are taken again.
//! The result has integer corners in `[1, 2n]` and its interiors realize the
//! same code as the closed boxes.

use serde::Serialize;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::geometry::{
    axis_decompose, code_of_interiors, code_of_realization, product_realization, ClosedInterval,
    Interval, Rational, Realization,
};

fn require_one_dim(r: &Realization) -> Result<()> {
    if r.dim() != 1 {
        return Err(Error::NotOneDimensional { dim: r.dim() });
    }
    Ok(())
}

fn map_intervals<F>(r: &Realization, mut f: F) -> Result<Realization>
where
    F: FnMut(&ClosedInterval) -> Result<Interval>,
{
    let mut out = Vec::with_capacity(r.n());
    for iv in r.axis_intervals(0) {
        out.push(match iv {
            Interval::Empty => Interval::Empty,
            Interval::Closed(c) => f(&c)?,
        });
    }
    Realization::from_intervals(out)
}

/// Replaces each endpoint by one plus the number of endpoints strictly below
/// it, counted over the multiset of all endpoints. Equal endpoints share a
/// rank and every rank lies in `[1, 2n]`.
pub fn sort_endpoints(r: &Realization) -> Result<Realization> {
    require_one_dim(r)?;
    let mut all: Vec<Rational> = r.endpoints().collect();
    all.sort_unstable();
    let rank = |v: Rational| Rational::integer(all.partition_point(|&x| x < v) as i64 + 1);
    map_intervals(r, |c| Interval::closed(rank(c.lo()), rank(c.hi())))
}

fn require_integer(v: Rational) -> Result<()> {
    if !v.is_integer() {
        return Err(Error::NonIntegerEndpoint {
            value: v.to_string(),
        });
    }
    Ok(())
}

/// `[a, b] -> [a - 1/4, b + 1/4]`. Endpoints must be integers.
pub fn quarter_extend(r: &Realization) -> Result<Realization> {
    require_one_dim(r)?;
    map_intervals(r, |c| {
        require_integer(c.lo())?;
        require_integer(c.hi())?;
        Interval::closed(c.lo() - Rational::QUARTER, c.hi() + Rational::QUARTER)
    })
}

/// `[a, b] -> [a + 1/4, b - 1/4]`, or empty when `a == b`. Endpoints must be
/// integers. Used on the open side: `(a, b)` and `(a + 1/4, b - 1/4)` have the
/// same interior code when endpoints are integer ranks.
fn quarter_shrink(r: &Realization) -> Result<Realization> {
    require_one_dim(r)?;
    map_intervals(r, |c| {
        require_integer(c.lo())?;
        require_integer(c.hi())?;
        if c.lo() == c.hi() {
            Ok(Interval::Empty)
        } else {
            Interval::closed(c.lo() + Rational::QUARTER, c.hi() - Rational::QUARTER)
        }
    })
}

fn per_axis<F>(r: &Realization, f: F) -> Realization
where
    F: Fn(&Realization) -> Result<Realization>,
{
    let parts: Vec<Realization> = axis_decompose(r)
        .iter()
        .map(|axis| f(axis).expect("axis pipeline on a decomposed 1-d realization"))
        .collect();
    product_realization(&parts).expect("parts share the box count")
}

/// Integer corners in `[1, 2n]`, same closed code, interiors realizing that
/// code too.
pub fn normalize_realization(r: &Realization) -> Realization {
    per_axis(r, |axis| {
        let ranked = sort_endpoints(axis)?;
        let extended = quarter_extend(&ranked)?;
        sort_endpoints(&extended)
    })
}

/// Treats `r`'s boxes as open and returns closed boxes with integer corners
/// realizing the same code.
pub fn open_to_closed(r: &Realization) -> Realization {
    let out = per_axis(r, |axis| {
        let ranked = sort_endpoints(axis)?;
        let shrunk = quarter_shrink(&ranked)?;
        sort_endpoints(&shrunk)
    });
    assert_eq!(
        code_of_realization(&out),
        code_of_interiors(r),
        "open_to_closed changed the code"
    );
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub closed_code_before: Code,
    pub closed_code_after: Code,
    pub open_code_after: Code,
    pub closed_code_preserved: bool,
    pub interiors_realize_code: bool,
    pub integer_corners_in_range: bool,
}

/// Normalizes and checks the result against the grid oracle.
pub fn normalize_with_report(r: &Realization) -> (Realization, NormalizationReport) {
    let out = normalize_realization(r);
    let before = code_of_realization(r);
    let after = code_of_realization(&out);
    let open = code_of_interiors(&out);
    let report = NormalizationReport {
        closed_code_preserved: before == after,
        interiors_realize_code: open == before,
        integer_corners_in_range: corners_in_range(&out, 2 * r.n() as i64),
        closed_code_before: before,
        closed_code_after: after,
        open_code_after: open,
    };
    (out, report)
}

/// Every corner coordinate is an integer in `[1, max]`.
pub fn corners_in_range(r: &Realization, max: i64) -> bool {
    r.endpoints()
        .all(|v| v.is_integer() && (1..=max).contains(&v.numer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AxisBox;

    fn ints(r: &Realization) -> Vec<Option<(Rational, Rational)>> {
        r.axis_intervals(0)
            .iter()
            .map(|i| i.as_closed().map(|c| (c.lo(), c.hi())))
            .collect()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<Option<(Rational, Rational)>> {
        v.iter()
            .map(|&(a, b)| Some((Rational::integer(a), Rational::integer(b))))
            .collect()
    }

    #[test]
    fn ranks_with_ties() {
        let r = Realization::from_integer_intervals(&[(10, 20), (20, 40)]).unwrap();
        let s = sort_endpoints(&r).unwrap();
        assert_eq!(ints(&s), pairs(&[(1, 2), (2, 4)]));
        assert_eq!(code_of_realization(&s), code_of_realization(&r));
    }

    #[test]
    fn ranks_identity_on_distinct_ranks() {
        let r = Realization::from_integer_intervals(&[(1, 3), (2, 4)]).unwrap();
        assert_eq!(sort_endpoints(&r).unwrap(), r);
    }

    #[test]
    fn degenerate_rank() {
        let r = Realization::from_integer_intervals(&[(5, 5)]).unwrap();
        assert_eq!(ints(&sort_endpoints(&r).unwrap()), pairs(&[(1, 1)]));
    }

    #[test]
    fn empty_passes_through() {
        let r = Realization::from_intervals([Interval::Empty, Interval::closed(3, 7).unwrap()]).unwrap();
        let s = sort_endpoints(&r).unwrap();
        assert_eq!(s.axis_intervals(0)[0], Interval::Empty);
        assert_eq!(ints(&s)[1], Some((1.into(), 2.into())));
    }

    #[test]
    fn quarter_extension_values() {
        let j = Realization::from_integer_intervals(&[(1, 2), (2, 4), (3, 5), (4, 6)]).unwrap();
        let e = quarter_extend(&j).unwrap();
        assert_eq!(
            ints(&e),
            vec![
                Some((q(3, 4), q(9, 4))),
                Some((q(7, 4), q(17, 4))),
                Some((q(11, 4), q(21, 4))),
                Some((q(15, 4), q(25, 4))),
            ]
        );
        assert_eq!(code_of_realization(&e), code_of_realization(&j));
    }

    #[test]
    fn quarter_extension_separates_touching() {
        let j = Realization::from_integer_intervals(&[(0, 1), (1, 2)]).unwrap();
        let e = quarter_extend(&j).unwrap();
        assert_eq!(ints(&e), vec![Some((q(-1, 4), q(5, 4))), Some((q(3, 4), q(9, 4)))]);
        let closed = code_of_realization(&e);
        assert_eq!(closed, Code::parse_text("1, 12, 2, ∅", Some(2)).unwrap());
        assert_eq!(code_of_interiors(&e), closed);
    }

    #[test]
    fn quarter_extension_rejects_fractions() {
        let r = Realization::from_intervals([Interval::closed(q(1, 2), 1).unwrap()]).unwrap();
        assert!(matches!(quarter_extend(&r), Err(Error::NonIntegerEndpoint { .. })));
    }

    #[test]
    fn one_dim_required() {
        let b = AxisBox::from_intervals([Interval::closed(0, 1).unwrap(), Interval::closed(0, 1).unwrap()]);
        let r = Realization::new(2, vec![b]).unwrap();
        assert_eq!(sort_endpoints(&r).unwrap_err(), Error::NotOneDimensional { dim: 2 });
    }

    #[test]
    fn normalize_touching_pair() {
        let r = Realization::from_integer_intervals(&[(0, 1), (1, 2)]).unwrap();
        let (out, report) = normalize_with_report(&r);
        assert_eq!(ints(&out), pairs(&[(1, 3), (2, 4)]));
        assert!(report.closed_code_preserved);
        assert!(report.interiors_realize_code);
        assert!(report.integer_corners_in_range);
    }

    #[test]
    fn normalize_is_code_idempotent() {
        let r = Realization::from_integer_intervals(&[(1, 3), (2, 4)]).unwrap();
        let once = normalize_realization(&r);
        let twice = normalize_realization(&once);
        assert_eq!(code_of_realization(&twice), code_of_realization(&r));
        assert_eq!(code_of_interiors(&twice), code_of_realization(&r));
    }

    #[test]
    fn normalize_two_dim_product() {
        let j = Realization::from_integer_intervals(&[(1, 2), (2, 4), (3, 5), (4, 6)]).unwrap();
        let r = product_realization(&[j.clone(), j]).unwrap();
        let (out, report) = normalize_with_report(&r);
        assert!(corners_in_range(&out, 8));
        assert!(report.closed_code_preserved && report.interiors_realize_code);
    }

    #[test]
    fn open_unit_interval() {
        let r = Realization::from_integer_intervals(&[(0, 1)]).unwrap();
        let c = open_to_closed(&r);
        assert_eq!(code_of_realization(&c), Code::parse_text("1", Some(1)).unwrap());
    }

    #[test]
    fn open_touching_intervals_do_not_meet() {
        let r = Realization::from_integer_intervals(&[(0, 1), (1, 2)]).unwrap();
        let c = open_to_closed(&r);
        assert_eq!(code_of_realization(&c), Code::parse_text("1, 2", Some(2)).unwrap());
    }

    #[test]
    fn open_overlapping_intervals() {
        let r = Realization::from_integer_intervals(&[(0, 2), (1, 3)]).unwrap();
        let c = open_to_closed(&r);
        assert_eq!(code_of_realization(&c), Code::parse_text("1, 12, 2", Some(2)).unwrap());
    }

    #[test]
    fn open_degenerate_becomes_empty() {
        let r = Realization::from_integer_intervals(&[(1, 1), (0, 2)]).unwrap();
        let c = open_to_closed(&r);
        assert!(c.boxes()[0].is_empty());
        assert_eq!(code_of_realization(&c), Code::parse_text("2", Some(2)).unwrap());
    }
}
