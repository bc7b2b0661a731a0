//! Seeded random realizations with small rational endpoints, so that ties,
//! degenerate intervals and empty boxes occur often.

use rand::Rng;

use crate::geometry::{AxisBox, ClosedInterval, Interval, Rational, Realization};

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-8..=8), rng.gen_range(1..=4))
}

pub fn closed_interval<R: Rng>(rng: &mut R) -> ClosedInterval {
    let a = rational(rng);
    if rng.gen_bool(0.1) {
        return ClosedInterval::new(a, a).unwrap();
    }
    let b = rational(rng);
    ClosedInterval::new(a.min(b), a.max(b)).unwrap()
}

pub fn interval<R: Rng>(rng: &mut R) -> Interval {
    if rng.gen_bool(0.1) {
        Interval::Empty
    } else {
        Interval::Closed(closed_interval(rng))
    }
}

pub fn interval_realization<R: Rng>(rng: &mut R, n: usize) -> Realization {
    Realization::from_intervals((0..n).map(|_| interval(rng))).unwrap()
}

pub fn box_realization<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Realization {
    let boxes = (0..n)
        .map(|_| {
            if rng.gen_bool(0.1) {
                AxisBox::Empty
            } else {
                AxisBox::Product((0..dim).map(|_| closed_interval(rng)).collect())
            }
        })
        .collect();
    Realization::new(dim, boxes).unwrap()
}
