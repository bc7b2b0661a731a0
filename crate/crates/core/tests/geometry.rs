mod common;

use boxcode::code::simplicial_complex;
use boxcode::geometry::{
    axis_decompose, code_of_realization_refined, product_realization, AxisBox,
};
use boxcode::normalize::{
    corners_in_range, normalize_realization, open_to_closed, quarter_extend, sort_endpoints,
};
use boxcode::{code_of_interiors, code_of_realization, intersection_product, Rational, Realization};
use common::{box_realization, interval_realization};
use proptest::prelude::*;

proptest! {
    #[test]
    fn refinement_does_not_change_code(seed in any::<u64>(), n in 1usize..=5, dim in 1usize..=3) {
        let r = box_realization(seed, n, dim);
        prop_assert_eq!(code_of_realization_refined(&r, 3), code_of_realization(&r));
    }

    #[test]
    fn interiors_lie_in_complex(seed in any::<u64>(), n in 1usize..=5, dim in 1usize..=3) {
        let r = box_realization(seed, n, dim);
        let complex = simplicial_complex(&code_of_realization(&r));
        prop_assert!(code_of_interiors(&r).is_subset_of(&complex));
    }

    #[test]
    fn affine_maps_preserve_codes(
        seed in any::<u64>(), n in 1usize..=5, dim in 1usize..=3,
        p in 1i64..=9, q in 1i64..=4, s in -8i64..=8,
    ) {
        let r = box_realization(seed, n, dim);
        let moved = r.affine_axis(dim - 1, Rational::new(p, q), Rational::integer(s));
        prop_assert_eq!(code_of_realization(&moved), code_of_realization(&r));
        prop_assert_eq!(code_of_interiors(&moved), code_of_interiors(&r));
    }

    #[test]
    fn product_theorem_any_dimensions(seed in any::<u64>(), n in 1usize..=5, d1 in 1usize..=2, d2 in 1usize..=2) {
        let u = box_realization(seed, n, d1);
        let v = box_realization(seed ^ 0x9e37_79b9, n, d2);
        let w = product_realization(&[u.clone(), v.clone()])?;
        prop_assert_eq!(w.dim(), d1 + d2);
        prop_assert_eq!(
            code_of_realization(&w),
            intersection_product(&code_of_realization(&u), &code_of_realization(&v))?
        );
    }

    #[test]
    fn decomposition_round_trips(seed in any::<u64>(), n in 1usize..=5, dim in 1usize..=3) {
        let r = box_realization(seed, n, dim);
        prop_assume!(r.boxes().iter().all(|b| !b.is_empty()));
        prop_assert_eq!(product_realization(&axis_decompose(&r))?, r);
    }

    #[test]
    fn ranking_preserves_code(seed in any::<u64>(), n in 1usize..=6) {
        let r = interval_realization(seed, n);
        let s = sort_endpoints(&r)?;
        prop_assert_eq!(code_of_realization(&s), code_of_realization(&r));
        prop_assert!(corners_in_range(&s, 2 * n as i64));
    }

    #[test]
    fn quarter_extension_separates_endpoints(seed in any::<u64>(), n in 1usize..=6) {
        let s = sort_endpoints(&interval_realization(seed, n))?;
        let e = quarter_extend(&s)?;
        prop_assert_eq!(code_of_realization(&e), code_of_realization(&s));
        let ivs: Vec<_> = e.axis_intervals(0).into_iter().filter_map(|i| i.as_closed().copied()).collect();
        for a in &ivs {
            for b in &ivs {
                prop_assert_ne!(a.lo(), b.hi());
            }
        }
        prop_assert_eq!(code_of_interiors(&e), code_of_realization(&s));
    }

    #[test]
    fn normalization_is_sound(seed in any::<u64>(), n in 1usize..=5, dim in 1usize..=3) {
        let r = box_realization(seed, n, dim);
        let out = normalize_realization(&r);
        prop_assert!(corners_in_range(&out, 2 * n as i64));
        prop_assert_eq!(code_of_realization(&out), code_of_realization(&r));
        prop_assert_eq!(code_of_interiors(&out), code_of_realization(&r));
    }

    #[test]
    fn open_boxes_close_up(seed in any::<u64>(), n in 1usize..=5, dim in 1usize..=3) {
        let r = box_realization(seed, n, dim);
        let out = open_to_closed(&r);
        prop_assert_eq!(code_of_realization(&out), code_of_interiors(&r));
        prop_assert!(out.endpoints().all(|v| v.is_integer()));
    }

    #[test]
    fn realization_json_round_trips(seed in any::<u64>(), n in 1usize..=4, dim in 1usize..=3) {
        let r = box_realization(seed, n, dim);
        let json = serde_json::to_string(&r).unwrap();
        let back: Realization = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, r);
    }
}

#[test]
fn empty_factor_collapses_box() {
    let u = Realization::from_intervals([boxcode::Interval::Empty, boxcode::Interval::closed(0, 1).unwrap()]).unwrap();
    let v = Realization::from_integer_intervals(&[(0, 1), (0, 1)]).unwrap();
    let w = product_realization(&[u, v]).unwrap();
    assert_eq!(w.boxes()[0], AxisBox::Empty);
    assert!(!w.boxes()[1].is_empty());
}
