use num_rational::BigRational;
use odl_core::geometry::*;
use proptest::prelude::*;

fn rationals(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..=60).prop_flat_map(|q| (0..q, Just(q))), 1..max_len)
}

fn exact_set(space: Space, v: &[(i64, i64)]) -> PointSet {
    PointSet::exact(space, v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
}

fn as_rat(s: Scalar) -> BigRational {
    s.to_exact().unwrap()
}

proptest! {
    #[test]
    fn circle_gap_is_monotone(a in rationals(12), extra in rationals(12)) {
        let small = exact_set(Space::Circle, &a);
        let mut all = a.clone();
        all.extend(extra);
        let big = exact_set(Space::Circle, &all);
        prop_assert!(as_rat(circle_gap(&big).unwrap()) <= as_rat(circle_gap(&small).unwrap()));
    }

    #[test]
    fn interval_gap_is_monotone(a in rationals(12), extra in rationals(12)) {
        let small = exact_set(Space::Interval, &a);
        let mut all = a.clone();
        all.extend(extra);
        let big = exact_set(Space::Interval, &all);
        prop_assert!(as_rat(interval_gap(&big).unwrap()) <= as_rat(interval_gap(&small).unwrap()));
    }

    #[test]
    fn torus_estimate_is_monotone(a in prop::collection::vec(0.0f64..1.0, 2..20), extra in prop::collection::vec(0.0f64..1.0, 2..20)) {
        let a: Vec<f64> = a[..a.len() / 2 * 2].to_vec();
        let extra: Vec<f64> = extra[..extra.len() / 2 * 2].to_vec();
        let opts = GapOptions::with_resolution(32);
        let small = PointSet::float(Space::Torus(2), a.clone()).unwrap();
        let big = PointSet::float(Space::Torus(2), [a, extra].concat()).unwrap();
        prop_assert!(torus_gap_upper(&big, &opts).unwrap().estimate <= torus_gap_upper(&small, &opts).unwrap().estimate);
    }

    #[test]
    fn torus_grid_sandwich(a in prop::collection::vec(0.0f64..1.0, 2..24), g in prop::sample::select(vec![16usize, 32, 64])) {
        let a: Vec<f64> = a[..a.len() / 2 * 2].to_vec();
        let set = PointSet::float(Space::Torus(2), a).unwrap();
        let coarse = torus_gap_upper(&set, &GapOptions::with_resolution(g)).unwrap().estimate;
        let fine = torus_gap_upper(&set, &GapOptions::with_resolution(2 * g)).unwrap().estimate;
        // the fine grid contains the coarse one
        prop_assert!(coarse <= fine + 1e-15);
        prop_assert!(fine - coarse <= 1.0 / (2.0 * g as f64) + 1e-15);
    }

    #[test]
    fn semimetric_to_grid_approaches_circle_gap(a in rationals(10), g in 8i64..200) {
        let set = exact_set(Space::Circle, &a);
        let grid = PointSet::exact(Space::Circle, (0..g).map(|j| rat(j, g)).collect()).unwrap();
        let to_grid = semimetric_gap(&set, &grid).unwrap().to_f64();
        let gap = circle_gap(&set).unwrap().to_f64();
        prop_assert!(to_grid <= gap + 1e-15);
        prop_assert!(gap - to_grid <= 1.0 / g as f64);
    }

    /// With `Y = [0, 1]` inside `X = [0, 1 + l]` under the induced metric, the
    /// semimetric seen from `Y` equals the one seen from `X` (`M = 1`).
    #[test]
    fn restriction_constant_is_one(a in rationals(8), b in rationals(8), l in 1i64..5) {
        let y_gap = as_rat(semimetric_gap(&exact_set(Space::Interval, &a), &exact_set(Space::Interval, &b)).unwrap());
        // X rescaled onto the unit interval by 1 / (1 + l)
        let s = rat(1, 1 + l);
        let shrink = |v: &[(i64, i64)]| PointSet::exact(Space::Interval, v.iter().map(|&(p, q)| rat(p, q) * &s).collect()).unwrap();
        let x_gap = as_rat(semimetric_gap(&shrink(&a), &shrink(&b)).unwrap()) / &s;
        prop_assert!(y_gap <= x_gap.clone());
        prop_assert_eq!(y_gap, x_gap);
    }
}

#[test]
fn equally_spaced_points_have_gap_half_spacing() {
    for k in 1..=100 {
        let set = PointSet::exact(Space::Circle, (0..k).map(|j| rat(j, k)).collect()).unwrap();
        assert_eq!(as_rat(circle_gap(&set).unwrap()), rat(1, 2 * k));
    }
}
