use odl_core::circle_dyn::*;
use odl_core::geometry::*;
use proptest::prelude::*;

fn rationals(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..=40).prop_flat_map(|q| (0..q, Just(q))), 1..max_len)
}

proptest! {
    #[test]
    fn rotation_orbits_have_at_most_three_gaps(alpha in 0.0f64..1.0, n in 1u64..2000) {
        let t = Rotation::new(Scalar::float(alpha).unwrap());
        let origin = PointSet::float(Space::Circle, vec![0.0]).unwrap();
        let orbit = orbit_union(&t, &origin, n).unwrap();
        prop_assert!(distinct_gap_lengths(&orbit, 1e-9) <= 3);
    }

    #[test]
    fn dilation_is_a_semigroup_action(v in rationals(10), a in 1u64..30, b in 1u64..30) {
        let set = PointSet::circle_rationals(&v).unwrap();
        let twice = dilate(&dilate(&set, a).unwrap(), b).unwrap();
        let once = dilate(&set, a * b).unwrap();
        prop_assert!(twice.same_set(&once, 0.0));
    }

    #[test]
    fn profiles_never_increase(alpha in 0.0f64..1.0, v in prop::collection::vec(0.0f64..1.0, 1..6)) {
        let t = Rotation::new(Scalar::float(alpha).unwrap());
        let set = PointSet::float(Space::Circle, v).unwrap();
        let p = qd_profile(&t, &set, &Schedule::geometric(3000, Schedule::DEFAULT_RATIO).unwrap()).unwrap();
        prop_assert!(p.is_non_increasing());
    }

    #[test]
    fn exact_profiles_never_increase(p in 1i64..50, q in 51i64..200, v in rationals(4)) {
        let t = Rotation::new(Scalar::Exact(rat(p, q)));
        let set = PointSet::circle_rationals(&v).unwrap();
        let prof = qd_profile(&t, &set, &Schedule::geometric(150, Schedule::DEFAULT_RATIO).unwrap()).unwrap();
        prop_assert!(prof.is_non_increasing());
    }
}
