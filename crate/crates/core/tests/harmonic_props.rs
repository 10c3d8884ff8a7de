use num_bigint::BigInt;
use num_integer::Integer;
use odl_core::harmonic::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn brute_force_matches_formula(m in prop::collection::vec(-10i64..=10, 1..=3), q in 1u64..=60) {
        prop_assume!(m.iter().any(|&x| x != 0));
        let brute = ramanujan_bruteforce_exact(&m, q).unwrap();
        prop_assert_eq!(BigInt::from(brute), ramanujan_formula(&m, q).unwrap());
        prop_assert!(BigInt::from(brute.abs()) <= ramanujan_bound(&m));
    }

    #[test]
    fn jordan_count_is_multiplicative(a in 1u64..=50, b in 1u64..=50, n in 1u32..=3) {
        prop_assume!(a.gcd(&b) == 1);
        prop_assert_eq!(jordan_count(n, a * b), jordan_count(n, a) * jordan_count(n, b));
    }

    #[test]
    fn bump_factorizes(m1 in -20i64..=20, m2 in -20i64..=20, eps in 0.1f64..0.5) {
        let g = build_bump(eps, 2, 1024).unwrap();
        let joint = g.fourier_coeff(&[m1, m2]).unwrap();
        let product = g.fourier_coeff_1d(m1).unwrap() * g.fourier_coeff_1d(m2).unwrap();
        prop_assert!((joint - product).norm() < 1e-8);
    }
}

#[test]
fn jordan_ratio_stays_positive() {
    for n in 1..=3 {
        let (_, c0) = jordan_ratio_min(n, 10_000);
        assert!(c0 > 0.0);
    }
}
