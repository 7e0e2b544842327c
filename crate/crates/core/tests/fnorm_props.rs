//! The normalizing series is the unique solution of its functional equation.

use dyh_core::fnorm::{check_fnorm, residual, solve_f};
use dyh_core::scalar::Rational;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perturbing_a_coefficient_breaks_the_equation_one_order_later(
        n in 1usize..=4,
        big_k in 2usize..=9,
        k in 1usize..=8,
        eps in (1i64..=5, 1i64..=5, any::<bool>()),
    ) {
        prop_assume!(k <= big_k);
        let mut f = solve_f(n, big_k).unwrap();
        prop_assert!(residual(&f).iter().all(Rational::is_zero));
        let (a, b, neg) = eps;
        let e = Rational::new(if neg { -a } else { a }, b);
        f.coeffs[k] = &f.coeffs[k] + &e;
        let r = residual(&f);
        prop_assert!(r[..=k].iter().all(Rational::is_zero));
        prop_assert!(!r[k + 1].is_zero());
    }

    #[test]
    fn suite_passes_for_every_small_rank(n in 1usize..=4, big_k in 1usize..=8) {
        for rec in check_fnorm(n, big_k) {
            prop_assert!(rec.passed(), "{} {:?}", rec.check_id, rec.witness);
        }
    }
}
