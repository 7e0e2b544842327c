//! Projector and permutation identities of the tensor operators, and agreement
//! of the exact and series R̄-matrices.

use dyh_core::scalar::{QRing, RatFunc, Rational, SeriesRing, Expansion};
use dyh_core::tensor::{antisymmetrizer, build_operator, r_series, OperatorKind, TensorOperator};
use proptest::prelude::*;

/// `(n, k, transpositions)` with `1 ≤ a < b ≤ k`.
fn shape_and_word() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize)>)> {
    (1usize..=3, 2usize..=3).prop_flat_map(|(n, k)| {
        let t = (1..k).prop_flat_map(move |a| (Just(a), a + 1..=k));
        (Just(n), Just(k), prop::collection::vec(t, 0..=4))
    })
}

fn q() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| Rational::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn antisymmetrizer_is_a_signed_projector((n, k, word) in shape_and_word()) {
        let r = QRing;
        let a = antisymmetrizer(n, k);
        prop_assert_eq!(a.compose(&a, &r).unwrap(), a.clone());
        let mut sigma = TensorOperator::identity(&r, n, k);
        for &(x, y) in &word {
            sigma = sigma.compose(&TensorOperator::permutation(&r, n, k, x, y).unwrap(), &r).unwrap();
        }
        let sgn = Rational::from_int(if word.len() % 2 == 0 { 1 } else { -1 });
        let signed = a.scale_q(&sgn, &r);
        prop_assert_eq!(sigma.compose(&a, &r).unwrap(), signed.clone());
        prop_assert_eq!(a.compose(&sigma, &r).unwrap(), signed);
    }

    #[test]
    fn flip_and_its_transpose((n, k, word) in shape_and_word()) {
        let r = QRing;
        let (a, b) = word.first().copied().unwrap_or((1, 2));
        let p = TensorOperator::permutation(&r, n, k, a, b).unwrap();
        let id = TensorOperator::identity(&r, n, k);
        prop_assert_eq!(p.compose(&p, &r).unwrap(), id.clone());
        let q = p.partial_transpose(a, &r).unwrap();
        prop_assert_eq!(q.compose(&q, &r).unwrap(), q.scale_q(&Rational::from_int(n as i64), &r));
        prop_assert_eq!(id.trace(&r), Rational::from_int((n as i64).pow(k as u32)));
        let traced = id.partial_trace(&[a], &r).unwrap();
        prop_assert_eq!(traced, TensorOperator::identity(&r, n, k - 1).scale_q(&Rational::from_int(n as i64), &r));
    }

    #[test]
    fn exact_and_series_r_matrices_agree(n in 1usize..=3, gamma in q(), m in 1usize..=3) {
        // R̄(u + γh) on factors (1, 2) of two
        let order = 5;
        let exact = build_operator(&OperatorKind::RBar(RatFunc::linear(Rational::zero(), gamma.clone())), 1, 2, n, 2).unwrap();
        let expanded = exact.map_to(|f| f.expand_inv_u(order, m).unwrap());
        let series = r_series(n, 2, 1, 2, &gamma, None, order, m).unwrap();
        let ring = SeriesRing::new(Expansion::InvU, order, m);
        prop_assert!(expanded.sub(&series, &ring).unwrap().is_zero());
    }
}
