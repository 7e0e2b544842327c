//! Rewriting-engine invariants on random inputs: strategy independence,
//! associativity, normalization independence and specialization of c.

use dyh_core::algebra::checks::{c_specialization, confluence, normalization_independence};
use dyh_core::algebra::generator::is_normal;
use dyh_core::algebra::{Algebra, AlgebraConfig, Element, Gen, Normalization};
use dyh_core::scalar::{HPoly, Rational};
use proptest::prelude::*;

/// No cutoff or window is reached by the words below.
fn free(n: usize, c: i64) -> Algebra {
    Algebra::new(AlgebraConfig::new(n, Rational::from_int(c), Normalization::Normalized, 2, 2, 6, 12).unwrap()).unwrap()
}

fn gen(n: usize) -> impl Strategy<Value = Gen> {
    (1..=n, 1..=n, -2i64..=2).prop_map(|(i, j, r)| Gen::new(i, j, r))
}

fn element(a: &Algebra, terms: &[(i64, Vec<Gen>)]) -> Element {
    let mut out = Element::zero();
    for (c, w) in terms {
        let mut x = a.scalar(Rational::from_int(*c));
        for &g in w {
            x = a.mul(&x, &a.gen(g.i(), g.j(), g.r()).unwrap()).unwrap();
        }
        out = out.add(&x);
    }
    out
}

fn terms(n: usize) -> impl Strategy<Value = Vec<(i64, Vec<Gen>)>> {
    prop::collection::vec((-2i64..=2, prop::collection::vec(gen(n), 0..=2)), 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_forms_do_not_depend_on_the_strategy(seed in any::<u64>(), c in -3i64..=1) {
        prop_assert_eq!(confluence(&free(2, c), 3, 4, seed).unwrap(), None);
    }

    #[test]
    fn products_are_associative(x in terms(2), y in terms(2), z in terms(2)) {
        let a = free(2, -2);
        let (x, y, z) = (element(&a, &x), element(&a, &y), element(&a, &z));
        let lhs = a.mul(&a.mul(&x, &y).unwrap(), &z).unwrap();
        let rhs = a.mul(&x, &a.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_words_are_fixed(w in prop::collection::vec(gen(3), 0..=4)) {
        let a = free(3, -3);
        let mut sorted = w.clone();
        sorted.sort();
        prop_assert!(is_normal(&sorted));
        let want = Element::monomial(sorted.iter().copied().collect(), HPoly::one(2));
        prop_assert_eq!(a.nf(&sorted).unwrap(), want);
    }

    #[test]
    fn same_sign_rules_ignore_the_normalization(n in 2usize..=3, c in -3i64..=3) {
        let cfg = AlgebraConfig::new(n, Rational::from_int(c), Normalization::Unnormalized, 2, 2, 2, 2).unwrap();
        prop_assert_eq!(normalization_independence(&cfg).unwrap(), None);
    }

    #[test]
    fn mixed_rules_specialize_to_the_critical_level(g in gen(2), h in gen(2)) {
        prop_assume!(g.is_plus() && h.is_minus());
        let cfg = AlgebraConfig::new(2, Rational::new(1, 2), Normalization::Normalized, 2, 2, 3, 3).unwrap();
        prop_assert_eq!(c_specialization(&cfg, &Rational::from_int(-2), &[(g, h)]).unwrap(), None);
    }
}
