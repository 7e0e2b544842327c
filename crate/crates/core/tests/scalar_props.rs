//! Ring axioms, inversion, shift composition and agreement of exact rational
//! functions with their series expansions.

use dyh_core::scalar::{Expansion, HPoly, HRing, RatFunc, Rational, Series, TruncatedSeries};
use proptest::prelude::*;

const M: usize = 3;
const ORDER: u32 = 6;

fn q() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(a, b)| Rational::new(a, b))
}

fn hpoly() -> impl Strategy<Value = HPoly> {
    prop::collection::vec(q(), M + 1).prop_map(|c| HPoly::from_coeffs(c, M))
}

fn series_of(dir: Expansion, order: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0..=order, hpoly()), 0..=5)
        .prop_map(move |t| Series::from_terms(&HRing::new(M), dir, order, t))
}

fn series(dir: Expansion) -> impl Strategy<Value = TruncatedSeries> {
    series_of(dir, ORDER)
}

fn unit_series(dir: Expansion) -> impl Strategy<Value = TruncatedSeries> {
    (series(dir), q().prop_filter("unit", |c| !c.is_zero())).prop_map(move |(s, c)| {
        let r = HRing::new(M);
        let mut s = s;
        let c0 = s.coeff(&r, 0);
        // force an invertible constant coefficient
        s.add_at(&r, 0, &HPoly::constant(c - c0.coeff(0), M));
        s
    })
}

fn dir() -> impl Strategy<Value = Expansion> {
    prop_oneof![Just(Expansion::InvU), Just(Expansion::U)]
}

/// Ratios of `(x + a + b h)` factors with at least as many in the
/// denominator, so the function is bounded at infinity.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    let lin = || (q(), q()).prop_map(|(a, b)| RatFunc::linear(a, b));
    (prop::collection::vec(lin(), 0..=2), prop::collection::vec(lin(), 2..=3), q()).prop_map(|(num, den, c)| {
        let mut f = RatFunc::from_upoly(dyh_core::scalar::UPoly::constant(c));
        for x in num {
            f = f.mul(&x);
        }
        for x in den {
            f = f.div(&x).unwrap();
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hpoly_ring_axioms(a in hpoly(), b in hpoly(), c in hpoly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn series_ring_axioms((a, b, c) in dir().prop_flat_map(|d| (series(d), series(d), series(d)))) {
        let r = HRing::new(M);
        prop_assert_eq!(a.mul(&b, &r).unwrap().mul(&c, &r).unwrap(), a.mul(&b.mul(&c, &r).unwrap(), &r).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c, &r).unwrap(), &r).unwrap(),
            a.mul(&b, &r).unwrap().add(&a.mul(&c, &r).unwrap(), &r).unwrap()
        );
    }

    #[test]
    fn inversion_is_two_sided(s in unit_series(Expansion::InvU), t in unit_series(Expansion::U)) {
        let r = HRing::new(M);
        for s in [s, t] {
            let i = s.invert(&r).unwrap();
            let one = Series::one(&r, s.direction(), ORDER);
            prop_assert_eq!(s.mul(&i, &r).unwrap(), one.clone());
            prop_assert_eq!(i.mul(&s, &r).unwrap(), one);
        }
    }

    #[test]
    fn shifts_compose(s in series(Expansion::InvU), t in series_of(Expansion::U, 3 * M as u32), g1 in q(), g2 in q()) {
        let r = HRing::new(M);
        let sum = &g1 + &g2;
        let lhs = s.shift(&g1, &r).unwrap().shift(&g2, &r).unwrap();
        prop_assert_eq!(lhs, s.shift(&sum, &r).unwrap());
        // each u-direction shift loses M orders; compare on the common range
        let lhs = t.shift(&g1, &r).unwrap().shift(&g2, &r).unwrap();
        prop_assert!(lhs.agrees_with(&t.shift(&sum, &r).unwrap(), &r).unwrap());
    }

    #[test]
    fn ratfunc_arithmetic_matches_series(f in ratfunc(), g in ratfunc()) {
        let r = HRing::new(M);
        let ex = |x: &RatFunc| x.expand_inv_u(ORDER, M).unwrap();
        prop_assert_eq!(ex(&f.add(&g)), ex(&f).add(&ex(&g), &r).unwrap());
        prop_assert_eq!(ex(&f.mul(&g)), ex(&f).mul(&ex(&g), &r).unwrap());
    }
}
