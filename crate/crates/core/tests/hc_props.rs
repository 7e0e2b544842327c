//! The subset-sum image formula is symmetric when the shifts act trivially,
//! and the Harish-Chandra suite passes at reduced size.

use dyh_core::hc::suite::{run, HcParams};
use dyh_core::hc::SplitFamily;
use dyh_core::scalar::{Expansion, HPoly, HRing, Rational, Series};
use proptest::prelude::*;

const M: usize = 2;

fn q() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=2).prop_map(|(a, b)| Rational::new(a, b))
}

/// Plus parts have degree ≤ 2, so products of four are exact through
/// `PLUS`; minus parts reach `u^{3 + PLUS}` as the pairing needs.
const PLUS: u32 = 8;

fn part(dir: Expansion, deg: u32, order: u32) -> impl Strategy<Value = Series<HPoly>> {
    prop::collection::vec((0u32..=deg, q(), 0usize..=M), 0..=3).prop_map(move |t| {
        let r = HRing::new(M);
        let mut s = Series::one(&r, dir, order);
        for (d, c, k) in t {
            s.add_at(&r, d, &HPoly::monomial(c, k, M));
        }
        s
    })
}

/// A family whose members ignore the `u + th` shift, so ordered products
/// commute and the subset sum is an elementary symmetric function.
fn family(n: usize) -> impl Strategy<Value = Vec<(Series<HPoly>, Series<HPoly>)>> {
    prop::collection::vec((part(Expansion::U, 3, 3 + PLUS), part(Expansion::InvU, 2, PLUS)), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn subset_sum_is_invariant_under_relabeling(
        parts in family(4),
        perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        k in 1usize..=4,
    ) {
        let r = HRing::new(M);
        let build = |order: &[usize]| SplitFamily {
            parts: order.iter().map(|&i| vec![parts[i].clone(); 4]).collect(),
            plus_order: PLUS,
        };
        let id: Vec<usize> = (0..4).collect();
        let a = build(&id).subset_sum(&r, k, -3, 3).unwrap();
        let b = build(&perm).subset_sum(&r, k, -3, 3).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn reduced_hc_suite_passes() {
    let recs = run(&HcParams { n: 2, m: 2, order: 2, p: 2, k_max: 2, mult: 1 }).unwrap();
    assert!(recs.iter().any(|r| r.check_id == "n2/ell2/image"));
    for r in &recs {
        assert!(r.passed(), "{}: {:?}", r.check_id, r.witness);
    }
}
