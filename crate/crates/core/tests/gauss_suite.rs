//! The Gauss suite through its public entry point.

use dyh_core::gauss::currents::Family;
use dyh_core::gauss::suite::{run, GaussParams};
use dyh_core::scalar::Rational;

fn params(n: usize, families: Vec<Family>) -> GaussParams {
    GaussParams { n, c: Rational::from_int(-(n as i64)), m: 2, order: 3, window: 2, families }
}

#[test]
fn decomposition_and_default_families_pass_at_n2() {
    let recs = run(&params(2, Family::ALL.to_vec())).unwrap();
    for sign in ["+", "-"] {
        for id in ["reconstruct", "uniqueness", "quasideterminants", "qdet-ratios"] {
            let want = format!("n2/{sign}/{id}");
            assert!(recs.iter().any(|r| r.check_id == want), "missing {want}");
        }
    }
    for r in &recs {
        assert!(r.passed(), "{}: {:?}", r.check_id, r.witness);
    }
}

#[test]
fn printed_kf_family_is_rejected() {
    let recs = run(&params(2, vec![Family::KfPrinted])).unwrap();
    let kf: Vec<_> = recs.iter().filter(|r| r.check_id.contains("kf-printed")).collect();
    assert!(!kf.is_empty());
    assert!(kf.iter().all(|r| !r.passed() && r.witness.is_some()));
}
