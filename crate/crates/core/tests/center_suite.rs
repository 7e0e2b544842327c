//! The center suite at reduced size.

use dyh_core::center::{suite, CenterParams};
use dyh_core::scalar::Rational;

#[test]
fn reduced_center_suite_passes_with_its_control() {
    let p = CenterParams {
        lo: -1,
        hi: 1,
        probe: 1,
        qdet_order: 2,
        qdet_levels: vec![Rational::from_int(-2), Rational::zero()],
        ..CenterParams::new(2, 2, 4)
    };
    let recs = suite::run(&p).unwrap();
    for id in ["n2/ell1/non-critical-control", "n2/ell2/qdet-identity", "n2/vacuum/invariance", "n2/ell2/cutoff-stability"] {
        assert!(recs.iter().any(|r| r.check_id == id), "missing {id}");
    }
    for r in &recs {
        assert!(r.passed(), "{}: {:?}", r.check_id, r.witness);
    }
}
