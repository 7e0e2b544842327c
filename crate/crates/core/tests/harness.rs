//! Report determinism and the cache through the harness entry points.

use dyh_core::algebra::{AlgebraConfig, Normalization};
use dyh_core::harness::{run, RunConfig};
use dyh_core::scalar::Rational;
use proptest::prelude::*;

fn cfg(seed: u64, tag: &str) -> RunConfig {
    RunConfig {
        algebra: AlgebraConfig::new(2, Rational::from_int(-2), Normalization::Normalized, 2, 2, 2, 3).unwrap(),
        suites: vec!["rmatrix".into(), "fnorm".into()],
        seed,
        cache_dir: std::env::temp_dir().join(format!("dyh-harness-it-{tag}-{}", std::process::id())),
        ..RunConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_depend_only_on_config_and_seed(seed in any::<u64>(), workers in 1usize..=3) {
        let a = run(&cfg(seed, "a")).unwrap();
        let b = run(&RunConfig { workers, ..cfg(seed, "a") }).unwrap();
        let strip = |r: &dyh_core::harness::Report| {
            let mut r = r.deterministic();
            r.config.workers = 0;
            r
        };
        prop_assert_eq!(strip(&a), strip(&b));
        prop_assert!(a.passed());
        let ids: Vec<_> = a.records.iter().map(|r| (&r.suite, &r.check_id)).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(ids, sorted);
    }
}

#[test]
fn every_suite_name_is_accepted() {
    for s in dyh_core::harness::SUITES {
        let c = RunConfig { suites: vec![s.to_string()], ..cfg(0, "names") };
        assert!(c.validate().is_ok(), "{s}");
    }
}
