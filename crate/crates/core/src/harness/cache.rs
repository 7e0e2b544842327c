//! Relation-table cache: one file per configuration fingerprint.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraConfig, RelationTable};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    /// Read from disk with a matching fingerprint.
    Hit,
    /// No cached file; derived and written.
    Derived,
    /// A cached file existed but was unusable; derived and rewritten.
    Rederived,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEvent {
    pub fingerprint: String,
    pub path: PathBuf,
    pub status: CacheStatus,
    pub rows: usize,
}

/// Path of the cached table for `cfg` inside `dir`.
pub fn table_path(dir: &Path, cfg: &AlgebraConfig) -> PathBuf {
    dir.join(RelationTable::file_name(cfg))
}

/// Reads the cached table for `cfg` or derives it. An unreadable or
/// mismatching file is re-derived and overwritten; the returned warning says
/// why.
pub fn load_or_derive(dir: &Path, cfg: &AlgebraConfig) -> Result<(RelationTable, CacheEvent, Option<String>)> {
    let path = table_path(dir, cfg);
    let mut warning = None;
    let mut status = CacheStatus::Derived;
    if path.exists() {
        match RelationTable::read_matching(&path, cfg) {
            Ok(t) => {
                let ev = CacheEvent { fingerprint: t.fingerprint(), path, status: CacheStatus::Hit, rows: t.len() };
                return Ok((t, ev, None));
            }
            Err(e) => {
                warning = Some(format!("cached table {} rejected ({e}); re-deriving", path.display()));
                status = CacheStatus::Rederived;
            }
        }
    }
    let t = RelationTable::derive(&Algebra::new(cfg.clone())?)?;
    t.write(&path)?;
    let ev = CacheEvent { fingerprint: t.fingerprint(), path, status, rows: t.len() };
    Ok((t, ev, warning))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("dyh-cache-test-{name}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn derive_then_hit_then_recover_from_corruption() {
        let d = dir("cycle");
        let cfg = AlgebraConfig::critical(2, 2, 2, 2, 3);
        let (t, ev, w) = load_or_derive(&d, &cfg).unwrap();
        assert_eq!((ev.status, w), (CacheStatus::Derived, None));
        let (t2, ev2, _) = load_or_derive(&d, &cfg).unwrap();
        assert_eq!(ev2.status, CacheStatus::Hit);
        assert_eq!(t2, t);
        // tamper with the stored fingerprint
        let text = std::fs::read_to_string(&ev.path).unwrap();
        let bad = text.replacen(&format!("fingerprint {}", t.fingerprint()), &format!("fingerprint {}", "0".repeat(64)), 1);
        std::fs::write(&ev.path, bad).unwrap();
        let (t3, ev3, w3) = load_or_derive(&d, &cfg).unwrap();
        assert_eq!(ev3.status, CacheStatus::Rederived);
        assert!(w3.unwrap().contains("re-deriving"));
        assert_eq!(t3, t);
        assert_eq!(load_or_derive(&d, &cfg).unwrap().1.status, CacheStatus::Hit);
        let _ = std::fs::remove_dir_all(&d);
    }

    #[test]
    fn changing_c_misses_the_cache() {
        let cfg = AlgebraConfig::critical(2, 2, 2, 2, 3);
        let other = cfg.with_c(crate::scalar::Rational::zero());
        assert_ne!(cfg.fingerprint(), other.fingerprint());
        let d = dir("miss");
        load_or_derive(&d, &cfg).unwrap();
        assert_eq!(load_or_derive(&d, &other).unwrap().1.status, CacheStatus::Derived);
        let _ = std::fs::remove_dir_all(&d);
    }
}
