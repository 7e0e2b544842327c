//! Relation tables: the normal forms of all disordered window pairs, with a
//! versioned text serialization.
//!
//! ```text
//! dyh-relation-table 1
//! fingerprint <sha256 hex of the canonical config>
//! config n=2;c=-2;normalization=normalized;M=4;N=4;W=4;p=6
//! rows <count>
//! <g> <g'> = <coeffs>:<word> | <coeffs>:<word> | …
//! ```
//!
//! `<coeffs>` lists the coefficients of `h⁰, h¹, …` as exact fractions joined
//! by `,`; `<word>` lists generators in normal order joined by spaces (empty
//! for the unit).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::checks::window_gens;
use crate::algebra::config::{AlgebraConfig, Normalization};
use crate::algebra::element::Element;
use crate::algebra::engine::Algebra;
use crate::algebra::generator::{is_normal, parse_gen, Gen, Monomial};
use crate::error::{Error, Result};
use crate::scalar::{HPoly, Rational};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "dyh-relation-table";

#[derive(Clone, Debug, PartialEq)]
pub struct RelationTable {
    pub config: AlgebraConfig,
    pub rules: BTreeMap<(Gen, Gen), Element>,
}

impl RelationTable {
    /// Derives every rule `g·g'` with `g ≻ g'` both in the window.
    pub fn derive(alg: &Algebra) -> Result<Self> {
        let gens = window_gens(alg.config());
        let mut rules = BTreeMap::new();
        for (x, &g) in gens.iter().enumerate() {
            for &g2 in &gens[..x] {
                rules.insert((g, g2), (*alg.rule(g, g2, alg.m())?).clone());
            }
        }
        Ok(RelationTable { config: alg.config().clone(), rules })
    }

    pub fn fingerprint(&self) -> String {
        self.config.fingerprint()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Number of rows expected for a configuration: one per unordered pair of
    /// distinct window generators.
    pub fn expected_rows(cfg: &AlgebraConfig) -> usize {
        let g = cfg.n * cfg.n * (cfg.w + cfg.w.min(cfg.p)) as usize;
        g * (g - 1) / 2
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "fingerprint {}", self.fingerprint());
        let _ = writeln!(s, "config {}", self.config.canonical());
        let _ = writeln!(s, "rows {}", self.rules.len());
        for ((g, g2), e) in &self.rules {
            let terms: Vec<String> = e
                .terms()
                .iter()
                .map(|(mono, c)| {
                    let cs: Vec<String> = c.coeffs().iter().map(Rational::to_string).collect();
                    let ws: Vec<String> = mono.iter().map(|x| format!("{x:?}")).collect();
                    format!("{}:{}", cs.join(","), ws.join(" "))
                })
                .collect();
            let _ = writeln!(s, "{g:?} {g2:?} = {}", terms.join(" | "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("relation table: {what}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file"))?;
        let version = header
            .strip_prefix(MAGIC)
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| bad("missing header"))?;
        if version != FORMAT_VERSION {
            return Err(Error::IncompatibleCache(format!("format version {version}, expected {FORMAT_VERSION}")));
        }
        let fp = lines.next().and_then(|l| l.strip_prefix("fingerprint ")).ok_or_else(|| bad("missing fingerprint"))?;
        let cfg_line = lines.next().and_then(|l| l.strip_prefix("config ")).ok_or_else(|| bad("missing config"))?;
        let config = parse_canonical(cfg_line)?;
        if config.fingerprint() != fp.trim() {
            return Err(Error::IncompatibleCache("fingerprint does not match the stored configuration".into()));
        }
        let rows: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("rows "))
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| bad("missing row count"))?;
        let m = config.m;
        let mut rules = BTreeMap::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once(" = ").ok_or_else(|| bad(line))?;
            let mut it = lhs.split_whitespace().map(parse_gen);
            let (g, g2) = match (it.next(), it.next(), it.next()) {
                (Some(Some(g)), Some(Some(g2)), None) if g > g2 => (g, g2),
                _ => return Err(bad(line)),
            };
            let mut e = Element::zero();
            for term in rhs.split(" | ").filter(|t| !t.trim().is_empty()) {
                let (cs, ws) = term.split_once(':').ok_or_else(|| bad(term))?;
                let coeffs = cs.split(',').map(str::parse::<Rational>).collect::<Result<Vec<_>>>()?;
                let mono: Monomial =
                    ws.split_whitespace().map(|w| parse_gen(w).ok_or_else(|| bad(w))).collect::<Result<_>>()?;
                if !is_normal(&mono) {
                    return Err(bad(term));
                }
                e.add_term(mono, &HPoly::from_coeffs(coeffs, m));
            }
            rules.insert((g, g2), e);
        }
        if rules.len() != rows {
            return Err(bad(&format!("{} rows, header says {rows}", rules.len())));
        }
        Ok(RelationTable { config, rules })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    /// Reads a cached table, accepting it only on an exact fingerprint match.
    pub fn read_matching(path: &Path, cfg: &AlgebraConfig) -> Result<Self> {
        let t = Self::read(path)?;
        if t.fingerprint() != cfg.fingerprint() {
            return Err(Error::IncompatibleCache(format!(
                "cached fingerprint {} differs from {}",
                t.fingerprint(),
                cfg.fingerprint()
            )));
        }
        Ok(t)
    }

    /// Conventional file name inside a cache directory.
    pub fn file_name(cfg: &AlgebraConfig) -> String {
        format!("relations-{}.txt", &cfg.fingerprint()[..16])
    }
}

fn parse_canonical(s: &str) -> Result<AlgebraConfig> {
    let mut f: BTreeMap<&str, &str> = BTreeMap::new();
    for part in s.split(';') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("config field {part:?}")))?;
        f.insert(k, v);
    }
    let get = |k: &str| f.get(k).copied().ok_or_else(|| Error::Parse(format!("config lacks {k}")));
    let num = |k: &str| -> Result<u64> { get(k)?.parse().map_err(|_| Error::Parse(format!("config field {k}"))) };
    AlgebraConfig::new(
        num("n")? as usize,
        get("c")?.parse()?,
        get("normalization")?.parse::<Normalization>()?,
        num("M")? as usize,
        num("N")? as u32,
        num("W")? as u32,
        num("p")? as u32,
    )
}

impl Algebra {
    /// Seeds the rule cache from a table derived for the same configuration.
    pub fn preload(&self, table: &RelationTable) -> Result<()> {
        if table.fingerprint() != self.config().fingerprint() {
            return Err(Error::IncompatibleCache("table belongs to another configuration".into()));
        }
        for (&(g, g2), e) in &table.rules {
            self.insert_rule(g, g2, e.clone());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AlgebraConfig {
        AlgebraConfig::critical(2, 2, 2, 2, 3)
    }

    #[test]
    fn text_round_trip() {
        let alg = Algebra::new(small()).unwrap();
        let t = RelationTable::derive(&alg).unwrap();
        let text = t.to_text();
        let back = RelationTable::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn row_count_is_the_number_of_window_pairs() {
        for cfg in [small(), AlgebraConfig { p: 1, ..small() }, AlgebraConfig { w: 3, ..small() }] {
            let t = RelationTable::derive(&Algebra::new(cfg.clone()).unwrap()).unwrap();
            // count unordered pairs of distinct (i, j, r) triples directly
            let top = cfg.w.min(cfg.p) as i64;
            let mut triples = Vec::new();
            for i in 1..=cfg.n {
                for j in 1..=cfg.n {
                    for r in -(cfg.w as i64)..top {
                        triples.push((i, j, r));
                    }
                }
            }
            let mut pairs = 0;
            for x in &triples {
                for y in &triples {
                    if x < y {
                        pairs += 1;
                    }
                }
            }
            assert_eq!(t.len(), pairs);
            assert_eq!(t.len(), RelationTable::expected_rows(&cfg));
        }
    }

    #[test]
    fn tampered_config_is_rejected() {
        let t = RelationTable::derive(&Algebra::new(small()).unwrap()).unwrap();
        let text = t.to_text().replace("c=-2", "c=0");
        assert!(matches!(RelationTable::from_text(&text), Err(Error::IncompatibleCache(_))));
        let other = small().with_c(Rational::zero());
        assert_ne!(other.fingerprint(), small().fingerprint());
    }

    #[test]
    fn preloaded_rules_reproduce_products() {
        let cfg = small();
        let t = RelationTable::derive(&Algebra::new(cfg.clone()).unwrap()).unwrap();
        let fresh = Algebra::new(cfg).unwrap();
        fresh.preload(&t).unwrap();
        let w = [Gen::new(2, 1, 1), Gen::new(1, 2, -1), Gen::new(1, 1, 0)];
        assert_eq!(fresh.nf(&w).unwrap(), Algebra::new(small()).unwrap().nf(&w).unwrap());
    }
}
