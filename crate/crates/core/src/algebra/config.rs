use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Relations with the Yang matrix `R̄(u) = I + (h/u)P`.
    Unnormalized,
    /// Relations with `R(u) = f(u)R̄(u)`.
    Normalized,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Unnormalized => "unnormalized",
            Normalization::Normalized => "normalized",
        })
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unnormalized" | "rbar" => Ok(Normalization::Unnormalized),
            "normalized" | "r" => Ok(Normalization::Normalized),
            _ => Err(Error::Parse(format!("unknown normalization {s:?}"))),
        }
    }
}

/// Everything that determines the relation table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub n: usize,
    /// Central charge, fixed to a rational value.
    #[serde(with = "rational_text")]
    pub c: Rational,
    pub normalization: Normalization,
    /// `h`-order: coefficients of `h^k`, `k > M`, vanish.
    pub m: usize,
    /// Spectral-parameter order of generating series.
    pub order: u32,
    /// Mode window: relation tables cover `-W ≤ r < W`; corrections may reach
    /// minus modes down to `-(2W + M)`.
    pub w: u32,
    /// Cutoff: monomials containing a plus mode `r ≥ p` are dropped.
    pub p: u32,
}

impl AlgebraConfig {
    pub fn new(n: usize, c: Rational, normalization: Normalization, m: usize, order: u32, w: u32, p: u32) -> Result<Self> {
        let cfg = AlgebraConfig { n, c, normalization, m, order, w, p };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The critical level `c = -n` with the normalized R-matrix.
    pub fn critical(n: usize, m: usize, order: u32, w: u32, p: u32) -> Self {
        AlgebraConfig::new(n, Rational::from_int(-(n as i64)), Normalization::Normalized, m, order, w, p)
            .expect("valid parameters")
    }

    /// Parameters for series computations through `u^{∓order}` with a shift
    /// margin of `M` on the minus side: the window reaches every minus mode
    /// such products create, and the cutoff lies above every plus mode.
    pub fn for_series(n: usize, c: Rational, normalization: Normalization, m: usize, order: u32) -> Result<Self> {
        AlgebraConfig::new(n, c, normalization, m, order, order + m as u32 + 1, order + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > 9 {
            return Err(Error::InvalidConfig(format!("n = {} must lie in 2..=9", self.n)));
        }
        if self.m < 1 || self.order < 1 || self.w < 1 || self.p < 1 {
            return Err(Error::InvalidConfig("M, N, W and p must be at least 1".into()));
        }
        Ok(())
    }

    /// Deepest minus mode any correction may use.
    pub fn minus_limit(&self) -> i64 {
        2 * self.w as i64 + self.m as i64
    }

    /// Canonical text of all fields, the input to the fingerprint.
    pub fn canonical(&self) -> String {
        format!(
            "n={};c={};normalization={};M={};N={};W={};p={}",
            self.n, self.c, self.normalization, self.m, self.order, self.w, self.p
        )
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn with_c(&self, c: Rational) -> Self {
        AlgebraConfig { c, ..self.clone() }
    }

    pub fn with_p(&self, p: u32) -> Self {
        AlgebraConfig { p, ..self.clone() }
    }

    pub fn with_normalization(&self, normalization: Normalization) -> Self {
        AlgebraConfig { normalization, ..self.clone() }
    }
}

pub(crate) mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_depends_on_every_field() {
        let base = AlgebraConfig::critical(2, 4, 4, 4, 6);
        let variants = [
            AlgebraConfig { n: 3, ..base.clone() },
            base.with_c(Rational::zero()),
            base.with_normalization(Normalization::Unnormalized),
            AlgebraConfig { m: 3, ..base.clone() },
            AlgebraConfig { order: 5, ..base.clone() },
            AlgebraConfig { w: 5, ..base.clone() },
            base.with_p(7),
        ];
        for v in variants {
            assert_ne!(v.fingerprint(), base.fingerprint(), "{v:?}");
        }
        assert_eq!(base.fingerprint(), base.clone().fingerprint());
        assert_eq!(base.fingerprint().len(), 64);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(AlgebraConfig::new(1, Rational::zero(), Normalization::Normalized, 2, 2, 2, 2).is_err());
        assert!(AlgebraConfig::new(2, Rational::zero(), Normalization::Normalized, 0, 2, 2, 2).is_err());
    }
}
