//! Eigenvalues of `ℓ_k(u)` on a Wakimoto module with parameters
//! `κ⁺(u) = 1 - h Σ_{k≥0} a_k u^{-k-1}` (shared by all `i`) and
//! `κ_i⁻(u) = 1 + h Σ_{s≥1} b_{i,s} u^{s-1}`:
//! `Σ_{i_1<⋯<i_k} Λ_{i_1}(u) ⋯ Λ_{i_k}(u+(k-1)h)`, `Λ_i(u) = κ_i⁻(u) κ⁺(u+hn/2)^{-1}`.
//!
//! The parameters are finite lists of rationals; the Harish-Chandra image
//! specializes to the eigenvalue under `l_i^k ↦ a_k` (`k ≥ 0`) and
//! `l_i^{-s} ↦ b_{i,s}`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::scalar::{Expansion, HPoly, HRing, Laurent, Rational, Series, TruncatedSeries};

use super::diag::{DiagPoly, DiagVar};
use super::image::SplitFamily;

#[derive(Clone, Debug, PartialEq)]
pub struct WakimotoParams {
    pub n: usize,
    /// `a_0, a_1, …`
    pub kappa_plus: Vec<Rational>,
    /// `b_{i,1}, b_{i,2}, …` for `i = 1..=n`.
    pub kappa_minus: Vec<Vec<Rational>>,
}

impl WakimotoParams {
    /// `κ⁺ = κ_i⁻ = 1`.
    pub fn ones(n: usize) -> Self {
        WakimotoParams { n, kappa_plus: vec![], kappa_minus: vec![vec![]; n] }
    }

    /// Small random rationals: `plus_len` coefficients of `κ⁺` and
    /// `minus_len` of each `κ_i⁻`.
    pub fn random(n: usize, plus_len: usize, minus_len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = || Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let kappa_plus = (0..plus_len).map(|_| q()).collect();
        let kappa_minus = (0..n).map(|_| (0..minus_len).map(|_| q()).collect()).collect();
        WakimotoParams { n, kappa_plus, kappa_minus }
    }

    /// Parses lines `n = 2`, `kappa+ = a_0, a_1, …` and `kappa-<i> = b_1, …`;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut plus = None;
        let mut minus: Vec<(usize, Vec<Rational>)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: {raw}", no + 1));
            let (key, val) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (key, val) = (key.trim(), val.trim());
            let list = || -> Result<Vec<Rational>> {
                val.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| s.parse()).collect()
            };
            if key == "n" {
                n = Some(val.parse::<usize>().map_err(|_| bad("n"))?);
            } else if key == "kappa+" {
                plus = Some(list()?);
            } else if let Some(i) = key.strip_prefix("kappa-") {
                let i = i.parse::<usize>().map_err(|_| bad("series index"))?;
                if minus.iter().any(|(j, _)| *j == i) {
                    return Err(bad("repeated series"));
                }
                minus.push((i, list()?));
            } else {
                return Err(bad("unknown key"));
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
        let mut kappa_minus = vec![vec![]; n];
        for (i, b) in minus {
            if i == 0 || i > n {
                return Err(Error::Parse(format!("kappa-{i} with n = {n}")));
            }
            kappa_minus[i - 1] = b;
        }
        Ok(WakimotoParams { n, kappa_plus: plus.unwrap_or_default(), kappa_minus })
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
        let mut s = format!("n = {}\nkappa+ = {}\n", self.n, join(&self.kappa_plus));
        for (i, b) in self.kappa_minus.iter().enumerate() {
            let _ = writeln!(s, "kappa-{} = {}", i + 1, join(b));
        }
        s
    }

    /// The specialization `l_i^k ↦ a_k`, `l_i^{-s} ↦ b_{i,s}`.
    pub fn value(&self, v: DiagVar) -> Rational {
        let get = |xs: &[Rational], d: usize| xs.get(d).cloned().unwrap_or_default();
        if v.k >= 0 {
            get(&self.kappa_plus, v.k as usize)
        } else {
            get(&self.kappa_minus[v.i - 1], (-v.k - 1) as usize)
        }
    }

    pub fn kappa_plus_series(&self, m: usize, order: u32) -> TruncatedSeries {
        let h = HPoly::h(m);
        let terms = self.kappa_plus.iter().enumerate().map(|(k, a)| (k as u32 + 1, h.scale(&-a)));
        TruncatedSeries::scalar(Expansion::InvU, order, m, std::iter::once((0, HPoly::one(m))).chain(terms))
    }

    pub fn kappa_minus_series(&self, i: usize, m: usize, order: u32) -> TruncatedSeries {
        let h = HPoly::h(m);
        let terms = self.kappa_minus[i - 1].iter().enumerate().map(|(s, b)| (s as u32, h.scale(b)));
        TruncatedSeries::scalar(Expansion::U, order, m, std::iter::once((0, HPoly::one(m))).chain(terms))
    }

    /// `Λ_i(u + th)` for `t < k_max`, exact for exponents up to `hi`.
    pub fn family(&self, m: usize, k_max: usize, hi: i32) -> Result<SplitFamily<HPoly>> {
        let ring = HRing::new(m);
        let plus_order = (m * self.kappa_plus.len()) as u32;
        let minus_order = hi.max(0) as u32 + plus_order;
        let half_n = Rational::new(self.n as i64, 2);
        let kp = self.kappa_plus_series(m, plus_order + 1);
        let mut parts = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            let km = self.kappa_minus_series(i, m, minus_order + m as u32);
            let mut row = Vec::with_capacity(k_max);
            for t in 0..k_max {
                let t = Rational::from_int(t as i64);
                let minus = if t.is_zero() { km.truncated(minus_order) } else { km.shift(&t, &ring)? };
                row.push((minus, kp.shift(&(&t + &half_n), &ring)?.invert(&ring)?));
            }
            parts.push(row);
        }
        Ok(SplitFamily { parts, plus_order })
    }
}

/// The eigenvalue of `ℓ_k(u)` for exponents `lo..=hi`.
pub fn wakimoto_eigenvalues(params: &WakimotoParams, m: usize, k: usize, lo: i32, hi: i32) -> Result<Laurent<HPoly>> {
    params.family(m, k, hi)?.subset_sum(&HRing::new(m), k, lo, hi)
}

/// `l_i^k ↦` the parameters, coefficientwise.
pub fn specialize(image: &Laurent<DiagPoly>, params: &WakimotoParams, m: usize) -> Laurent<HPoly> {
    let ring = HRing::new(m);
    let mut out = Laurent::zero(image.lo, image.hi);
    for (e, c) in image.terms() {
        out.add_at(&ring, *e, &c.eval(|v| params.value(v), m));
    }
    out
}

/// Compares the eigenvalue with the specialization of a Harish-Chandra image
/// computed modulo `I_p`; `κ⁺` must therefore have fewer than `p` coefficients.
pub fn check_wakimoto_consistency(params: &WakimotoParams, image: &Laurent<DiagPoly>, k: usize, m: usize, p: u32) -> Result<Outcome> {
    if params.kappa_plus.len() > p as usize {
        return Err(Error::InvalidConfig(format!(
            "κ⁺ has {} coefficients but the image is known modulo l^k, k ≥ {p}",
            params.kappa_plus.len()
        )));
    }
    let ev = wakimoto_eigenvalues(params, m, k, image.lo, image.hi)?;
    let sp = specialize(image, params, m);
    let ring = HRing::new(m);
    Ok((image.lo..=image.hi)
        .find(|&e| ev.coeff(&ring, e) != sp.coeff(&ring, e))
        .map(|e| format!("u^{e}: eigenvalue {} vs specialization {}", ev.coeff(&ring, e), sp.coeff(&ring, e))))
}

/// Binomial coefficient as the expected eigenvalue for trivial parameters.
pub fn binomial_series(n: usize, k: usize, m: usize, lo: i32, hi: i32) -> Laurent<HPoly> {
    let mut out = Laurent::zero(lo, hi);
    out.add_at(&HRing::new(m), 0, &HPoly::constant(Rational::binom_int(n as i64, k as i64), m));
    out
}

/// `Λ_1(u)` as a plain ratio, for cross-checks.
pub fn lambda_ratio(params: &WakimotoParams, i: usize, m: usize, lo: i32, hi: i32) -> Result<Laurent<HPoly>> {
    let ring = HRing::new(m);
    let plus_order = (m * params.kappa_plus.len()) as u32;
    let kp = params.kappa_plus_series(m, plus_order).shift(&Rational::new(params.n as i64, 2), &ring)?;
    let km: Series<HPoly> = params.kappa_minus_series(i, m, hi.max(0) as u32 + plus_order);
    crate::center::ell::pair_series(&ring, &km, &kp.invert(&ring)?, lo, hi, plus_order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let p = WakimotoParams::random(3, 2, 3, 7);
        assert_eq!(WakimotoParams::parse(&p.to_text()).unwrap(), p);
        let q = WakimotoParams::parse("# trivial\nn = 2\nkappa+ = 1/2, -3\nkappa-2 = 4\n").unwrap();
        assert_eq!(q.kappa_plus, vec![Rational::new(1, 2), Rational::from_int(-3)]);
        assert_eq!(q.kappa_minus, vec![vec![], vec![Rational::from_int(4)]]);
        assert!(WakimotoParams::parse("n = 2\nkappa-3 = 1").is_err());
        assert!(WakimotoParams::parse("kappa+ = 1").is_err());
        assert!(WakimotoParams::parse("n = 2\nkappa+ = x").is_err());
    }

    #[test]
    fn trivial_parameters_give_binomials() {
        for k in 1..=3 {
            let ev = wakimoto_eigenvalues(&WakimotoParams::ones(3), 3, k, -3, 3).unwrap();
            assert_eq!(ev, binomial_series(3, k, 3, -3, 3));
        }
    }

    #[test]
    fn k1_is_the_sum_of_ratios() {
        let p = WakimotoParams::random(2, 2, 3, 1);
        let ring = HRing::new(3);
        let ev = wakimoto_eigenvalues(&p, 3, 1, -4, 2).unwrap();
        let sum = lambda_ratio(&p, 1, 3, -4, 2).unwrap().add(&lambda_ratio(&p, 2, 3, -4, 2).unwrap(), &ring);
        assert_eq!(ev, sum);
    }

    #[test]
    fn random_parameters_are_seeded() {
        assert_eq!(WakimotoParams::random(2, 2, 2, 5), WakimotoParams::random(2, 2, 2, 5));
        assert_ne!(WakimotoParams::random(2, 2, 2, 5), WakimotoParams::random(2, 2, 2, 6));
    }
}
