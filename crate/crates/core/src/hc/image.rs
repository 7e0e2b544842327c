//! The image formula `Σ_{i_1<⋯<i_k} λ_{i_1}(u) λ_{i_2}(u+h) ⋯ λ_{i_k}(u+(k-1)h)`
//! with
//! `λ_i(u) = l_i⁻(u) Π_{a<i} l_a⁺(u-ah+hn/2) / Π_{a≤i} l_a⁺(u-(a-1)h+hn/2)`.
//!
//! Every factor splits as a series in `u` times a series in `u^{-1}`; the
//! `u^{-1}` side vanishes beyond degree `M·p` (each power of `h` carries at
//! most `p` powers of `u^{-1}`), so Laurent coefficients are finite sums.

use rayon::prelude::*;

use crate::center::ell::pair_series;
use crate::error::{Error, Result};
use crate::scalar::{Expansion, HPoly, Laurent, Rational, Ring, Series};

use super::diag::{DiagPoly, DiagRing};

/// `f_i(u + th)` for `i = 1..=n`, `t = 0..k_max`, stored as `[i-1][t]` pairs
/// (series in `u`, series in `u^{-1}`).
pub struct SplitFamily<E> {
    pub parts: Vec<Vec<(Series<E>, Series<E>)>>,
    /// Degree beyond which every product of `u^{-1}` parts vanishes.
    pub plus_order: u32,
}

/// Increasing `k`-subsets of `0..n`.
pub fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            increasing_subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

impl<E: Clone + PartialEq + std::fmt::Debug + Send + Sync> SplitFamily<E> {
    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// `Σ_{i_1<⋯<i_k} f_{i_1}(u) f_{i_2}(u+h) ⋯ f_{i_k}(u+(k-1)h)` for
    /// exponents `lo..=hi`. Errors if a `u^{-1}` product survives past
    /// `plus_order`.
    pub fn subset_sum<R: Ring<Elem = E>>(&self, ring: &R, k: usize, lo: i32, hi: i32) -> Result<Laurent<E>> {
        let n = self.n();
        if k == 0 || k > n || self.parts.iter().any(|p| p.len() < k) {
            return Err(Error::InvalidConfig(format!("subset sum of size {k} over a family of {n}")));
        }
        let subsets = increasing_subsets(n, k);
        let parts: Vec<Laurent<E>> = subsets
            .par_iter()
            .map(|s| self.ordered_product(ring, s, lo, hi))
            .collect::<Result<_>>()?;
        let mut out = Laurent::zero(lo, hi);
        for p in parts {
            out = out.add(&p, ring);
        }
        Ok(out)
    }

    /// `f_{s_1}(u) f_{s_2}(u+h) ⋯` for 0-based indices `s`.
    pub fn ordered_product<R: Ring<Elem = E>>(&self, ring: &R, s: &[usize], lo: i32, hi: i32) -> Result<Laurent<E>> {
        let (mut a, mut b) = self.parts[s[0]][0].clone();
        for (t, &i) in s.iter().enumerate().skip(1) {
            let (x, y) = &self.parts[i][t];
            a = a.mul(x, ring)?;
            b = b.mul(y, ring)?;
        }
        if b.order() > self.plus_order && b.get(self.plus_order + 1).is_some() {
            return Err(Error::TruncationMismatch(format!(
                "u^{{-1}} part survives past degree {} for indices {s:?}",
                self.plus_order
            )));
        }
        pair_series(ring, &a, &b, lo, hi, self.plus_order)
    }
}

/// `l_i⁺(u) = 1 - h Σ_{k≥0} l_i^k u^{-k-1}` through `u^{-order}`.
pub fn plus_series(ring: &DiagRing, i: usize, order: u32) -> Result<Series<DiagPoly>> {
    let h = HPoly::h(ring.m);
    let mut terms = vec![(0, ring.one())];
    for k in 0..order.min(ring.p.max(0) as u32) {
        terms.push((k + 1, ring.var(i, k as i64)?.scale(&h.neg())));
    }
    Ok(Series::from_terms(ring, Expansion::InvU, order, terms))
}

/// `l_i⁻(u) = 1 + h Σ_{k<0} l_i^k u^{-k-1}` through `u^{order}`.
pub fn minus_series(ring: &DiagRing, i: usize, order: u32) -> Result<Series<DiagPoly>> {
    let h = HPoly::h(ring.m);
    let mut terms = vec![(0, ring.one())];
    for d in 0..order {
        terms.push((d, ring.var(i, -(d as i64) - 1)?.scale(&h)));
    }
    Ok(Series::from_terms(ring, Expansion::U, order, terms))
}

/// The `λ_i` family at truncation `(M, p)`, ready for exponents up to `hi`.
pub struct LambdaFamily {
    ring: DiagRing,
    family: SplitFamily<DiagPoly>,
}

impl LambdaFamily {
    pub fn new(ring: DiagRing, k_max: usize, hi: i32) -> Result<Self> {
        LambdaFamily::with_offset(ring, k_max, hi, Rational::new(ring.n as i64, 2))
    }

    /// The same family with `hn/2` replaced by `offset·h`; only `n/2` is
    /// correct, other offsets serve as controls.
    pub fn with_offset(ring: DiagRing, k_max: usize, hi: i32, offset: Rational) -> Result<Self> {
        let n = ring.n;
        let m = ring.m as u32;
        let plus_order = m * ring.p.max(0) as u32;
        let minus_order = hi.max(0) as u32 + plus_order;
        let lplus: Vec<_> = (1..=n).map(|i| plus_series(&ring, i, plus_order + 1)).collect::<Result<_>>()?;
        let lminus: Vec<_> = (1..=n).map(|i| minus_series(&ring, i, minus_order + m)).collect::<Result<_>>()?;
        // l_a⁺(u + γh)
        let at = |a: usize, g: Rational| lplus[a - 1].shift(&g, &ring);
        let mut parts = Vec::with_capacity(n);
        for i in 1..=n {
            let mut row = Vec::with_capacity(k_max);
            for t in 0..k_max {
                let t = Rational::from_int(t as i64);
                let minus = if t.is_zero() {
                    lminus[i - 1].truncated(minus_order)
                } else {
                    lminus[i - 1].shift(&t, &ring)?
                };
                let mut num = Series::one(&ring, Expansion::InvU, plus_order + 1);
                for a in 1..i {
                    num = num.mul(&at(a, &t - &Rational::from_int(a as i64) + &offset)?, &ring)?;
                }
                let mut den = Series::one(&ring, Expansion::InvU, plus_order + 1);
                for a in 1..=i {
                    den = den.mul(&at(a, &t - &Rational::from_int(a as i64 - 1) + &offset)?, &ring)?;
                }
                row.push((minus, num.mul(&den.invert(&ring)?, &ring)?));
            }
            parts.push(row);
        }
        Ok(LambdaFamily { ring, family: SplitFamily { parts, plus_order } })
    }

    pub fn ring(&self) -> &DiagRing {
        &self.ring
    }

    pub fn family(&self) -> &SplitFamily<DiagPoly> {
        &self.family
    }

    /// Laurent coefficients `lo..=hi` of `λ_i(u)`.
    pub fn lambda(&self, i: usize, lo: i32, hi: i32) -> Result<Laurent<DiagPoly>> {
        self.family.ordered_product(&self.ring, &[i - 1], lo, hi)
    }

    /// The image formula for `ℓ_k`.
    pub fn image(&self, k: usize, lo: i32, hi: i32) -> Result<Laurent<DiagPoly>> {
        self.family.subset_sum(&self.ring, k, lo, hi)
    }
}

/// `l_1⁺(u+(n-1)h) l_2⁺(u+(n-2)h) ⋯ l_n⁺(u)` through `u^{-order}`.
pub fn qdet_plus_image(ring: &DiagRing, order: u32) -> Result<Series<DiagPoly>> {
    let n = ring.n;
    let mut out = Series::one(ring, Expansion::InvU, order);
    for a in 1..=n {
        let s = plus_series(ring, a, order)?.shift(&Rational::from_int((n - a) as i64), ring)?;
        out = out.mul(&s, ring)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::HRing;

    #[test]
    fn subsets_are_increasing_and_counted() {
        assert_eq!(increasing_subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(increasing_subsets(5, 3).len(), 10);
    }

    #[test]
    fn lambda_1_is_a_plain_ratio() {
        // λ_1(u) = l_1⁻(u) / l_1⁺(u + hn/2)
        let r = DiagRing::new(2, 2, 2);
        let fam = LambdaFamily::new(r, 2, 2).unwrap();
        let po = fam.family().plus_order;
        let den = plus_series(&r, 1, po + 1).unwrap().shift(&Rational::one(), &r).unwrap().invert(&r).unwrap();
        let want = pair_series(&r, &minus_series(&r, 1, 2 + po).unwrap(), &den, -2, 2, po).unwrap();
        assert_eq!(fam.lambda(1, -2, 2).unwrap(), want);
    }

    #[test]
    fn constant_family_counts_subsets() {
        let ring = HRing::new(2);
        let one = Series::one(&ring, Expansion::U, 4);
        let inv = Series::one(&ring, Expansion::InvU, 4);
        let fam = SplitFamily { parts: vec![vec![(one.clone(), inv.clone()); 3]; 4], plus_order: 3 };
        for k in 1..=3 {
            let s = fam.subset_sum(&ring, k, -1, 1).unwrap();
            let want = HPoly::constant(Rational::binom_int(4, k as i64), 2);
            assert_eq!(s.coeff(&ring, 0), want);
            assert!(s.coeff(&ring, 1).is_zero() && s.coeff(&ring, -1).is_zero());
        }
    }
}
