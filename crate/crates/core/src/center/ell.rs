//! The series `ℓ_k(u) = tr A_k L⁻_1(u_1)⋯L⁻_k(u_k) L⁺_k(u_k+hn/2)^{-1}⋯L⁺_1(u_1+hn/2)^{-1}`,
//! `u_a = u + (a-1)h`, at the critical level.
//!
//! `L⁻` is a series in `u` and `L⁺(u)^{-1}` one in `u^{-1}`, so every Laurent
//! coefficient of `ℓ_k` pairs minus degree `m + e` with plus degree `e`. Modulo
//! the cutoff ideal and `h^{M+1}` the plus side vanishes beyond degree `M·p`:
//! a monomial `h^a Π l^{(r_i)}` sits at degree `a + Σ r_i`, has at most `a`
//! factors, and every `r_i < p`. The pairing is therefore finite.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::gauss::decomp::{build_l, AlgMatrix, AlgSeries, Sign};
use crate::scalar::{Laurent, Rational, Series};
use crate::tensor::{antisymmetrizer, TensorOperator};

use super::minors::qdet;

/// Coefficients of `ℓ_k(u)` for exponents `lo..=hi`, exact modulo `h^{M+1}`
/// and the cutoff ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralSeries {
    pub k: usize,
    pub coeffs: Laurent<Element>,
}

impl CentralSeries {
    pub fn coeff(&self, m: i32) -> Element {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i32> {
        self.coeffs.lo..=self.coeffs.hi
    }

    /// First exponent where the two series differ.
    pub fn first_difference(&self, o: &CentralSeries) -> Option<i32> {
        let lo = self.coeffs.lo.max(o.coeffs.lo);
        let hi = self.coeffs.hi.min(o.coeffs.hi);
        (lo..=hi).find(|&m| self.coeffs.get(m) != o.coeffs.get(m))
    }

    /// `(exponent, coefficient)` pairs.
    pub fn pairs(&self) -> Vec<(i32, Element)> {
        self.range().map(|m| (m, self.coeff(m))).collect()
    }
}

/// Which expansion of the trace to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Literal partial trace against the antisymmetrizer.
    Trace,
    /// Sum over increasing `i_1 < ⋯ < i_k`, minus factors in the order of the sites.
    Increasing,
    /// Same basis vectors read in reverse.
    Decreasing,
}

/// Multi-index `(i_1, …, i_k)`, 0-based.
type Multi = Vec<usize>;

fn all_multis(n: usize, k: usize) -> Vec<Multi> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..n).map(move |i| [v.clone(), vec![i]].concat())).collect();
    }
    out
}

fn increasing_multis(n: usize, k: usize) -> Vec<Multi> {
    all_multis(n, k).into_iter().filter(|v| v.windows(2).all(|w| w[0] < w[1])).collect()
}

/// Shifted generator matrices shared by every route.
pub struct EllBuilder<'a> {
    alg: &'a Algebra,
    k_max: usize,
    lo: i32,
    hi: i32,
    plus_order: u32,
    lminus: AlgMatrix,
    lplus: AlgMatrix,
    /// `L⁻(u + ah)`, `a = 0..k_max`.
    minus: Vec<AlgMatrix>,
    /// `L⁺(u + ah + hn/2)^{-1}`.
    plus_inv: Vec<AlgMatrix>,
}

impl<'a> EllBuilder<'a> {
    /// Prepares `ℓ_1 … ℓ_{k_max}` for exponents `lo..=hi`.
    pub fn new(alg: &'a Algebra, k_max: usize, lo: i32, hi: i32) -> Result<Self> {
        let n = alg.n();
        if k_max == 0 || k_max > n || lo > hi {
            return Err(Error::InvalidConfig(format!("ℓ_k for k ≤ {k_max}, exponents {lo}..={hi}, n = {n}")));
        }
        let m = alg.m() as u32;
        let plus_order = m * alg.config().p;
        let minus_order = (hi.max(0) as u32) + plus_order;
        let lminus = build_l(alg, Sign::Minus, minus_order + m)?;
        let lplus = build_l(alg, Sign::Plus, plus_order + 1)?;
        let inv = lplus.invert_geometric(alg)?;
        for i in 0..n {
            for j in 0..n {
                if inv.get(i, j).get(plus_order + 1).is_some() {
                    return Err(Error::TruncationMismatch(format!(
                        "L⁺ inverse entry ({}, {}) survives past degree M·p = {plus_order}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let inv = inv.truncated(plus_order);
        let half_n = Rational::new(n as i64, 2);
        let mut minus = Vec::with_capacity(k_max);
        let mut plus_inv = Vec::with_capacity(k_max);
        for a in 0..k_max {
            let g = Rational::from_int(a as i64);
            let sm = if a == 0 { lminus.clone() } else { lminus.shift(&g, alg)? };
            minus.push(sm.truncated(minus_order));
            plus_inv.push(inv.shift(&(&g + &half_n), alg)?);
        }
        Ok(EllBuilder { alg, k_max, lo, hi, plus_order, lminus, lplus: lplus.truncated(plus_order), minus, plus_inv })
    }

    pub fn algebra(&self) -> &Algebra {
        self.alg
    }

    /// Degree beyond which `L⁺(u)^{-1}` vanishes modulo the cutoff.
    pub fn plus_order(&self) -> u32 {
        self.plus_order
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k_max {
            return Err(Error::InvalidConfig(format!("k = {k} outside 1..={}", self.k_max)));
        }
        Ok(())
    }

    /// `l⁻_{i_1 j_1}(u_1) ⋯ l⁻_{i_k j_k}(u_k)`.
    fn minus_word(&self, i: &[usize], j: &[usize]) -> Result<AlgSeries> {
        let mut t = self.minus[0].get(i[0], j[0]).clone();
        for a in 1..i.len() {
            t = t.mul(self.minus[a].get(i[a], j[a]), self.alg)?;
        }
        Ok(t)
    }

    /// `l̃⁺_{j_k i_k}(u_k + hn/2) ⋯ l̃⁺_{j_1 i_1}(u_1 + hn/2)`.
    fn plus_word(&self, j: &[usize], i: &[usize]) -> Result<AlgSeries> {
        let k = j.len();
        let mut t = self.plus_inv[k - 1].get(j[k - 1], i[k - 1]).clone();
        for a in (0..k - 1).rev() {
            t = t.mul(self.plus_inv[a].get(j[a], i[a]), self.alg)?;
        }
        Ok(t)
    }

    /// Laurent coefficients `lo..=hi` of `a(u) b(u)` for `a` in `u`, `b` in `u^{-1}`.
    pub fn pair(&self, a: &AlgSeries, b: &AlgSeries) -> Result<Laurent<Element>> {
        pair_series(self.alg, a, b, self.lo, self.hi, self.plus_order)
    }

    /// `Σ_t w_t · a_t(u) b_t(u)` over independent terms, summed in parallel.
    fn sum_pairs(&self, terms: Vec<(Rational, Multi, Multi, Multi)>, k: usize) -> Result<CentralSeries> {
        // memoize the words: the same (I, J) recurs across terms
        let mut keys_m: Vec<(Multi, Multi)> = terms.iter().map(|t| (t.1.clone(), t.2.clone())).collect();
        keys_m.sort();
        keys_m.dedup();
        let mut keys_p: Vec<(Multi, Multi)> = terms.iter().map(|t| (t.2.clone(), t.3.clone())).collect();
        keys_p.sort();
        keys_p.dedup();
        let mw: HashMap<(Multi, Multi), AlgSeries> = keys_m
            .into_par_iter()
            .map(|(i, j)| self.minus_word(&i, &j).map(|s| ((i, j), s)))
            .collect::<Result<_>>()?;
        let pw: HashMap<(Multi, Multi), AlgSeries> = keys_p
            .into_par_iter()
            .map(|(j, i)| self.plus_word(&j, &i).map(|s| ((j, i), s)))
            .collect::<Result<_>>()?;
        let parts: Vec<Laurent<Element>> = terms
            .into_par_iter()
            .map(|(w, i, j, kk)| {
                let l = self.pair(&mw[&(i, j.clone())], &pw[&(j, kk)])?;
                Ok(l.map(|e| e.scale_q(&w)))
            })
            .collect::<Result<_>>()?;
        let mut out = Laurent::zero(self.lo, self.hi);
        for p in parts {
            out = out.add(&p, self.alg);
        }
        Ok(CentralSeries { k, coeffs: out })
    }

    /// `ℓ_k(u)` by the chosen route.
    pub fn ell(&self, k: usize, route: Route) -> Result<CentralSeries> {
        self.check_k(k)?;
        let n = self.alg.n();
        let terms = match route {
            Route::Trace => {
                // tr A·M = Σ_{I,K} A[K,I] Σ_J Q[I,J] P[J,K]
                let a: TensorOperator<Rational> = antisymmetrizer(n, k);
                let mut terms = Vec::new();
                for ((row, col), w) in a.entries() {
                    let (kk, i) = (a.decode(*row), a.decode(*col));
                    for j in all_multis(n, k) {
                        terms.push((w.clone(), i.clone(), j, kk.clone()));
                    }
                }
                terms
            }
            Route::Increasing | Route::Decreasing => {
                let mut terms = Vec::new();
                for inc in increasing_multis(n, k) {
                    for (perm, sign) in crate::gauss::decomp::permutations(k) {
                        let s = Rational::from_int(sign as i64);
                        let si: Multi = perm.iter().map(|&x| inc[x]).collect();
                        for j in all_multis(n, k) {
                            if route == Route::Increasing {
                                terms.push((s.clone(), si.clone(), j, inc.clone()));
                            } else {
                                // l⁻_{i_σ(k) j_k}(u) ⋯ l⁻_{i_σ(1) j_1}(u+(k-1)h)
                                // l̃⁺_{j_1 i_1}(u+(k-1)h+hn/2) ⋯ l̃⁺_{j_k i_k}(u+hn/2)
                                let rev = |v: &Multi| -> Multi { v.iter().rev().copied().collect() };
                                terms.push((s.clone(), rev(&si), rev(&j), rev(&inc)));
                            }
                        }
                    }
                }
                terms
            }
        };
        self.sum_pairs(terms, k)
    }

    /// `qdet L⁻(u) · qdet L⁺(u + hn/2)^{-1}`.
    pub fn ell_n_by_qdet(&self) -> Result<CentralSeries> {
        let n = self.alg.n();
        let qm = qdet(self.alg, &self.lminus, Sign::Minus, &Rational::zero())?;
        let qp = qdet(self.alg, &self.lplus, Sign::Plus, &Rational::new(n as i64, 2))?;
        let l = self.pair(&qm, &qp.invert(self.alg)?)?;
        Ok(CentralSeries { k: n, coeffs: l })
    }

    /// `ℓ̄_k(u) = tr A_k L⁻_1(u_1) ⋯ L⁻_k(u_k)`, a series in `u`.
    pub fn ell_bar(&self, k: usize) -> Result<AlgSeries> {
        self.check_k(k)?;
        let n = self.alg.n();
        let a = antisymmetrizer(n, k);
        let parts: Vec<AlgSeries> = a
            .entries()
            .par_iter()
            .map(|((row, col), w)| {
                let s = self.minus_word(&a.decode(*col), &a.decode(*row))?;
                Ok(s.map(|e| e.scale_q(w)))
            })
            .collect::<Result<_>>()?;
        let mut out = Series::zero(self.minus[0].direction(), self.minus[k - 1].order());
        for p in parts {
            out = out.add(&p, self.alg)?;
        }
        Ok(out)
    }

    /// Both sides of `A_k L⁻_1(u_1)⋯L⁻_k(u_k) = L⁻_k(u_k)⋯L⁻_1(u_1) A_k` and of
    /// `A_k L̃⁺_k⋯L̃⁺_1 = L̃⁺_1⋯L̃⁺_k A_k` (shifted by `hn/2`), entry by entry;
    /// returns the first differing entry.
    pub fn fusion_commutes(&self, k: usize) -> Result<Option<String>> {
        self.check_k(k)?;
        let n = self.alg.n();
        let a = antisymmetrizer(n, k);
        let multis = all_multis(n, k);
        // entries of the products as operators on (ℂ^n)^{⊗k}
        let minus_fwd = |i: &Multi, j: &Multi| self.minus_word(i, j);
        let minus_bwd = |i: &Multi, j: &Multi| -> Result<AlgSeries> {
            let mut t = self.minus[k - 1].get(i[k - 1], j[k - 1]).clone();
            for b in (0..k - 1).rev() {
                t = t.mul(self.minus[b].get(i[b], j[b]), self.alg)?;
            }
            Ok(t)
        };
        let plus_bwd = |i: &Multi, j: &Multi| self.plus_word(i, j);
        let plus_fwd = |i: &Multi, j: &Multi| -> Result<AlgSeries> {
            let mut t = self.plus_inv[0].get(i[0], j[0]).clone();
            for b in 1..k {
                t = t.mul(self.plus_inv[b].get(i[b], j[b]), self.alg)?;
            }
            Ok(t)
        };
        type Entry<'b> = &'b (dyn Fn(&Multi, &Multi) -> Result<AlgSeries> + Sync);
        let cases: [(&str, Entry, Entry); 2] =
            [("minus", &minus_fwd, &minus_bwd), ("plus inverse", &plus_bwd, &plus_fwd)];
        for (name, left, right) in cases {
            let pairs: Vec<(&Multi, &Multi)> = multis.iter().flat_map(|i| multis.iter().map(move |j| (i, j))).collect();
            let bad: Vec<Option<String>> = pairs
                .into_par_iter()
                .map(|(i, j)| -> Result<Option<String>> {
                    // (A·X)_{ij} = Σ_c A[i,c] X[c,j];  (Y·A)_{ij} = Σ_c Y[i,c] A[c,j]
                    let mut lhs: Option<AlgSeries> = None;
                    let mut rhs: Option<AlgSeries> = None;
                    for c in &multis {
                        if let Some(w) = a.entry(i, c) {
                            let t = left(c, j)?.map(|e| e.scale_q(w));
                            lhs = Some(match lhs { None => t, Some(s) => s.add(&t, self.alg)? });
                        }
                        if let Some(w) = a.entry(c, j) {
                            let t = right(i, c)?.map(|e| e.scale_q(w));
                            rhs = Some(match rhs { None => t, Some(s) => s.add(&t, self.alg)? });
                        }
                    }
                    let ok = match (&lhs, &rhs) {
                        (None, None) => true,
                        (Some(x), None) | (None, Some(x)) => x.is_zero(),
                        (Some(x), Some(y)) => x.agrees_with(y, self.alg)?,
                    };
                    Ok((!ok).then(|| format!("{name} entry {i:?},{j:?}")))
                })
                .collect::<Result<_>>()?;
            if let Some(w) = bad.into_iter().flatten().next() {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

/// Laurent coefficients `lo..=hi` of `a(u) b(u)`, `a` a series in `u` and `b`
/// one in `u^{-1}` that vanishes beyond degree `plus_order`.
pub fn pair_series<R>(ring: &R, a: &Series<R::Elem>, b: &Series<R::Elem>, lo: i32, hi: i32, plus_order: u32) -> Result<Laurent<R::Elem>>
where
    R: crate::scalar::Ring,
{
    if b.order() < plus_order || (a.order() as i64) < hi as i64 + plus_order as i64 {
        return Err(Error::TruncationMismatch(format!(
            "pairing orders {} and {} cannot reach u^{hi} with plus degree {plus_order}",
            a.order(),
            b.order()
        )));
    }
    let mut out = Laurent::zero(lo, hi);
    let mut acc: BTreeMap<i32, R::Elem> = BTreeMap::new();
    for (e, y) in b.terms().range(..=plus_order) {
        for m in lo.max(-(*e as i32))..=hi {
            let d = (m + *e as i32) as u32;
            if let Some(x) = a.get(d) {
                let t = ring.mul(x, y)?;
                match acc.get_mut(&m) {
                    Some(s) => ring.add_assign(s, &t),
                    None => {
                        acc.insert(m, t);
                    }
                }
            }
        }
    }
    for (m, x) in acc {
        out.add_at(ring, m, &x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraConfig, Normalization};

    fn alg(n: usize, m: usize, p: u32, c: i64) -> Algebra {
        let cfg = AlgebraConfig::new(n, Rational::from_int(c), Normalization::Normalized, m, 4, 12, p).unwrap();
        Algebra::new(cfg).unwrap()
    }

    #[test]
    fn k1_is_the_plain_trace() {
        // ℓ_1(u) = Σ_{ij} l⁻_ij(u) l̃⁺_ji(u + hn/2)
        let a = alg(2, 2, 2, -2);
        let b = EllBuilder::new(&a, 1, -2, 2).unwrap();
        let mut want = Laurent::zero(-2, 2);
        for i in 0..2 {
            for j in 0..2 {
                want = want.add(&b.pair(b.minus[0].get(i, j), b.plus_inv[0].get(j, i)).unwrap(), &a);
            }
        }
        assert_eq!(b.ell(1, Route::Trace).unwrap().coeffs, want);
        // h⁰ part of the constant coefficient is n
        assert_eq!(b.ell(1, Route::Trace).unwrap().coeff(0).h_part(0), a.scalar(Rational::from_int(2)));
    }

    #[test]
    fn routes_agree_and_ell_n_matches_qdet_ratio() {
        let a = alg(2, 2, 2, -2);
        let b = EllBuilder::new(&a, 2, -3, 2).unwrap();
        for k in 1..=2 {
            let t = b.ell(k, Route::Trace).unwrap();
            assert!(t.coeffs.terms().len() > 3);
            assert_eq!(t.first_difference(&b.ell(k, Route::Increasing).unwrap()), None, "k={k} (9)");
            assert_eq!(t.first_difference(&b.ell(k, Route::Decreasing).unwrap()), None, "k={k} (10)");
        }
        let t = b.ell(2, Route::Trace).unwrap();
        assert_eq!(t.first_difference(&b.ell_n_by_qdet().unwrap()), None);
        assert_eq!(b.fusion_commutes(2).unwrap(), None);
    }

    #[test]
    fn ell_bar_is_the_minus_part_of_ell() {
        let a = alg(2, 2, 2, -2);
        let b = EllBuilder::new(&a, 2, 0, 2).unwrap();
        for k in 1..=2 {
            let l = b.ell(k, Route::Trace).unwrap();
            let bar = b.ell_bar(k).unwrap();
            for m in 0..=2 {
                let minus_only = l.coeff(m).filter(|w| w.iter().all(|g| g.is_minus()));
                assert_eq!(minus_only, bar.coeff(&a, m as u32), "k={k} u^{m}");
            }
        }
    }
}
