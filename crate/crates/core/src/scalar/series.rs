//! Truncated one-variable series over any coefficient ring.
//!
//! A [`Series`] is a power series in either `u^{-1}` (the expansion of the
//! plus currents) or `u` (the minus currents), known exactly up to `|exp| =
//! order`. Exponents are stored by absolute value, so the two directions share
//! all the convolution code. [`Laurent`] holds a two-sided window.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{HPoly, HRing, Rational, Ring};

/// Which way a series is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expansion {
    /// Powers `u^0, u^{-1}, u^{-2}, …`
    InvU,
    /// Powers `u^0, u^1, u^2, …`
    U,
}

impl Expansion {
    /// The exponent carried by stored degree `d`.
    pub fn exponent(self, d: u32) -> i32 {
        match self {
            Expansion::InvU => -(d as i32),
            Expansion::U => d as i32,
        }
    }

    /// Stored degree for an exponent, if the exponent lies on this side.
    pub fn degree(self, exp: i32) -> Option<u32> {
        match self {
            Expansion::InvU if exp <= 0 => Some((-exp) as u32),
            Expansion::U if exp >= 0 => Some(exp as u32),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<E> {
    dir: Expansion,
    order: u32,
    coeffs: BTreeMap<u32, E>,
}

/// Series with ℚ[h]/(h^{M+1}) coefficients.
pub type TruncatedSeries = Series<HPoly>;

impl<E: Clone> Series<E> {
    pub fn zero(dir: Expansion, order: u32) -> Self {
        Series { dir, order, coeffs: BTreeMap::new() }
    }

    pub fn direction(&self) -> Expansion {
        self.dir
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nonzero coefficients keyed by degree `|exponent|`.
    pub fn terms(&self) -> &BTreeMap<u32, E> {
        &self.coeffs
    }

    pub fn get(&self, d: u32) -> Option<&E> {
        self.coeffs.get(&d)
    }

    /// Coefficient at exponent `exp` (`None` when it is zero or off-side).
    pub fn at_exponent(&self, exp: i32) -> Option<&E> {
        self.dir.degree(exp).and_then(|d| self.coeffs.get(&d))
    }

    /// Lowers the order, dropping coefficients beyond it.
    pub fn truncated(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Series {
            dir: self.dir,
            order,
            coeffs: self.coeffs.range(..=order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn map<F, R: Clone>(&self, mut f: F) -> Series<R>
    where
        F: FnMut(&E) -> R,
    {
        Series {
            dir: self.dir,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Series<E> {
    pub fn from_terms<R: Ring<Elem = E>>(
        ring: &R,
        dir: Expansion,
        order: u32,
        terms: impl IntoIterator<Item = (u32, E)>,
    ) -> Self {
        let mut s = Series::zero(dir, order);
        for (d, e) in terms {
            s.add_at(ring, d, &e);
        }
        s
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, e: E, dir: Expansion, order: u32) -> Self {
        Self::from_terms(ring, dir, order, [(0, e)])
    }

    pub fn one<R: Ring<Elem = E>>(ring: &R, dir: Expansion, order: u32) -> Self {
        Self::constant(ring, ring.one(), dir, order)
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, d: u32) -> E {
        self.coeffs.get(&d).cloned().unwrap_or_else(|| ring.zero())
    }

    /// Adds `e` to the coefficient of degree `d` (ignored beyond the order).
    pub fn add_at<R: Ring<Elem = E>>(&mut self, ring: &R, d: u32, e: &E) {
        if d > self.order || ring.is_zero(e) {
            return;
        }
        match self.coeffs.get_mut(&d) {
            Some(c) => {
                ring.add_assign(c, e);
                if ring.is_zero(c) {
                    self.coeffs.remove(&d);
                }
            }
            None => {
                self.coeffs.insert(d, e.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_dir(&self, o: &Self) -> Result<()> {
        if self.dir != o.dir {
            return Err(Error::DirectionMismatch);
        }
        Ok(())
    }

    /// Sum, exact up to the smaller of the two orders.
    pub fn add<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.check_dir(o)?;
        let mut out = self.truncated(self.order.min(o.order));
        for (d, e) in &o.coeffs {
            out.add_at(ring, *d, e);
        }
        Ok(out)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map(|e| ring.neg(e))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.add(&o.neg(ring), ring)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, s: &HPoly, ring: &R) -> Self {
        let mut out = Series::zero(self.dir, self.order);
        for (d, e) in &self.coeffs {
            out.add_at(ring, *d, &ring.scale(e, s));
        }
        out
    }

    /// Left multiplication of every coefficient by a ring element.
    pub fn lmul<R: Ring<Elem = E>>(&self, a: &E, ring: &R) -> Result<Self> {
        let mut out = Series::zero(self.dir, self.order);
        for (d, e) in &self.coeffs {
            out.add_at(ring, *d, &ring.mul(a, e)?);
        }
        Ok(out)
    }

    /// Cauchy product (left factor's coefficients on the left).
    pub fn mul<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.check_dir(o)?;
        let order = self.order.min(o.order);
        let mut out = Series::zero(self.dir, order);
        for (i, a) in &self.coeffs {
            for (j, b) in o.coeffs.range(..=order.saturating_sub(*i)) {
                if i + j > order {
                    break;
                }
                out.add_at(ring, i + j, &ring.mul(a, b)?);
            }
        }
        Ok(out)
    }

    /// Two-sided inverse; the constant coefficient must be a unit.
    pub fn invert<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        let a0 = self.coeff(ring, 0);
        let a0i = ring.inverse(&a0)?;
        let mut b: Vec<E> = Vec::with_capacity(self.order as usize + 1);
        b.push(a0i.clone());
        for k in 1..=self.order {
            let mut s = ring.zero();
            for (j, aj) in self.coeffs.range(1..=k) {
                let t = ring.mul(aj, &b[(k - j) as usize])?;
                ring.add_assign(&mut s, &t);
            }
            b.push(ring.neg(&ring.mul(&a0i, &s)?));
        }
        Ok(Series::from_terms(
            ring,
            self.dir,
            self.order,
            b.into_iter().enumerate().map(|(k, e)| (k as u32, e)),
        ))
    }

    /// Substitutes `u ↦ u + γh`.
    ///
    /// In the `u^{-1}` direction this is exact to the same order. In the `u`
    /// direction the coefficient of `u^j` needs input up to `u^{j+M}`, so the
    /// result is exact only up to `order - M`.
    pub fn shift<R: Ring<Elem = E>>(&self, gamma: &Rational, ring: &R) -> Result<Self> {
        if gamma.is_zero() {
            return Ok(self.clone());
        }
        let m = ring.h_order();
        let gh = |t: u32, c: Rational| HPoly::monomial(c * gamma.pow(t), t as usize, m);
        match self.dir {
            Expansion::InvU => {
                // u^{-d} ↦ Σ_t binom(-d, t) (γh)^t u^{-d-t}
                let mut out = Series::zero(self.dir, self.order);
                for (d, e) in &self.coeffs {
                    for t in 0..=(m as u32).min(self.order - d) {
                        let c = Rational::binom_int(-(*d as i64), t as i64);
                        out.add_at(ring, d + t, &ring.scale(e, &gh(t, c)));
                    }
                }
                Ok(out)
            }
            Expansion::U => {
                if (self.order as usize) < m {
                    return Err(Error::TruncationMismatch(format!(
                        "shifting a u-series of order {} needs order at least M = {m}",
                        self.order
                    )));
                }
                // u^d ↦ Σ_j binom(d, j) (γh)^{d-j} u^j
                let order = self.order - m as u32;
                let mut out = Series::zero(self.dir, order);
                for (d, e) in &self.coeffs {
                    for t in 0..=(m as u32).min(*d) {
                        let j = d - t;
                        if j > order {
                            continue;
                        }
                        let c = Rational::binom_int(*d as i64, t as i64);
                        out.add_at(ring, j, &ring.scale(e, &gh(t, c)));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Coefficientwise equality through the common order.
    pub fn agrees_with<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<bool> {
        Ok(self.sub(o, ring)?.is_zero())
    }
}

impl TruncatedSeries {
    /// Scalar series from `(exponent degree, coefficient)` pairs.
    pub fn scalar(dir: Expansion, order: u32, m: usize, terms: impl IntoIterator<Item = (u32, HPoly)>) -> Self {
        Series::from_terms(&HRing::new(m), dir, order, terms)
    }

    /// `(1 + a·h/u)^{-1}`-style helpers are built from this: the series
    /// `Σ_k c_k h^k u^{-k}` of a function of `t = h/u`.
    pub fn from_t_series(coeffs: &[Rational], order: u32, m: usize) -> Self {
        let ring = HRing::new(m);
        Series::from_terms(
            &ring,
            Expansion::InvU,
            order,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (k as u32, HPoly::monomial(c.clone(), k, m))),
        )
    }
}

/// Strict scalar arithmetic: both operands must share direction, order and
/// truncation.
pub fn series_arith(
    op: SeriesOp,
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    m: usize,
) -> Result<TruncatedSeries> {
    if a.direction() != b.direction() {
        return Err(Error::DirectionMismatch);
    }
    if a.order() != b.order() {
        return Err(Error::TruncationMismatch(format!("orders {} and {}", a.order(), b.order())));
    }
    let bad = a
        .terms()
        .values()
        .chain(b.terms().values())
        .any(|c| c.truncation() != m);
    if bad {
        return Err(Error::TruncationMismatch(format!("coefficients not truncated at h^{}", m + 1)));
    }
    let ring = HRing::new(m);
    match op {
        SeriesOp::Add => a.add(b, &ring),
        SeriesOp::Sub => a.sub(b, &ring),
        SeriesOp::Mul => a.mul(b, &ring),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

/// A two-sided window of a Laurent series in `u`, exact for exponents in
/// `lo..=hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<E> {
    pub lo: i32,
    pub hi: i32,
    coeffs: BTreeMap<i32, E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Laurent<E> {
    pub fn zero(lo: i32, hi: i32) -> Self {
        Laurent { lo, hi, coeffs: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<i32, E> {
        &self.coeffs
    }

    pub fn get(&self, exp: i32) -> Option<&E> {
        self.coeffs.get(&exp)
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, exp: i32) -> E {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn add_at<R: Ring<Elem = E>>(&mut self, ring: &R, exp: i32, e: &E) {
        if exp < self.lo || exp > self.hi || ring.is_zero(e) {
            return;
        }
        match self.coeffs.get_mut(&exp) {
            Some(c) => {
                ring.add_assign(c, e);
                if ring.is_zero(c) {
                    self.coeffs.remove(&exp);
                }
            }
            None => {
                self.coeffs.insert(exp, e.clone());
            }
        }
    }

    /// Embeds a one-sided series.
    pub fn from_series<R: Ring<Elem = E>>(ring: &R, s: &Series<E>) -> Self {
        let (lo, hi) = match s.direction() {
            Expansion::InvU => (-(s.order() as i32), i32::MAX),
            Expansion::U => (i32::MIN, s.order() as i32),
        };
        let mut out = Laurent::zero(lo, hi);
        for (d, e) in s.terms() {
            out.add_at(ring, s.direction().exponent(*d), e);
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Self {
        let mut out = Laurent::zero(self.lo.max(o.lo), self.hi.min(o.hi));
        for (k, e) in self.coeffs.iter().chain(o.coeffs.iter()) {
            out.add_at(ring, *k, e);
        }
        out
    }

    pub fn sub<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Self {
        self.add(&o.map(|e| ring.neg(e)), ring)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, s: &HPoly, ring: &R) -> Self {
        let mut out = Laurent::zero(self.lo, self.hi);
        for (k, e) in &self.coeffs {
            out.add_at(ring, *k, &ring.scale(e, s));
        }
        out
    }

    pub fn map<F: FnMut(&E) -> E>(&self, mut f: F) -> Self {
        Laurent { lo: self.lo, hi: self.hi, coeffs: self.coeffs.iter().map(|(k, v)| (*k, f(v))).collect() }
    }

    /// Divides every coefficient by `h` via the supplied map, failing if any
    /// coefficient is not divisible.
    pub fn try_map<F: FnMut(&E) -> Result<E>>(&self, mut f: F) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            coeffs.insert(*k, f(v)?);
        }
        Ok(Laurent { lo: self.lo, hi: self.hi, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Ring whose elements are scalar series of one fixed shape.
#[derive(Clone, Copy, Debug)]
pub struct SeriesRing {
    pub dir: Expansion,
    pub order: u32,
    pub m: usize,
}

impl SeriesRing {
    pub fn new(dir: Expansion, order: u32, m: usize) -> Self {
        SeriesRing { dir, order, m }
    }

    pub fn base_ring(&self) -> HRing {
        HRing::new(self.m)
    }
}

impl Ring for SeriesRing {
    type Elem = TruncatedSeries;

    fn zero(&self) -> TruncatedSeries {
        Series::zero(self.dir, self.order)
    }
    fn one(&self) -> TruncatedSeries {
        Series::one(&self.base_ring(), self.dir, self.order)
    }
    fn is_zero(&self, a: &TruncatedSeries) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a.add(b, &self.base_ring()).expect("same direction")
    }
    fn neg(&self, a: &TruncatedSeries) -> TruncatedSeries {
        a.neg(&self.base_ring())
    }
    fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        a.mul(b, &self.base_ring())
    }
    fn scale(&self, a: &TruncatedSeries, s: &HPoly) -> TruncatedSeries {
        a.scale(s, &self.base_ring())
    }
    fn embed(&self, s: &HPoly) -> TruncatedSeries {
        Series::constant(&self.base_ring(), s.with_truncation(self.m), self.dir, self.order)
    }
    fn h_order(&self) -> usize {
        self.m
    }
    fn unit_split(&self, a: &TruncatedSeries) -> Option<(Rational, TruncatedSeries)> {
        let c = a.get(0).map(|p| p.coeff(0)).unwrap_or_else(Rational::zero);
        if c.is_zero() {
            return None;
        }
        let r = a.sub(&self.embed(&HPoly::constant(c.clone(), self.m)), &self.base_ring()).ok()?;
        Some((c, r))
    }
    fn nilpotency_bound(&self) -> usize {
        self.order as usize + self.m + 1
    }
    fn inverse(&self, a: &TruncatedSeries) -> Result<TruncatedSeries> {
        a.invert(&self.base_ring())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(m: usize, order: u32, a: i64) -> TruncatedSeries {
        // 1/(1 - a h/u) = Σ a^k h^k u^{-k}
        let cs: Vec<Rational> = (0..=order).map(|k| Rational::from_int(a).pow(k)).collect();
        TruncatedSeries::from_t_series(&cs, order, m)
    }

    #[test]
    fn inverse_of_geometric_series() {
        let ring = HRing::new(5);
        let g = geometric(5, 6, 3);
        let inv = g.invert(&ring).unwrap();
        let expect = TruncatedSeries::from_t_series(&[Rational::one(), Rational::from_int(-3)], 6, 5);
        assert_eq!(inv, expect);
    }

    #[test]
    fn shift_round_trip_inv_u() {
        let ring = HRing::new(4);
        let g = geometric(4, 6, 2);
        let back = g
            .shift(&Rational::new(3, 2), &ring)
            .unwrap()
            .shift(&Rational::new(-3, 2), &ring)
            .unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn shift_of_u_series_loses_m_orders() {
        let ring = HRing::new(2);
        // u^3 ↦ (u + h)^3 = u^3 + 3h u^2 + 3h^2 u + h^3 (h^3 dropped)
        let s = TruncatedSeries::scalar(Expansion::U, 5, 2, [(3, HPoly::one(2))]);
        let t = s.shift(&Rational::one(), &ring).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(t.coeff(&ring, 2), HPoly::from_ints(&[0, 3], 2));
        assert_eq!(t.coeff(&ring, 1), HPoly::from_ints(&[0, 0, 3], 2));
        assert_eq!(t.coeff(&ring, 0), HPoly::zero(2));
    }

    #[test]
    fn strict_arith_rejects_mismatch() {
        let a = geometric(3, 4, 1);
        let b = geometric(3, 5, 1);
        assert!(series_arith(SeriesOp::Add, &a, &b, 3).is_err());
        let c = TruncatedSeries::scalar(Expansion::U, 4, 3, []);
        assert_eq!(series_arith(SeriesOp::Mul, &a, &c, 3), Err(Error::DirectionMismatch));
    }
}
