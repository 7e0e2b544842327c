//! Exact rational functions of one spectral variable `x` with coefficients in
//! ℚ[h] (no truncation). Numerator and denominator are kept coprime in
//! ℚ[h][x] by a primitive remainder sequence, and the denominator's leading
//! coefficient is monic.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Expansion, HPoly, HRing, Rational, Ring, Series, TruncatedSeries};

/// Dense polynomial in `h` over ℚ.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn h() -> Self {
        UPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn new(mut v: Vec<Rational>) -> Self {
        while v.last().is_some_and(Rational::is_zero) {
            v.pop();
        }
        UPoly(v)
    }

    pub fn from_hpoly(p: &HPoly) -> Self {
        UPoly::new(p.coeffs().to_vec())
    }

    pub fn to_hpoly(&self, m: usize) -> HPoly {
        HPoly::from_coeffs(self.0.clone(), m)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let v = (0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_default();
                match o.0.get(i) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        UPoly::new(v)
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * a).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        UPoly::new(v)
    }

    /// Euclidean division over ℚ.
    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.lead().recip()?;
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &lead_inv;
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &(&c * di);
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Rational::is_zero) {
                r.pop();
            }
        }
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn exact_div(&self, d: &UPoly) -> Result<UPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible(format!("{self:?} by {d:?}")));
        }
        Ok(q)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip().expect("nonzero"))
    }

    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, h: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * h + c)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hpoly(self.0.len().max(1)))
    }
}

/// Polynomial in `x` with ℚ[h] coefficients (dense, low degree first).
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct XPoly(Vec<UPoly>);

impl XPoly {
    pub fn new(mut v: Vec<UPoly>) -> Self {
        while v.last().is_some_and(UPoly::is_zero) {
            v.pop();
        }
        XPoly(v)
    }

    pub fn zero() -> Self {
        XPoly(Vec::new())
    }

    pub fn constant(c: UPoly) -> Self {
        XPoly::new(vec![c])
    }

    pub fn x() -> Self {
        XPoly::new(vec![UPoly::zero(), UPoly::constant(Rational::one())])
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> UPoly {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &XPoly) -> XPoly {
        let n = self.0.len().max(o.0.len());
        XPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_default();
                    match o.0.get(i) {
                        Some(b) => a.add(b),
                        None => a,
                    }
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> XPoly {
        XPoly(self.0.iter().map(UPoly::neg).collect())
    }

    pub fn mul(&self, o: &XPoly) -> XPoly {
        if self.is_zero() || o.is_zero() {
            return XPoly::zero();
        }
        let mut v = vec![UPoly::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        XPoly::new(v)
    }

    pub fn scale(&self, c: &UPoly) -> XPoly {
        XPoly::new(self.0.iter().map(|a| a.mul(c)).collect())
    }

    /// gcd of the ℚ[h] coefficients (monic).
    pub fn content(&self) -> UPoly {
        self.0.iter().fold(UPoly::zero(), |g, c| UPoly::gcd(&g, c))
    }

    pub fn primitive(&self) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        XPoly::new(self.0.iter().map(|a| a.exact_div(&c).expect("content divides")).collect())
    }

    /// Pseudo-remainder: `lead(d)^{k} self = q d + r` with `deg r < deg d`.
    fn prem(&self, d: &XPoly) -> XPoly {
        let dd = d.degree().expect("nonzero divisor");
        let ld = d.lead();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.lead();
            let mut shifted = vec![UPoly::zero(); dr - dd];
            shifted.extend(d.0.iter().map(|c| c.mul(&lr)));
            r = r.scale(&ld).add(&XPoly::new(shifted).neg());
        }
        r
    }

    /// Exact division in ℚ[h][x]; fails when not divisible.
    pub fn exact_div(&self, d: &XPoly) -> Result<XPoly> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let ld = d.lead();
        let mut r = self.clone();
        let mut q = vec![UPoly::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return Err(Error::NotDivisible("polynomial division leaves a remainder".into()));
            }
            let c = r.lead().exact_div(&ld)?;
            let mut shifted = vec![UPoly::zero(); dr - dd];
            shifted.extend(d.0.iter().map(|a| a.mul(&c)));
            r = r.add(&XPoly::new(shifted).neg());
            q[dr - dd] = c;
        }
        Ok(XPoly::new(q))
    }

    /// Greatest common divisor in ℚ[h][x], normalized to a monic content and
    /// a leading coefficient with monic leading term.
    pub fn gcd(a: &XPoly, b: &XPoly) -> XPoly {
        if a.is_zero() {
            return b.normalize_unit();
        }
        if b.is_zero() {
            return a.normalize_unit();
        }
        let cont = UPoly::gcd(&a.content(), &b.content());
        let (mut p, mut q) = (a.primitive(), b.primitive());
        if p.degree() < q.degree() {
            std::mem::swap(&mut p, &mut q);
        }
        while !q.is_zero() {
            let r = p.prem(&q);
            p = q;
            q = if r.is_zero() { r } else { r.primitive() };
        }
        p.primitive().scale(&cont).normalize_unit()
    }

    /// Scales by a rational so the leading ℚ[h]-coefficient is monic.
    fn normalize_unit(&self) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().lead();
        XPoly::new(self.0.iter().map(|a| a.scale(&l.recip().expect("nonzero"))).collect())
    }

    pub fn eval(&self, x: &Rational, h: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c.eval(h))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: XPoly,
    den: XPoly,
}

impl RatFunc {
    pub fn new(num: XPoly, den: XPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = XPoly::gcd(&num, &den);
        let mut num = num.exact_div(&g)?;
        let mut den = den.exact_div(&g)?;
        // remaining rational unit: make the denominator's top coefficient monic
        let l = den.lead().lead().recip()?;
        let lu = UPoly::constant(l);
        num = num.scale(&lu);
        den = den.scale(&lu);
        Ok(RatFunc { num, den })
    }

    pub fn zero() -> Self {
        RatFunc { num: XPoly::zero(), den: XPoly::constant(UPoly::constant(Rational::one())) }
    }

    pub fn one() -> Self {
        Self::from_poly(XPoly::constant(UPoly::constant(Rational::one())))
    }

    pub fn from_poly(p: XPoly) -> Self {
        RatFunc::new(p, XPoly::constant(UPoly::constant(Rational::one()))).expect("unit denominator")
    }

    pub fn from_upoly(p: UPoly) -> Self {
        Self::from_poly(XPoly::constant(p))
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Self::from_poly(XPoly::x())
    }

    /// `x + a + b h`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_poly(XPoly::new(vec![UPoly::new(vec![a, b]), UPoly::constant(Rational::one())]))
    }

    pub fn h() -> Self {
        Self::from_upoly(UPoly::h())
    }

    pub fn num(&self) -> &XPoly {
        &self.num
    }

    pub fn den(&self) -> &XPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn inverse(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Value at rational `(x, h)`; `None` on a pole.
    pub fn eval(&self, x: &Rational, h: &Rational) -> Option<Rational> {
        let d = self.den.eval(x, h);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x, h) / d)
    }

    /// Expansion in `u^{-1}` with `x = u`, valid when the function is bounded
    /// at infinity and the denominator's leading coefficient is a unit in
    /// ℚ[[h]].
    pub fn expand_inv_u(&self, order: u32, m: usize) -> Result<TruncatedSeries> {
        let ring = HRing::new(m);
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        if dn > dd {
            return Err(Error::OutOfRange("rational function has a pole at infinity".into()));
        }
        // p(u)/q(u) = u^{dn-dd} P(1/u)/Q(1/u) with P(t) = t^{dn} p(1/t)
        let rev = |p: &XPoly, deg: usize| -> TruncatedSeries {
            let terms = p.coeffs().iter().enumerate().map(|(i, c)| ((deg - i) as u32, c.to_hpoly(m)));
            Series::from_terms(&ring, Expansion::InvU, order, terms)
        };
        let p = rev(&self.num, dn);
        let q = rev(&self.den, dd);
        let ratio = p.mul(&q.invert(&ring)?, &ring)?;
        let shift = (dd - dn) as u32;
        Ok(Series::from_terms(
            &ring,
            Expansion::InvU,
            order,
            ratio.terms().iter().map(|(d, c)| (d + shift, c.clone())),
        ))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

/// Ring context for [`RatFunc`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RatRing;

impl Ring for RatRing {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        Ok(a.mul(b))
    }
    fn scale(&self, a: &RatFunc, s: &HPoly) -> RatFunc {
        a.mul(&RatFunc::from_upoly(UPoly::from_hpoly(s)))
    }
    fn embed(&self, s: &HPoly) -> RatFunc {
        RatFunc::from_upoly(UPoly::from_hpoly(s))
    }
    fn h_order(&self) -> usize {
        usize::MAX / 4
    }
    fn unit_split(&self, a: &RatFunc) -> Option<(Rational, RatFunc)> {
        (!a.is_zero()).then(|| (Rational::one(), a.sub(&RatFunc::one())))
    }
    fn inverse(&self, a: &RatFunc) -> Result<RatFunc> {
        a.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn cancels_common_factors() {
        // (x^2 - h^2) / (x - h) = x + h
        let x = RatFunc::x();
        let h = RatFunc::h();
        let num = x.mul(&x).sub(&h.mul(&h));
        let r = num.div(&x.sub(&h)).unwrap();
        assert_eq!(r, x.add(&h));
        assert_eq!(r.den().degree(), Some(0));
    }

    #[test]
    fn sum_of_fractions() {
        // 1/(x+h) + 1/(x-h) = 2x/(x^2-h^2)
        let x = RatFunc::x();
        let h = RatFunc::h();
        let a = x.add(&h).inverse().unwrap().add(&x.sub(&h).inverse().unwrap());
        let b = x.add(&x).div(&x.mul(&x).sub(&h.mul(&h))).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.eval(&q(3), &q(1)), Some(Rational::new(3, 4)));
    }

    #[test]
    fn expansion_matches_geometric_series() {
        // h/(x - 2h) = Σ_{k≥1} 2^{k-1} h^k u^{-k}
        let r = RatFunc::h().div(&RatFunc::linear(q(0), q(-2))).unwrap();
        let s = r.expand_inv_u(5, 5).unwrap();
        let ring = HRing::new(5);
        for k in 1..=5u32 {
            assert_eq!(s.coeff(&ring, k), HPoly::monomial(Rational::from_int(2).pow(k - 1), k as usize, 5));
        }
    }
}
