//! The commutative image of the diagonal sector: polynomials in independent
//! variables `l_i^k` with `ℚ[h]/(h^{M+1})` coefficients, modulo the ideal
//! generated by the `l_i^k` with `k ≥ p`.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::algebra::{Algebra, Element, Gen, Monomial};
use crate::error::{Error, Result};
use crate::scalar::{HPoly, Rational, Ring};

/// The variable `l_i^k`, `i` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagVar {
    pub i: usize,
    pub k: i64,
}

/// A sorted multiset of variables.
pub type DiagMono = SmallVec<[DiagVar; 6]>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiagPoly {
    terms: BTreeMap<DiagMono, HPoly>,
}

impl DiagPoly {
    pub fn zero() -> Self {
        DiagPoly::default()
    }

    pub fn constant(c: HPoly) -> Self {
        let mut p = DiagPoly::zero();
        p.add_term(DiagMono::new(), &c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<DiagMono, HPoly> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: DiagMono, c: &HPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(x) => {
                x.add_assign(c);
                if x.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c.clone());
            }
        }
    }

    pub fn add(&self, o: &DiagPoly) -> DiagPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> DiagPoly {
        DiagPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &DiagPoly) -> DiagPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &HPoly) -> DiagPoly {
        let mut out = DiagPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul(s));
        }
        out
    }

    /// Value at `l_i^k ↦ value(i, k)`.
    pub fn eval<F: Fn(DiagVar) -> Rational>(&self, value: F, m: usize) -> HPoly {
        let mut out = HPoly::zero(m);
        for (mono, c) in &self.terms {
            let mut v = Rational::one();
            for x in mono {
                v *= &value(*x);
            }
            out.add_scaled(c, &v);
        }
        out
    }
}

impl fmt::Display for DiagPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (t, (m, c)) in self.terms.iter().enumerate() {
            if t > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]")?;
            for x in m {
                write!(f, " l{}^{}", x.i, x.k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiagPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Π_c(n)` modulo `h^{M+1}` and the ideal `I_p`.
#[derive(Clone, Copy, Debug)]
pub struct DiagRing {
    pub n: usize,
    pub m: usize,
    pub p: i64,
}

impl DiagRing {
    pub fn new(n: usize, m: usize, p: u32) -> Self {
        DiagRing { n, m, p: p as i64 }
    }

    /// Matches the truncation of an algebra.
    pub fn for_algebra(alg: &Algebra) -> Self {
        DiagRing::new(alg.n(), alg.m(), alg.config().p)
    }

    /// `l_i^k`, zero when `k ≥ p`.
    pub fn var(&self, i: usize, k: i64) -> Result<DiagPoly> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(format!("l_{i}^{k} with n = {}", self.n)));
        }
        if k >= self.p {
            return Ok(DiagPoly::zero());
        }
        let mut out = DiagPoly::zero();
        out.add_term(SmallVec::from_slice(&[DiagVar { i, k }]), &HPoly::one(self.m));
        Ok(out)
    }

    fn mul_mono(a: &DiagMono, b: &DiagMono) -> DiagMono {
        let mut out = DiagMono::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            if a[x] <= b[y] {
                out.push(a[x]);
                x += 1;
            } else {
                out.push(b[y]);
                y += 1;
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        out
    }
}

impl Ring for DiagRing {
    type Elem = DiagPoly;

    fn zero(&self) -> DiagPoly {
        DiagPoly::zero()
    }
    fn one(&self) -> DiagPoly {
        DiagPoly::constant(HPoly::one(self.m))
    }
    fn is_zero(&self, a: &DiagPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &DiagPoly, b: &DiagPoly) -> DiagPoly {
        a.add(b)
    }
    fn neg(&self, a: &DiagPoly) -> DiagPoly {
        a.neg()
    }
    fn mul(&self, a: &DiagPoly, b: &DiagPoly) -> Result<DiagPoly> {
        let mut out = DiagPoly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let c = ca.mul(cb);
                if !c.is_zero() {
                    out.add_term(DiagRing::mul_mono(ma, mb), &c);
                }
            }
        }
        Ok(out)
    }
    fn scale(&self, a: &DiagPoly, s: &HPoly) -> DiagPoly {
        a.scale(&s.with_truncation(self.m))
    }
    fn embed(&self, s: &HPoly) -> DiagPoly {
        DiagPoly::constant(s.with_truncation(self.m))
    }
    fn h_order(&self) -> usize {
        self.m
    }
    /// Only elements whose non-constant part is divisible by `h` are units.
    fn unit_split(&self, a: &DiagPoly) -> Option<(Rational, DiagPoly)> {
        let c = a.terms.get(&DiagMono::new()).map(|c| c.coeff(0)).unwrap_or_default();
        if c.is_zero() || a.terms.iter().any(|(m, x)| !m.is_empty() && !x.coeff(0).is_zero()) {
            return None;
        }
        Some((c.clone(), a.sub(&DiagPoly::constant(HPoly::constant(c, self.m)))))
    }
}

/// `θ`: the normal monomials all of whose factors are diagonal.
pub fn theta(x: &Element) -> Element {
    x.filter(|w| w.iter().all(|g| g.is_diagonal()))
}

/// `η`: renames `l_ii^{(k)} ↦ l_i^k` on a diagonal element, modulo `I_p`.
pub fn eta(x: &Element, ring: &DiagRing) -> Result<DiagPoly> {
    let mut out = DiagPoly::zero();
    'terms: for (w, c) in x.terms() {
        let mut mono = DiagMono::with_capacity(w.len());
        for g in w {
            if !g.is_diagonal() {
                return Err(Error::InvalidConfig(format!("η of the off-diagonal generator {g:?}")));
            }
            if g.r() >= ring.p {
                continue 'terms;
            }
            mono.push(DiagVar { i: g.i(), k: g.r() });
        }
        mono.sort();
        out.add_term(mono, &c.with_truncation(ring.m));
    }
    Ok(out)
}

/// `χ = η ∘ θ`.
pub fn chi(x: &Element, ring: &DiagRing) -> Result<DiagPoly> {
    eta(&theta(x), ring)
}

/// `η^{-1}`: each commutative monomial as the normal monomial with the same
/// diagonal factors.
pub fn eta_inverse(p: &DiagPoly) -> Element {
    let mut out = Element::zero();
    for (mono, c) in p.terms() {
        let mut w: Monomial = mono.iter().map(|v| Gen::new(v.i, v.i, v.k)).collect();
        w.sort();
        out.add_term(w, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraConfig, Normalization};

    fn alg() -> Algebra {
        Algebra::new(AlgebraConfig::new(2, Rational::from_int(-2), Normalization::Normalized, 3, 3, 8, 3).unwrap()).unwrap()
    }

    #[test]
    fn theta_keeps_exactly_the_diagonal_monomials() {
        let a = alg();
        let x = a.mul(&a.gen(1, 1, -1).unwrap(), &a.gen(2, 2, 0).unwrap()).unwrap();
        assert_eq!(theta(&x), x);
        let y = a.mul(&a.gen(1, 2, -1).unwrap(), &a.gen(2, 1, 0).unwrap()).unwrap();
        assert!(theta(&y).is_zero());
    }

    #[test]
    fn chi_of_a_generator_is_its_variable() {
        let a = alg();
        let r = DiagRing::for_algebra(&a);
        assert_eq!(chi(&a.gen(1, 1, 0).unwrap(), &r).unwrap(), r.var(1, 0).unwrap());
        assert!(r.var(1, 3).unwrap().is_zero());
        assert!(chi(&a.gen(1, 2, 0).unwrap(), &r).unwrap().is_zero());
    }

    #[test]
    fn unit_split_rejects_non_nilpotent_parts() {
        let r = DiagRing::new(2, 2, 3);
        let x = r.var(1, 0).unwrap();
        assert!(r.unit_split(&r.add(&r.one(), &x)).is_none());
        let y = r.add(&r.one(), &r.scale(&x, &HPoly::h(2)));
        let inv = r.inverse(&y).unwrap();
        assert_eq!(r.mul(&y, &inv).unwrap(), r.one());
    }

    #[test]
    fn eval_substitutes_every_variable() {
        let r = DiagRing::new(2, 2, 3);
        let x = r.mul(&r.var(1, 0).unwrap(), &r.var(2, -1).unwrap()).unwrap();
        let x = r.add(&x, &r.var(1, 0).unwrap());
        let v = x.eval(|v| Rational::from_int(v.i as i64 + v.k), 2);
        // 1·1 + 1
        assert_eq!(v, HPoly::from_ints(&[2], 2));
    }
}
