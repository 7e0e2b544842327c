use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::generator::{is_normal, Gen, Monomial};
use crate::scalar::{HPoly, Rational};

/// A finite combination of normal monomials with `ℚ[h]/(h^{M+1})`
/// coefficients. The empty monomial is the unit.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, HPoly>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn scalar(c: HPoly) -> Self {
        let mut e = Element::zero();
        e.add_term(Monomial::new(), &c);
        e
    }

    pub fn one(m: usize) -> Self {
        Element::scalar(HPoly::one(m))
    }

    pub fn gen(g: Gen, m: usize) -> Self {
        Element::monomial(Monomial::from_slice(&[g]), HPoly::one(m))
    }

    /// Caller guarantees `mono` is normal.
    pub fn monomial(mono: Monomial, c: HPoly) -> Self {
        debug_assert!(is_normal(&mono));
        let mut e = Element::zero();
        e.add_term(mono, &c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, HPoly> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, HPoly> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: &HPoly) {
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

    /// `self += a·o`
    pub fn add_scaled(&mut self, o: &Element, a: &HPoly) {
        if a.is_one() {
            for (m, c) in &o.terms {
                self.add_term(m.clone(), c);
            }
        } else {
            for (m, c) in &o.terms {
                self.add_term(m.clone(), &c.mul(a));
            }
        }
    }

    pub fn add(&self, o: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Element {
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Element) -> Element {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &HPoly) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul(s));
        }
        out
    }

    pub fn scale_q(&self, q: &Rational) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.scale(q));
        }
        out
    }

    /// Drops every coefficient above `h^b`.
    pub fn clip(&self, b: usize) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.clip(b));
        }
        out
    }

    /// Lowest power of `h` present.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.values().filter_map(HPoly::valuation).min()
    }

    /// The coefficient of `h^k`, as an element with constant coefficients.
    pub fn h_part(&self, k: usize) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            let q = c.coeff(k);
            if !q.is_zero() {
                out.add_term(m.clone(), &HPoly::constant(q, c.truncation()));
            }
        }
        out
    }

    /// Divides all coefficients by `h^k` (they must be divisible).
    pub fn div_h(&self, k: usize) -> crate::Result<Element> {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.div_h(k)?.with_truncation(c.truncation()));
        }
        Ok(out)
    }

    pub fn filter<F: Fn(&[Gen]) -> bool>(&self, keep: F) -> Element {
        Element { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Coefficient of the unit monomial.
    pub fn scalar_part(&self, m: usize) -> HPoly {
        self.terms.get(&Monomial::new()).cloned().unwrap_or_else(|| HPoly::zero(m))
    }

    pub fn coeff(&self, mono: &[Gen]) -> Option<&HPoly> {
        self.terms.get(&Monomial::from_slice(mono))
    }

    pub fn max_plus_mode(&self) -> Option<i64> {
        self.terms.keys().flat_map(|m| m.iter()).filter(|g| g.is_plus()).map(|g| g.r()).max()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }
}

/// Every plus mode in `mono` is below `q`.
pub fn plus_modes_below(mono: &[Gen], q: i64) -> bool {
    mono.iter().all(|g| g.is_minus() || g.r() < q)
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]")?;
            for g in m {
                write!(f, " {g:?}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
