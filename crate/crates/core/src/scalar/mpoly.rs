//! Sparse multivariate polynomials over ℚ, used when an identity in several
//! spectral parameters is checked after clearing denominators.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::scalar::{HPoly, Rational, Ring};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        let mut p = MPoly::zero();
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The `i`-th variable.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero();
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ c_i x_i + c_0` from `(variable, coefficient)` pairs.
    pub fn linear(coeffs: &[(usize, Rational)], c0: Rational, nvars: usize) -> Self {
        let mut p = MPoly::constant(c0, nvars);
        for (i, c) in coeffs {
            p = p.add(&MPoly::var(*i, nvars).scale(c));
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, a: &Rational) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * a);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                t = t * x.pow(*k);
            }
            acc += &t;
        }
        acc
    }
}

/// Ring context for [`MPoly`]; `h_var` says which variable plays the role of `h`.
#[derive(Clone, Copy, Debug)]
pub struct MPolyRing {
    pub nvars: usize,
    pub h_var: usize,
}

impl Ring for MPolyRing {
    type Elem = MPoly;

    fn zero(&self) -> MPoly {
        MPoly::zero()
    }
    fn one(&self) -> MPoly {
        MPoly::constant(Rational::one(), self.nvars)
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg()
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        Ok(a.mul(b))
    }
    fn scale(&self, a: &MPoly, s: &HPoly) -> MPoly {
        a.mul(&self.embed(s))
    }
    fn embed(&self, s: &HPoly) -> MPoly {
        let mut p = MPoly::zero();
        for (k, c) in s.coeffs().iter().enumerate() {
            let mut e = vec![0; self.nvars];
            e[self.h_var] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }
    fn h_order(&self) -> usize {
        usize::MAX / 4
    }
    fn unit_split(&self, a: &MPoly) -> Option<(Rational, MPoly)> {
        (a.terms.len() == 1)
            .then(|| a.terms.iter().next().unwrap())
            .filter(|(e, _)| e.iter().all(|k| *k == 0))
            .map(|(_, c)| (c.clone(), MPoly::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let x = MPoly::var(0, 2);
        let y = MPoly::var(1, 2);
        let lhs = x.add(&y).mul(&x.add(&y.neg()));
        let rhs = x.mul(&x).add(&y.mul(&y).neg());
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.eval(&[Rational::from_int(3), Rational::from_int(2)]), Rational::from_int(5));
    }
}
