//! The coefficient-ring abstraction shared by series, matrices and tensor
//! operators. A ring is a *context* object: elements of the algebra need the
//! relation table to multiply, scalar rings need only the truncation order.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::scalar::{HPoly, Rational};

pub trait Ring: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Multiplication by a central scalar from ℚ[h].
    fn scale(&self, a: &Self::Elem, s: &HPoly) -> Self::Elem;
    /// `s·1`
    fn embed(&self, s: &HPoly) -> Self::Elem;
    /// Truncation order `M` of the scalars (coefficients of `h^k`, `k > M`, vanish).
    fn h_order(&self) -> usize;

    /// Splits `a = c + r` with `c` a nonzero rational and `r` nilpotent.
    fn unit_split(&self, a: &Self::Elem) -> Option<(Rational, Self::Elem)>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn scale_q(&self, a: &Self::Elem, q: &Rational) -> Self::Elem {
        self.scale(a, &HPoly::constant(q.clone(), self.h_order()))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// Inverse via the geometric series around the rational part.
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let (c, r) = self
            .unit_split(a)
            .ok_or_else(|| Error::NotUnit(format!("{a:?}")))?;
        let ci = c.recip()?;
        let x = self.scale_q(&r, &-&ci);
        let mut term = self.one();
        let mut acc = self.one();
        for _ in 0..=self.nilpotency_bound() {
            term = self.mul(&term, &x)?;
            if self.is_zero(&term) {
                break;
            }
            acc = self.add(&acc, &term);
        }
        Ok(self.scale_q(&acc, &ci))
    }

    /// Upper bound on the nilpotency index of the `r` returned by `unit_split`.
    fn nilpotency_bound(&self) -> usize {
        self.h_order() + 1
    }
}

/// ℚ itself (no deformation parameter).
#[derive(Clone, Copy, Debug, Default)]
pub struct QRing;

impl Ring for QRing {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a * b)
    }
    fn scale(&self, a: &Rational, s: &HPoly) -> Rational {
        a * &s.coeff(0)
    }
    fn embed(&self, s: &HPoly) -> Rational {
        s.coeff(0)
    }
    fn h_order(&self) -> usize {
        0
    }
    fn unit_split(&self, a: &Rational) -> Option<(Rational, Rational)> {
        (!a.is_zero()).then(|| (a.clone(), Rational::zero()))
    }
    fn inverse(&self, a: &Rational) -> Result<Rational> {
        a.recip()
    }
}

/// ℚ[h]/(h^{M+1}).
#[derive(Clone, Copy, Debug)]
pub struct HRing {
    pub m: usize,
}

impl HRing {
    pub fn new(m: usize) -> Self {
        HRing { m }
    }
}

impl Ring for HRing {
    type Elem = HPoly;

    fn zero(&self) -> HPoly {
        HPoly::zero(self.m)
    }
    fn one(&self) -> HPoly {
        HPoly::one(self.m)
    }
    fn is_zero(&self, a: &HPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &HPoly, b: &HPoly) -> HPoly {
        a.add(b)
    }
    fn neg(&self, a: &HPoly) -> HPoly {
        a.neg()
    }
    fn mul(&self, a: &HPoly, b: &HPoly) -> Result<HPoly> {
        Ok(a.mul(b))
    }
    fn scale(&self, a: &HPoly, s: &HPoly) -> HPoly {
        a.mul(s)
    }
    fn embed(&self, s: &HPoly) -> HPoly {
        s.with_truncation(self.m)
    }
    fn h_order(&self) -> usize {
        self.m
    }
    fn unit_split(&self, a: &HPoly) -> Option<(Rational, HPoly)> {
        let c = a.coeff(0);
        if c.is_zero() {
            return None;
        }
        Some((c.clone(), a.sub(&HPoly::constant(c, self.m))))
    }
    fn inverse(&self, a: &HPoly) -> Result<HPoly> {
        a.inverse()
    }
}
