//! Truncated polynomials in the deformation parameter: elements of
//! ℚ[h]/(h^{M+1}).

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// `Σ_{k≤M} a_k h^k`. Trailing zero coefficients are never stored, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HPoly {
    coeffs: Vec<Rational>,
    m: usize,
}

impl HPoly {
    pub fn zero(m: usize) -> Self {
        HPoly { coeffs: Vec::new(), m }
    }

    pub fn one(m: usize) -> Self {
        Self::constant(Rational::one(), m)
    }

    pub fn constant(c: Rational, m: usize) -> Self {
        Self::from_coeffs(vec![c], m)
    }

    /// `c·h^k` (zero if `k > M`).
    pub fn monomial(c: Rational, k: usize, m: usize) -> Self {
        if k > m || c.is_zero() {
            return Self::zero(m);
        }
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        HPoly { coeffs: v, m }
    }

    /// The variable `h` itself.
    pub fn h(m: usize) -> Self {
        Self::monomial(Rational::one(), 1, m)
    }

    /// Builds from low-to-high coefficients, dropping anything above `h^M`.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, m: usize) -> Self {
        coeffs.truncate(m + 1);
        let mut p = HPoly { coeffs, m };
        p.trim();
        p
    }

    pub fn from_ints(cs: &[i64], m: usize) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| Rational::from_int(c)).collect(), m)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest power of `h` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Highest stored power of `h`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Re-truncates at a different order (dropping or zero-extending).
    pub fn with_truncation(&self, m: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), m)
    }

    pub fn add(&self, o: &HPoly) -> HPoly {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &HPoly) {
        let len = o.coeffs.len().min(self.m + 1);
        if self.coeffs.len() < len {
            self.coeffs.resize(len, Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs[..len]) {
            *a += b;
        }
        self.trim();
    }

    /// `self += a·o`
    pub fn add_scaled(&mut self, o: &HPoly, a: &Rational) {
        let len = o.coeffs.len().min(self.m + 1);
        if self.coeffs.len() < len {
            self.coeffs.resize(len, Rational::zero());
        }
        for (x, b) in self.coeffs.iter_mut().zip(&o.coeffs[..len]) {
            *x += &(b * a);
        }
        self.trim();
    }

    pub fn sub(&self, o: &HPoly) -> HPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HPoly {
        HPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            m: self.m,
        }
    }

    pub fn scale(&self, a: &Rational) -> HPoly {
        if a.is_zero() {
            return HPoly::zero(self.m);
        }
        HPoly {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            m: self.m,
        }
    }

    /// Product truncated at `min(M_self, M_other)`.
    pub fn mul(&self, o: &HPoly) -> HPoly {
        let m = self.m.min(o.m);
        if self.is_zero() || o.is_zero() {
            return HPoly::zero(m);
        }
        let len = (self.coeffs.len() + o.coeffs.len() - 1).min(m + 1);
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += &(a * b);
            }
        }
        Self::from_coeffs(out, m)
    }

    /// Multiplies by `h^k`.
    pub fn shift_up(&self, k: usize) -> HPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(v, self.m)
    }

    /// Divides by `h^k`; fails unless the low `k` coefficients vanish. The
    /// result keeps truncation `M - k`, since higher terms are unknown.
    pub fn div_h(&self, k: usize) -> Result<HPoly> {
        if k > self.m {
            return Err(Error::TruncationMismatch(format!(
                "cannot divide by h^{k} at truncation {}",
                self.m
            )));
        }
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(format!("{self} by h^{k}")));
        }
        let v = self.coeffs.iter().skip(k).cloned().collect();
        Ok(Self::from_coeffs(v, self.m - k))
    }

    /// Drops every term above `h^b`, keeping the declared truncation.
    pub fn clip(&self, b: usize) -> HPoly {
        let mut v = self.coeffs.clone();
        v.truncate(b + 1);
        let mut p = HPoly { coeffs: v, m: self.m };
        p.trim();
        p
    }

    /// Multiplicative inverse, defined when the constant term is nonzero.
    pub fn inverse(&self) -> Result<HPoly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotUnit(format!("{self} has no constant term")));
        }
        let inv0 = c0.recip()?;
        let mut out = vec![Rational::zero(); self.m + 1];
        out[0] = inv0.clone();
        for k in 1..=self.m {
            let mut s = Rational::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s += &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -(s * &inv0);
        }
        Ok(Self::from_coeffs(out, self.m))
    }

    /// Evaluates at a rational value of `h`.
    pub fn eval(&self, h: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * h + c;
        }
        acc
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})h")?,
                _ => write!(f, "({c})h^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [mod h^{}]", self.m + 1)
    }
}
