//! Two-variable expansions of rational kernels in `u - v`.
//!
//! A function of `x = u - v + γh` has two inequivalent expansions, in the
//! regions `|u| > |v|` and `|v| > |u|`. Their difference for `x^{-1}` is the
//! formal delta function, which is stored with region [`Region::Both`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{HPoly, HRing, Rational, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `|u| > |v|`: nonnegative powers of `v/u`.
    UOverV,
    /// `|v| > |u|`
    VOverU,
    /// A two-sided distribution such as the formal delta function.
    Both,
}

/// Inclusive exponent box; coefficients outside it are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub u_min: i32,
    pub u_max: i32,
    pub v_min: i32,
    pub v_max: i32,
}

impl Window {
    pub fn new(u_min: i32, u_max: i32, v_min: i32, v_max: i32) -> Self {
        Window { u_min, u_max, v_min, v_max }
    }

    pub fn contains(&self, a: i32, b: i32) -> bool {
        (self.u_min..=self.u_max).contains(&a) && (self.v_min..=self.v_max).contains(&b)
    }

    pub fn intersect(&self, o: &Window) -> Window {
        Window {
            u_min: self.u_min.max(o.u_min),
            u_max: self.u_max.min(o.u_max),
            v_min: self.v_min.max(o.v_min),
            v_max: self.v_max.min(o.v_max),
        }
    }
}

/// Coefficients of `u^a v^b`, keyed `(a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<E> {
    region: Region,
    window: Window,
    coeffs: BTreeMap<(i32, i32), E>,
}

/// Scalar-coefficient version.
pub type BiRegionSeries = BiSeries<HPoly>;

impl<E: Clone + PartialEq + std::fmt::Debug> BiSeries<E> {
    pub fn zero(region: Region, window: Window) -> Self {
        BiSeries { region, window, coeffs: BTreeMap::new() }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), E> {
        &self.coeffs
    }

    pub fn get(&self, a: i32, b: i32) -> Option<&E> {
        self.coeffs.get(&(a, b))
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, a: i32, b: i32) -> E {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn add_at<R: Ring<Elem = E>>(&mut self, ring: &R, a: i32, b: i32, e: &E) {
        if !self.window.contains(a, b) || ring.is_zero(e) {
            return;
        }
        match self.coeffs.get_mut(&(a, b)) {
            Some(c) => {
                ring.add_assign(c, e);
                if ring.is_zero(c) {
                    self.coeffs.remove(&(a, b));
                }
            }
            None => {
                self.coeffs.insert((a, b), e.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn compatible(&self, o: &Self) -> Result<Region> {
        match (self.region, o.region) {
            (a, b) if a == b => Ok(a),
            (Region::Both, b) => Ok(b),
            (a, Region::Both) => Ok(a),
            _ => Err(Error::DirectionMismatch),
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        let region = self.compatible(o)?;
        let mut out = BiSeries::zero(region, self.window.intersect(&o.window));
        for ((a, b), e) in self.coeffs.iter().chain(o.coeffs.iter()) {
            out.add_at(ring, *a, *b, e);
        }
        Ok(out)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        BiSeries {
            region: self.region,
            window: self.window,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, ring.neg(v))).collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.add(&o.neg(ring), ring)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, s: &HPoly, ring: &R) -> Self {
        let mut out = BiSeries::zero(self.region, self.window);
        for ((a, b), e) in &self.coeffs {
            out.add_at(ring, *a, *b, &ring.scale(e, s));
        }
        out
    }

    /// Convolution of the stored terms. Exact on the window whenever both
    /// factors are exact there and their supports only accumulate toward the
    /// window (true for expansions in a single region, whose `u`-exponents are
    /// bounded above and `v`-exponents below, or vice versa).
    pub fn mul<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        let region = self.compatible(o)?;
        let window = self.window.intersect(&o.window);
        let mut out = BiSeries::zero(region, window);
        for ((a1, b1), e1) in &self.coeffs {
            for ((a2, b2), e2) in &o.coeffs {
                if window.contains(a1 + a2, b1 + b2) {
                    out.add_at(ring, a1 + a2, b1 + b2, &ring.mul(e1, e2)?);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by `u^du v^dv`.
    pub fn shift_exponents(&self, du: i32, dv: i32, window: Window) -> Self {
        BiSeries {
            region: self.region,
            window,
            coeffs: self
                .coeffs
                .iter()
                .map(|((a, b), e)| ((a + du, b + dv), e.clone()))
                .filter(|((a, b), _)| window.contains(*a, *b))
                .collect(),
        }
    }
}

/// Expands `Σ_k φ_k h^k (u - v + γh)^{-k}` in the given region, keeping
/// `h`-degree at most `m` and exponents inside the window.
pub fn expand_ratio_function(
    phi: &[Rational],
    gamma: &Rational,
    region: Region,
    window: Window,
    m: usize,
) -> Result<BiRegionSeries> {
    let ring = HRing::new(m);
    let mut out = BiSeries::zero(region, window);
    for (k, fk) in phi.iter().enumerate() {
        if fk.is_zero() || k > m {
            continue;
        }
        let term = region_expand(k as u32, gamma, region, window, m)?;
        for ((a, b), e) in term.terms() {
            let s = HPoly::monomial(fk.clone(), k, m);
            out.add_at(&ring, *a, *b, &e.mul(&s));
        }
    }
    Ok(out)
}

/// Expansion of `(u - v + γh)^{-k}` in a region.
pub fn region_expand(k: u32, gamma: &Rational, region: Region, window: Window, m: usize) -> Result<BiRegionSeries> {
    let ring = HRing::new(m);
    let mut out = BiSeries::zero(region, window);
    let k = k as i64;
    match region {
        Region::Both => return Err(Error::InvalidConfig("a kernel expansion needs a definite region".into())),
        Region::UOverV => {
            // Σ_j binom(k+j-1, j) (v - γh)^j u^{-k-j}
            let jmax = (-(window.u_min as i64) - k).max(-1);
            for j in 0..=jmax {
                let bj = if k == 0 { Rational::from_int((j == 0) as i64) } else { Rational::binom_int(k + j - 1, j) };
                if bj.is_zero() {
                    continue;
                }
                for i in 0..=j {
                    let hdeg = (j - i) as usize;
                    if hdeg > m {
                        continue;
                    }
                    let c = &bj * &Rational::binom_int(j, i) * (-gamma).pow(hdeg as u32);
                    out.add_at(&ring, (-k - j) as i32, i as i32, &HPoly::monomial(c, hdeg, m));
                }
            }
        }
        Region::VOverU => {
            // (-1)^k Σ_j binom(k+j-1, j) (u + γh)^j v^{-k-j}
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            let jmax = (-(window.v_min as i64) - k).max(-1);
            for j in 0..=jmax {
                let bj = if k == 0 { Rational::from_int((j == 0) as i64) } else { Rational::binom_int(k + j - 1, j) };
                if bj.is_zero() {
                    continue;
                }
                for i in 0..=j {
                    let hdeg = (j - i) as usize;
                    if hdeg > m {
                        continue;
                    }
                    let c = &sign * &bj * Rational::binom_int(j, i) * gamma.pow(hdeg as u32);
                    out.add_at(&ring, i as i32, (-k - j) as i32, &HPoly::monomial(c, hdeg, m));
                }
            }
        }
    }
    Ok(out)
}

/// The formal delta function `δ(u - v + γh) = Σ_{k∈ℤ} u^{-k-1} (v - γh)^k`,
/// obtained as the difference of the two expansions of `(u - v + γh)^{-1}`.
pub fn delta_series(gamma: &Rational, window: Window, m: usize) -> Result<BiRegionSeries> {
    let ring = HRing::new(m);
    let a = region_expand(1, gamma, Region::UOverV, window, m)?;
    let b = region_expand(1, gamma, Region::VOverU, window, m)?;
    let mut out = BiSeries::zero(Region::Both, window);
    for ((x, y), e) in a.terms() {
        out.add_at(&ring, *x, *y, e);
    }
    for ((x, y), e) in b.terms() {
        out.add_at(&ring, *x, *y, &e.neg());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_at_gamma_zero() {
        let w = Window::new(-4, 3, -4, 3);
        let d = delta_series(&Rational::zero(), w, 2).unwrap();
        // Σ_k u^{-k-1} v^k: exponents (a, b) with a + b = -1
        for ((a, b), e) in d.terms() {
            assert_eq!(a + b, -1);
            assert!(e.is_one());
        }
        assert_eq!(d.terms().len(), 8);
    }

    #[test]
    fn one_over_x_times_x_is_one() {
        // (u - v + h)·ι(1/(u - v + h)) = 1 in each region
        let m = 3;
        let ring = HRing::new(m);
        let w = Window::new(-8, 1, -1, 8);
        let inv = region_expand(1, &Rational::one(), Region::UOverV, w, m).unwrap();
        let mut x = BiSeries::zero(Region::UOverV, w);
        x.add_at(&ring, 1, 0, &HPoly::one(m));
        x.add_at(&ring, 0, 1, &HPoly::from_ints(&[-1], m));
        x.add_at(&ring, 0, 0, &HPoly::h(m));
        let p = x.mul(&inv, &ring).unwrap();
        // exact where a ≥ -7 and b ≤ 7 and h-degree stays in range
        for ((a, b), e) in p.terms() {
            if *a > -6 && *b < 6 {
                assert!((*a, *b) == (0, 0) && e.is_one(), "stray term {a} {b} {e}");
            }
        }
    }
}
