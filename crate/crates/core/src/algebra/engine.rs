//! PBW normal forms modulo `h^{M+1}` and the plus-mode cutoff.
//!
//! Multiplying a generator `g` into a normal monomial `m_0 m_1 …` with
//! `g > m_0` uses the pair rule `g m_0 = Σ c_t w_t` and then multiplies the
//! generators of each word `w_t` right to left into `m_1 …`. Each call carries
//! a budget: the highest power of `h` still needed. Rules are cached per
//! budget, and the quadratic corrections of a rule at budget `b` only need
//! rules at budget `b - 1`, so the recursion is well founded.
//!
//! Monomials containing a plus mode `r ≥ p` span a left ideal, since brackets
//! between plus modes never lower the largest index and moving plus modes past
//! minus modes only produces smaller plus modes. They are dropped.

use std::sync::Arc;

use dashmap::DashMap;
use smallvec::smallvec;

use crate::algebra::config::AlgebraConfig;
use crate::algebra::element::Element;
use crate::algebra::generator::{Gen, Monomial};
use crate::algebra::rules::{minus_bracket, plus_bracket, MixedRho, RawTerm};
use crate::error::{Error, Result};
use crate::scalar::{HPoly, Rational, Ring};

pub struct Algebra {
    cfg: AlgebraConfig,
    rho: MixedRho,
    rules: DashMap<(Gen, Gen, usize), Arc<Element>>,
    products: DashMap<(Gen, Monomial, usize), Arc<Element>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra").field("cfg", &self.cfg).finish()
    }
}

impl Algebra {
    pub fn new(cfg: AlgebraConfig) -> Result<Self> {
        cfg.validate()?;
        let rho = MixedRho::new(&cfg)?;
        Ok(Algebra { cfg, rho, rules: DashMap::new(), products: DashMap::new() })
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.cfg
    }

    pub fn n(&self) -> usize {
        self.cfg.n
    }

    /// The `h`-order `M`.
    pub fn m(&self) -> usize {
        self.cfg.m
    }

    pub fn cache_sizes(&self) -> (usize, usize) {
        (self.rules.len(), self.products.len())
    }

    fn check(&self, g: Gen) -> Result<()> {
        let (i, j) = (g.i(), g.j());
        if i == 0 || j == 0 || i > self.cfg.n || j > self.cfg.n {
            return Err(Error::IndexOutOfRange(format!("{g:?} with n = {}", self.cfg.n)));
        }
        if g.is_minus() && -g.r() > self.cfg.minus_limit() {
            return Err(Error::WindowEscape { index: g.r(), limit: self.cfg.minus_limit() });
        }
        Ok(())
    }

    fn cut(&self, g: Gen) -> bool {
        g.is_plus() && g.r() >= self.cfg.p as i64
    }

    /// `l_ij^{(r)}` as an element (zero above the cutoff).
    pub fn gen(&self, i: usize, j: usize, r: i64) -> Result<Element> {
        let g = Gen::new(i, j, r);
        self.check(g)?;
        Ok(if self.cut(g) { Element::zero() } else { Element::gen(g, self.m()) })
    }

    pub fn one(&self) -> Element {
        Element::one(self.m())
    }

    pub fn scalar(&self, q: Rational) -> Element {
        Element::scalar(HPoly::constant(q, self.m()))
    }

    pub fn h(&self) -> Element {
        Element::scalar(HPoly::h(self.m()))
    }

    /// Normal form of `g g2` for a disordered pair, at budget `b`.
    pub fn rule(&self, g: Gen, g2: Gen, b: usize) -> Result<Arc<Element>> {
        debug_assert!(g > g2);
        if let Some(e) = self.rules.get(&(g, g2, b)) {
            return Ok(e.clone());
        }
        let m = self.m();
        let mut out = Element::monomial(smallvec![g2, g], HPoly::one(m));
        let raw: Vec<RawTerm> = match (g.is_plus(), g2.is_plus()) {
            (true, true) => plus_bracket(g, g2, m),
            (false, false) => minus_bracket(g, g2, m),
            (true, false) => {
                out = Element::zero();
                self.rho.mixed(g, g2, m)?
            }
            (false, true) => unreachable!("minus modes precede plus modes"),
        };
        for (c, w) in raw {
            let v = match c.valuation() {
                Some(v) if v <= b => v,
                _ => continue,
            };
            let prod = self.word(&w, b - v)?;
            out.add_scaled(&prod, &c.clip(b));
        }
        let out = Arc::new(out.clip(b));
        self.rules.insert((g, g2, b), out.clone());
        Ok(out)
    }

    pub(crate) fn insert_rule(&self, g: Gen, g2: Gen, e: Element) {
        self.rules.insert((g, g2, self.m()), Arc::new(e));
    }

    /// Normal form of an arbitrary word at budget `b`.
    pub fn word(&self, w: &[Gen], b: usize) -> Result<Element> {
        let mut e = Element::one(self.m());
        for &g in w.iter().rev() {
            e = self.mul_gen(g, &e, b)?;
        }
        Ok(e)
    }

    /// `g · x` at budget `b`.
    pub fn mul_gen(&self, g: Gen, x: &Element, b: usize) -> Result<Element> {
        let mut out = Element::zero();
        for (mono, c) in x.terms() {
            let v = match c.valuation() {
                Some(v) if v <= b => v,
                _ => continue,
            };
            let p = self.mul_gen_mono(g, mono, b - v)?;
            out.add_scaled(&p, c);
        }
        Ok(out.clip(b))
    }

    /// `g · mono` for a normal `mono`, at budget `b`.
    pub fn mul_gen_mono(&self, g: Gen, mono: &[Gen], b: usize) -> Result<Arc<Element>> {
        self.check(g)?;
        let m = self.m();
        // A plus mode above the cutoff only survives by moving left past
        // minus modes, which lowers its index.
        if self.cut(g) && mono.first().map_or(true, |&m0| m0.is_plus() || g <= m0) {
            return Ok(Arc::new(Element::zero()));
        }
        if mono.first().map_or(true, |&m0| g <= m0) {
            let mut w = Monomial::with_capacity(mono.len() + 1);
            w.push(g);
            w.extend_from_slice(mono);
            return Ok(Arc::new(Element::monomial(w, HPoly::one(m))));
        }
        let key = (g, Monomial::from_slice(mono), b);
        if let Some(e) = self.products.get(&key) {
            return Ok(e.clone());
        }
        let rule = self.rule(g, mono[0], b)?;
        let rest = &mono[1..];
        let mut out = Element::zero();
        for (w, c) in rule.terms() {
            let v = match c.valuation() {
                Some(v) if v <= b => v,
                _ => continue,
            };
            let bb = b - v;
            let mut e = Element::monomial(Monomial::from_slice(rest), HPoly::one(m));
            for &x in w.iter().rev() {
                e = self.mul_gen(x, &e, bb)?;
            }
            out.add_scaled(&e, c);
        }
        let out = Arc::new(out.clip(b));
        self.products.insert(key, out.clone());
        Ok(out)
    }

    /// `x · y` in normal form. Only the class of `y` modulo the cutoff ideal
    /// matters; `x` is taken literally, so it must not have lost terms to the
    /// cutoff (use [`nf`](Self::nf) on words when in doubt).
    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        let m = self.m();
        let mut out = Element::zero();
        for (mx, cx) in x.terms() {
            let v = match cx.valuation() {
                Some(v) if v <= m => v,
                _ => continue,
            };
            let mut e = y.clip(m - v);
            for &g in mx.iter().rev() {
                e = self.mul_gen(g, &e, m - v)?;
            }
            out.add_scaled(&e, cx);
        }
        Ok(out)
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        Ok(self.mul(x, y)?.sub(&self.mul(y, x)?))
    }

    /// Normal form of a word given as generators, at full order.
    pub fn nf(&self, w: &[Gen]) -> Result<Element> {
        self.word(w, self.m())
    }

    /// Normal form of `Σ c_t w_t` for arbitrary words `w_t`.
    pub fn eval_raw(&self, raw: &[RawTerm]) -> Result<Element> {
        let m = self.m();
        let mut out = Element::zero();
        for (c, w) in raw {
            let v = match c.valuation() {
                Some(v) if v <= m => v,
                _ => continue,
            };
            out.add_scaled(&self.word(w, m - v)?, c);
        }
        Ok(out)
    }

    pub fn product(&self, xs: &[&Element]) -> Result<Element> {
        let mut e = self.one();
        for x in xs {
            e = self.mul(&e, x)?;
        }
        Ok(e)
    }
}

impl Ring for Algebra {
    type Elem = Element;

    fn zero(&self) -> Element {
        Element::zero()
    }

    fn one(&self) -> Element {
        Element::one(self.m())
    }

    fn is_zero(&self, a: &Element) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        a.add(b)
    }

    fn neg(&self, a: &Element) -> Element {
        a.neg()
    }

    fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        Algebra::mul(self, a, b)
    }

    fn scale(&self, a: &Element, s: &HPoly) -> Element {
        a.scale(s)
    }

    fn embed(&self, s: &HPoly) -> Element {
        Element::scalar(s.with_truncation(self.m()))
    }

    fn h_order(&self) -> usize {
        self.m()
    }

    /// A rational constant plus an `h`-divisible, hence nilpotent, rest.
    fn unit_split(&self, a: &Element) -> Option<(Rational, Element)> {
        let q = a.scalar_part(self.m()).coeff(0);
        let rest = a.sub(&self.scalar(q.clone()));
        match rest.valuation() {
            Some(0) => None,
            _ => Some((q, rest)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::config::Normalization;

    fn alg(norm: Normalization) -> Algebra {
        Algebra::new(AlgebraConfig::new(2, Rational::from_int(-2), norm, 3, 4, 3, 5).unwrap()).unwrap()
    }

    fn g(i: usize, j: usize, r: i64) -> Gen {
        Gen::new(i, j, r)
    }

    #[test]
    fn hand_computed_plus_reordering() {
        // l22(1) l11(1) = l11(1) l22(1) + h l12(1) l21(0) - h l12(0) l21(1)
        let a = alg(Normalization::Normalized);
        let lhs = a.nf(&[g(2, 2, 1), g(1, 1, 1)]).unwrap();
        let m = a.m();
        let mut rhs = Element::monomial(smallvec![g(1, 1, 1), g(2, 2, 1)], HPoly::one(m));
        rhs.add_term(smallvec![g(1, 2, 1), g(2, 1, 0)], &HPoly::h(m));
        rhs.add_term(smallvec![g(1, 2, 0), g(2, 1, 1)], &HPoly::h(m).neg());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_modes_act_by_gl_n() {
        let a = alg(Normalization::Normalized);
        for (i, j, k, l) in [(1, 2, 2, 1), (1, 1, 1, 2), (2, 1, 1, 1), (1, 2, 2, 2)] {
            for s in [-2, -1, 0, 1, 3] {
                let x = a.gen(i, j, 0).unwrap();
                let y = a.gen(k, l, s).unwrap();
                let br = a.bracket(&x, &y).unwrap();
                let mut want = Element::zero();
                if k == j {
                    want = want.add(&a.gen(i, l, s).unwrap());
                }
                if i == l {
                    want = want.sub(&a.gen(k, j, s).unwrap());
                }
                assert_eq!(br, want, "[l{i}{j}(0), l{k}{l}({s})]");
            }
        }
    }

    #[test]
    fn cutoff_drops_high_plus_modes() {
        let a = alg(Normalization::Unnormalized);
        assert!(a.gen(1, 1, 5).unwrap().is_zero());
        assert!(matches!(a.gen(1, 1, -20), Err(Error::WindowEscape { .. })));
    }
}
