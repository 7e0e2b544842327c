//! Quadratic relations between single modes, read off from the RTT relations.
//!
//! *Same sign.* Clearing denominators in `R̄(u-v) L_1(u) L_2(v) = L_2(v) L_1(u)
//! R̄(u-v)` gives `(u-v)[L_ij(u), L_kl(v)] = h(L_kj(v) L_il(u) - L_kj(u) L_il(v))`,
//! and comparing coefficients telescopes to a bracket whose quadratic
//! corrections carry one power of `h` and never raise the largest mode index.
//! The scalar normalization cancels, so these are the same for `R` and `R̄`.
//!
//! *Mixed.* Writing `L⁺ = I - hT⁺`, `L⁻ = I + hT⁻` and
//! `Z(W) = R(x_1)^{-1} W R(x_2)` with `x_{1,2} = u - v ∓ hc/2`, the relation
//! `L⁺_1 L⁻_2 = Z(L⁻_2 L⁺_1)` becomes
//!
//! `T⁺_1 T⁻_2 = Z(T⁻_2 T⁺_1) + h^{-2}(I - Z(I)) + h^{-1}(T⁻_2 - Z(T⁻_2) - T⁺_1 + Z(T⁺_1))`.
//!
//! Every right-hand term is already ordered minus-before-plus, so one
//! coefficient extraction in the region `|u| > |v|` is the normal form of
//! `l_ij^{(r)} l_kl^{(-s)}`. `Z` splits into the four scalar series
//! `ρ_II, ρ_IP, ρ_PI, ρ_PP` (coefficients of `W`, `WP`, `PW`, `PWP`).

use dashmap::DashMap;
use smallvec::smallvec;

use crate::algebra::config::{AlgebraConfig, Normalization};
use crate::algebra::generator::{Gen, Monomial};
use crate::error::Result;
use crate::fnorm::solve_f;
use crate::scalar::{HPoly, Rational};

/// A coefficient times a (not necessarily ordered) word.
pub type RawTerm = (HPoly, Monomial);

fn delta(a: usize, b: usize) -> bool {
    a == b
}

fn push(out: &mut Vec<RawTerm>, c: HPoly, w: Monomial) {
    if !c.is_zero() {
        out.push((c, w));
    }
}

/// `[l_ij^{(r)}, l_kl^{(s)}]` for `0 ≤ r, s`, as raw terms.
pub fn plus_bracket(g: Gen, g2: Gen, m: usize) -> Vec<RawTerm> {
    let (r, s) = (g.r(), g2.r());
    if r > s {
        return plus_bracket(g2, g, m).into_iter().map(|(c, w)| (c.neg(), w)).collect();
    }
    let (i, j, k, l) = (g.i(), g.j(), g2.i(), g2.j());
    let mut out = Vec::new();
    let one = HPoly::one(m);
    if delta(k, j) {
        push(&mut out, one.clone(), smallvec![Gen::new(i, l, r + s)]);
    }
    if delta(i, l) {
        push(&mut out, one.neg(), smallvec![Gen::new(k, j, r + s)]);
    }
    let h = HPoly::h(m);
    for t in 1..=r {
        push(&mut out, h.clone(), smallvec![Gen::new(k, j, s + r - t), Gen::new(i, l, t - 1)]);
        push(&mut out, h.neg(), smallvec![Gen::new(k, j, t - 1), Gen::new(i, l, s + r - t)]);
    }
    out
}

/// `[l_ij^{(-a)}, l_kl^{(-b)}]` for `a, b ≥ 1`, as raw terms.
pub fn minus_bracket(g: Gen, g2: Gen, m: usize) -> Vec<RawTerm> {
    let (a, b) = (-g.r(), -g2.r());
    if b > a {
        return minus_bracket(g2, g, m).into_iter().map(|(c, w)| (c.neg(), w)).collect();
    }
    let (i, j, k, l) = (g.i(), g.j(), g2.i(), g2.j());
    let mn = |p: usize, q: usize, x: i64| Gen::new(p, q, -x);
    let mut out = Vec::new();
    let one = HPoly::one(m);
    if delta(k, j) {
        push(&mut out, one.clone(), smallvec![mn(i, l, a + b)]);
    }
    if delta(i, l) {
        push(&mut out, one.neg(), smallvec![mn(k, j, a + b)]);
    }
    let h = HPoly::h(m);
    for t in 0..b {
        push(&mut out, h.clone(), smallvec![mn(k, j, b - t), mn(i, l, a + 1 + t)]);
        push(&mut out, h.neg(), smallvec![mn(k, j, a + 1 + t), mn(i, l, b - t)]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Part {
    II,
    IP,
    PI,
    PP,
}

const PARTS: [Part; 4] = [Part::II, Part::IP, Part::PI, Part::PP];

/// The expansion coefficients of `ρ_X` in `|u| > |v|`:
/// `ρ_X = Σ ρ_X[A, B] h^{A-B} u^{-A} v^{B}`.
pub struct MixedRho {
    /// Highest power of `h` ever needed.
    kmax: usize,
    gamma1: Rational,
    gamma2: Rational,
    /// Power series in `t` of the four single-variable factors.
    alpha1: Vec<Rational>,
    beta1: Vec<Rational>,
    alpha2: Vec<Rational>,
    beta2: Vec<Rational>,
    single: DashMap<(u8, usize, usize), Rational>,
    cache: DashMap<(Part, usize, usize), Rational>,
}

fn t_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn t_inv(a: &[Rational], len: usize) -> Vec<Rational> {
    let inv0 = a[0].recip().expect("unit constant term");
    let mut b = vec![Rational::zero(); len];
    b[0] = inv0.clone();
    for k in 1..len {
        let mut s = Rational::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &(&a[j] * &b[k - j]);
        }
        b[k] = -(s * &inv0);
    }
    b
}

fn t_shift(a: &[Rational], sign: i64, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (k, x) in a.iter().enumerate().take(len - 1) {
        out[k + 1] = x * &Rational::from_int(sign);
    }
    out
}

impl MixedRho {
    pub fn new(cfg: &AlgebraConfig) -> Result<Self> {
        let kmax = cfg.m + 2;
        let len = kmax + 1;
        let fhat = match cfg.normalization {
            Normalization::Unnormalized => {
                let mut v = vec![Rational::zero(); len];
                v[0] = Rational::one();
                v
            }
            Normalization::Normalized => {
                let mut v = solve_f(cfg.n, kmax)?.coeffs;
                v.truncate(len);
                v
            }
        };
        let mut one_minus_t2 = vec![Rational::zero(); len];
        one_minus_t2[0] = Rational::one();
        if len > 2 {
            one_minus_t2[2] = Rational::from_int(-1);
        }
        let alpha1 = t_inv(&t_mul(&fhat, &one_minus_t2, len), len);
        let beta1 = t_shift(&alpha1, -1, len);
        let beta2 = t_shift(&fhat, 1, len);
        let half = Rational::new(1, 2);
        Ok(MixedRho {
            kmax,
            gamma1: -(&cfg.c * &half),
            gamma2: &cfg.c * &half,
            alpha1,
            beta1,
            alpha2: fhat,
            beta2,
            single: DashMap::new(),
            cache: DashMap::new(),
        })
    }

    fn factor(&self, which: u8) -> (&[Rational], &Rational) {
        match which {
            0 => (&self.alpha1, &self.gamma1),
            1 => (&self.beta1, &self.gamma1),
            2 => (&self.alpha2, &self.gamma2),
            _ => (&self.beta2, &self.gamma2),
        }
    }

    /// Coefficient of `h^{A-B} u^{-A} v^B` in `Σ_k a_k h^k (u - v + γh)^{-k}`,
    /// using `(u - v + γh)^{-k} = Σ_j binom(k+j-1, j) (v - γh)^j u^{-k-j}`.
    fn single(&self, which: u8, a: usize, b: usize) -> Rational {
        if b > a || a - b > self.kmax {
            return Rational::zero();
        }
        if let Some(x) = self.single.get(&(which, a, b)) {
            return x.clone();
        }
        let (coef, gamma) = self.factor(which);
        let mut out = Rational::zero();
        if a == 0 {
            out = coef[0].clone();
        } else {
            // (v - γh)^j: choose v^B, remaining (-γ)^{j-B}
            let ng = -gamma.clone();
            for k in 1..=a.min(coef.len() - 1) {
                if coef[k].is_zero() {
                    continue;
                }
                let j = a - k;
                if j < b {
                    continue;
                }
                let term = coef[k].clone()
                    * Rational::binom_int((a - 1) as i64, j as i64)
                    * Rational::binom_int(j as i64, b as i64)
                    * ng.pow((j - b) as u32);
                out += &term;
            }
        }
        self.single.insert((which, a, b), out.clone());
        out
    }

    fn rho(&self, part: Part, a: usize, b: usize) -> Rational {
        if b > a || a - b > self.kmax {
            return Rational::zero();
        }
        if let Some(x) = self.cache.get(&(part, a, b)) {
            return x.clone();
        }
        let (f1, f2) = match part {
            Part::II => (0, 2),
            Part::IP => (0, 3),
            Part::PI => (1, 2),
            Part::PP => (1, 3),
        };
        let mut out = Rational::zero();
        for a1 in 0..=a {
            for b1 in 0..=b.min(a1) {
                let x = self.single(f1, a1, b1);
                if x.is_zero() {
                    continue;
                }
                out += &(x * self.single(f2, a - a1, b - b1));
            }
        }
        self.cache.insert((part, a, b), out.clone());
        out
    }

    /// `ρ_X[A, B] h^{A-B}` at truncation `m`.
    fn rho_h(&self, part: Part, a: usize, b: usize, m: usize) -> HPoly {
        if b > a {
            return HPoly::zero(m);
        }
        HPoly::monomial(self.rho(part, a, b), a - b, m)
    }

    /// Normal form of `l_ij^{(r)} l_kl^{(-s)}`, `r ≥ 0`, `s ≥ 1`, as ordered
    /// words with coefficients truncated at `h^{M+1}`.
    pub fn mixed(&self, g: Gen, g2: Gen, m: usize) -> Result<Vec<RawTerm>> {
        debug_assert!(g.is_plus() && g2.is_minus());
        let (i, j, r) = (g.i(), g.j(), g.r() as usize);
        let (k, l, s) = (g2.i(), g2.j(), (-g2.r()) as usize);
        let wide = m + 2;
        let mut out: Vec<RawTerm> = Vec::new();

        // Z(T⁻_2 T⁺_1)
        for part in PARTS {
            let (minus, plus) = match part {
                Part::II => ((k, l), (i, j)),
                Part::IP => ((k, j), (i, l)),
                Part::PI => ((i, l), (k, j)),
                Part::PP => ((i, j), (k, l)),
            };
            for a in 0..=r {
                for b in 0..s {
                    if a < b || a - b > m {
                        continue;
                    }
                    let c = self.rho_h(part, a, b, m);
                    if c.is_zero() {
                        continue;
                    }
                    let w: Monomial = smallvec![
                        Gen::new(minus.0, minus.1, -((s - b) as i64)),
                        Gen::new(plus.0, plus.1, (r - a) as i64)
                    ];
                    out.push((c, w));
                }
            }
        }

        // h^{-1}(-T⁺_1 + Z(T⁺_1) - Z(T⁻_2)), collected before dividing
        let mut linear: Vec<(HPoly, Gen)> = Vec::new();
        if s == 1 && k == l {
            linear.push((HPoly::one(wide).neg(), Gen::new(i, j, r as i64)));
        }
        for part in PARTS {
            let (pos, d) = match part {
                Part::II => ((i, j), k == l),
                Part::IP => ((i, l), k == j),
                Part::PI => ((k, j), i == l),
                Part::PP => ((k, l), i == j),
            };
            if d {
                for a in 0..=r {
                    let c = self.rho_h(part, a, s - 1, wide);
                    if !c.is_zero() {
                        linear.push((c, Gen::new(pos.0, pos.1, (r - a) as i64)));
                    }
                }
            }
            let (pos, d) = match part {
                Part::II => ((k, l), i == j),
                Part::IP => ((k, j), i == l),
                Part::PI => ((i, l), k == j),
                Part::PP => ((i, j), k == l),
            };
            if d {
                for b in 0..s {
                    let c = self.rho_h(part, r + 1, b, wide);
                    if !c.is_zero() {
                        linear.push((c.neg(), Gen::new(pos.0, pos.1, -((s - b) as i64))));
                    }
                }
            }
        }
        linear.sort_by_key(|(_, g)| *g);
        let mut idx = 0;
        while idx < linear.len() {
            let g0 = linear[idx].1;
            let mut acc = HPoly::zero(wide);
            while idx < linear.len() && linear[idx].1 == g0 {
                acc.add_assign(&linear[idx].0);
                idx += 1;
            }
            let c = acc.div_h(1)?.with_truncation(m);
            push(&mut out, c, smallvec![g0]);
        }

        // h^{-2}(I - Z(I))
        let mut c1 = HPoly::zero(wide);
        if i == j && k == l {
            c1.add_assign(&self.rho_h(Part::II, r + 1, s - 1, wide));
            c1.add_assign(&self.rho_h(Part::PP, r + 1, s - 1, wide));
        }
        if i == l && k == j {
            c1.add_assign(&self.rho_h(Part::IP, r + 1, s - 1, wide));
            c1.add_assign(&self.rho_h(Part::PI, r + 1, s - 1, wide));
        }
        let c1 = c1.neg().div_h(2)?.with_truncation(m);
        push(&mut out, c1, Monomial::new());
        Ok(out)
    }
}
