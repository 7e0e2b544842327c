//! Linear operators on `(ℂ^n)^{⊗k}` with entries in any coefficient ring,
//! and the R-matrix identities: Yang–Baxter, unitarity, Jucys fusion and
//! crossing symmetry.
//!
//! Multi-indices are 0-based internally and encoded in mixed radix with
//! factor 1 most significant.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fnorm::FCoeffs;
use crate::report::{expect, timed, CheckRecord};
use crate::scalar::{
    Expansion, HPoly, MPoly, MPolyRing, QRing, RatFunc, RatRing, Rational, Ring, Series, SeriesRing, TruncatedSeries,
};

#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator<E> {
    n: usize,
    k: usize,
    entries: BTreeMap<(u32, u32), E>,
}

/// Operators [`build_operator`] knows how to construct.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorKind {
    Identity,
    /// Transposition of two factors.
    P,
    /// `Q = P^{t_a}`
    Q,
    /// `R̄(x) = I + (h/x)P` with `x` a rational function of `u`.
    RBar(RatFunc),
    /// Antisymmetrizer on all `k` factors.
    Antisymmetrizer,
}

impl<E: Clone + PartialEq + std::fmt::Debug> TensorOperator<E> {
    pub fn zero(n: usize, k: usize) -> Self {
        TensorOperator { n, k, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), E> {
        &self.entries
    }

    pub fn encode(&self, idx: &[usize]) -> u32 {
        idx.iter().fold(0u32, |acc, &i| acc * self.n as u32 + i as u32)
    }

    pub fn decode(&self, mut code: u32) -> Vec<usize> {
        let mut v = vec![0; self.k];
        for slot in v.iter_mut().rev() {
            *slot = (code % self.n as u32) as usize;
            code /= self.n as u32;
        }
        v
    }

    pub fn entry(&self, row: &[usize], col: &[usize]) -> Option<&E> {
        self.entries.get(&(self.encode(row), self.encode(col)))
    }

    pub fn add_entry<R: Ring<Elem = E>>(&mut self, ring: &R, row: u32, col: u32, e: &E) {
        if ring.is_zero(e) {
            return;
        }
        match self.entries.get_mut(&(row, col)) {
            Some(c) => {
                ring.add_assign(c, e);
                if ring.is_zero(c) {
                    self.entries.remove(&(row, col));
                }
            }
            None => {
                self.entries.insert((row, col), e.clone());
            }
        }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize, k: usize) -> Self {
        let mut op = Self::zero(n, k);
        for i in 0..op.dim() as u32 {
            op.add_entry(ring, i, i, &ring.one());
        }
        op
    }

    fn check_site(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.k {
            return Err(Error::IndexOutOfRange(format!("factor {a} of {}", self.k)));
        }
        Ok(())
    }

    /// `Σ f(i_a, i_b, j_a, j_b)` placed on factors `a ≠ b` (1-based), identity
    /// on the others.
    pub fn two_site<R, F>(ring: &R, n: usize, k: usize, a: usize, b: usize, f: F) -> Result<Self>
    where
        R: Ring<Elem = E>,
        F: Fn(usize, usize, usize, usize) -> E,
    {
        let mut op = Self::zero(n, k);
        op.check_site(a)?;
        op.check_site(b)?;
        if a == b {
            return Err(Error::IndexOutOfRange("two-site operator needs distinct factors".into()));
        }
        for row in 0..op.dim() as u32 {
            let i = op.decode(row);
            for ja in 0..n {
                for jb in 0..n {
                    let mut j = i.clone();
                    j[a - 1] = ja;
                    j[b - 1] = jb;
                    let e = f(i[a - 1], i[b - 1], ja, jb);
                    let col = op.encode(&j);
                    op.add_entry(ring, row, col, &e);
                }
            }
        }
        Ok(op)
    }

    /// `f(i, j)` acting on factor `a`, identity elsewhere.
    pub fn one_site<R, F>(ring: &R, n: usize, k: usize, a: usize, f: F) -> Result<Self>
    where
        R: Ring<Elem = E>,
        F: Fn(usize, usize) -> E,
    {
        let mut op = Self::zero(n, k);
        op.check_site(a)?;
        for row in 0..op.dim() as u32 {
            let i = op.decode(row);
            for ja in 0..n {
                let mut j = i.clone();
                j[a - 1] = ja;
                let col = op.encode(&j);
                op.add_entry(ring, row, col, &f(i[a - 1], ja));
            }
        }
        Ok(op)
    }

    /// `P_{ab}`
    pub fn permutation<R: Ring<Elem = E>>(ring: &R, n: usize, k: usize, a: usize, b: usize) -> Result<Self> {
        Self::two_site(ring, n, k, a, b, |ia, ib, ja, jb| {
            if ia == jb && ib == ja {
                ring.one()
            } else {
                ring.zero()
            }
        })
    }

    /// `α I + β P_{ab}`
    pub fn alpha_beta<R: Ring<Elem = E>>(
        ring: &R,
        n: usize,
        k: usize,
        a: usize,
        b: usize,
        alpha: &E,
        beta: &E,
    ) -> Result<Self> {
        Self::two_site(ring, n, k, a, b, |ia, ib, ja, jb| {
            let mut e = ring.zero();
            if ia == ja && ib == jb {
                e = ring.add(&e, alpha);
            }
            if ia == jb && ib == ja {
                e = ring.add(&e, beta);
            }
            e
        })
    }

    pub fn add<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for ((r, c), e) in &o.entries {
            out.add_entry(ring, *r, *c, e);
        }
        Ok(out)
    }

    pub fn sub<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.add(&o.map(|e| ring.neg(e)), ring)
    }

    pub fn map<F: FnMut(&E) -> E>(&self, mut f: F) -> Self {
        TensorOperator { n: self.n, k: self.k, entries: self.entries.iter().map(|(k, v)| (*k, f(v))).collect() }
    }

    pub fn map_to<T, F: FnMut(&E) -> T>(&self, mut f: F) -> TensorOperator<T> {
        TensorOperator { n: self.n, k: self.k, entries: self.entries.iter().map(|(k, v)| (*k, f(v))).collect() }
    }

    pub fn scale_q<R: Ring<Elem = E>>(&self, q: &Rational, ring: &R) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for ((r, c), e) in &self.entries {
            out.add_entry(ring, *r, *c, &ring.scale_q(e, q));
        }
        out
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.k != o.k {
            return Err(Error::ShapeMismatch(format!("({},{}) vs ({},{})", self.n, self.k, o.n, o.k)));
        }
        Ok(())
    }

    /// Operator product `self · o`; entry products keep `self`'s factor on
    /// the left, so noncommutative coefficient rings are handled correctly.
    pub fn compose<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.same_shape(o)?;
        let mut by_row: BTreeMap<u32, Vec<(u32, &E)>> = BTreeMap::new();
        for ((r, c), e) in &o.entries {
            by_row.entry(*r).or_default().push((*c, e));
        }
        let mut out = Self::zero(self.n, self.k);
        for ((i, j), a) in &self.entries {
            if let Some(row) = by_row.get(j) {
                for (l, b) in row {
                    out.add_entry(ring, *i, *l, &ring.mul(a, b)?);
                }
            }
        }
        Ok(out)
    }

    /// `A · self` for an operator `A` with rational entries.
    pub fn lmul_rational<R: Ring<Elem = E>>(&self, a: &TensorOperator<Rational>, ring: &R) -> Result<Self> {
        if self.n != a.n || self.k != a.k {
            return Err(Error::ShapeMismatch("rational factor".into()));
        }
        let mut by_row: BTreeMap<u32, Vec<(u32, &E)>> = BTreeMap::new();
        for ((r, c), e) in &self.entries {
            by_row.entry(*r).or_default().push((*c, e));
        }
        let mut out = Self::zero(self.n, self.k);
        for ((i, j), q) in &a.entries {
            if let Some(row) = by_row.get(j) {
                for (l, b) in row {
                    out.add_entry(ring, *i, *l, &ring.scale_q(b, q));
                }
            }
        }
        Ok(out)
    }

    /// Transpose on factor `a` (1-based).
    pub fn partial_transpose<R: Ring<Elem = E>>(&self, a: usize, ring: &R) -> Result<Self> {
        self.check_site(a)?;
        let mut out = Self::zero(self.n, self.k);
        for ((r, c), e) in &self.entries {
            let mut i = self.decode(*r);
            let mut j = self.decode(*c);
            std::mem::swap(&mut i[a - 1], &mut j[a - 1]);
            out.add_entry(ring, self.encode(&i), self.encode(&j), e);
        }
        Ok(out)
    }

    /// Trace over the listed factors (1-based); the remaining factors keep
    /// their relative order.
    pub fn partial_trace<R: Ring<Elem = E>>(&self, sites: &[usize], ring: &R) -> Result<Self> {
        for &a in sites {
            self.check_site(a)?;
        }
        let keep: Vec<usize> = (1..=self.k).filter(|a| !sites.contains(a)).collect();
        let mut out = Self::zero(self.n, keep.len());
        for ((r, c), e) in &self.entries {
            let i = self.decode(*r);
            let j = self.decode(*c);
            if sites.iter().all(|&a| i[a - 1] == j[a - 1]) {
                let ri: Vec<usize> = keep.iter().map(|&a| i[a - 1]).collect();
                let rj: Vec<usize> = keep.iter().map(|&a| j[a - 1]).collect();
                let (x, y) = (out.encode(&ri), out.encode(&rj));
                out.add_entry(ring, x, y, e);
            }
        }
        Ok(out)
    }

    pub fn trace<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        let mut acc = ring.zero();
        for ((r, c), e) in &self.entries {
            if r == c {
                ring.add_assign(&mut acc, e);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inverse of `I + X` with `X` nilpotent in the coefficient ring.
    pub fn inverse_unipotent<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        let id = Self::identity(ring, self.n, self.k);
        let x = self.sub(&id, ring)?.map(|e| ring.neg(e));
        let mut term = id.clone();
        let mut acc = id;
        for _ in 0..=ring.nilpotency_bound() {
            term = term.compose(&x, ring)?;
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term, ring)?;
        }
        Err(Error::NotUnit("operator is not unipotent".into()))
    }

    /// First nonzero entry, for witnesses.
    pub fn first_entry(&self) -> Option<(Vec<usize>, Vec<usize>, &E)> {
        self.entries.iter().next().map(|((r, c), e)| (self.decode(*r), self.decode(*c), e))
    }
}

/// Antisymmetrizer `A_k = (1/k!) Σ sgn(σ) σ` on `(ℂ^n)^{⊗k}`, computed from
/// the permutation action on basis tensors.
pub fn antisymmetrizer(n: usize, k: usize) -> TensorOperator<Rational> {
    let mut op = TensorOperator::zero(n, k);
    let kf = (1..=k as i64).product::<i64>();
    let w = Rational::new(1, kf);
    for perm in permutations(k) {
        let s = if sign(&perm) > 0 { w.clone() } else { -&w };
        for col in 0..op.dim() as u32 {
            let j = op.decode(col);
            let i: Vec<usize> = (0..k).map(|a| j[perm[a]]).collect();
            let row = op.encode(&i);
            op.add_entry(&QRing, row, col, &s);
        }
    }
    op
}

/// All permutations of `0..k`, lexicographic.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Sign of a permutation given as an image list.
pub fn sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Builds a named operator with rational-function entries, placed on factors
/// `(a, b)` (ignored for the identity and the antisymmetrizer).
pub fn build_operator(kind: &OperatorKind, a: usize, b: usize, n: usize, k: usize) -> Result<TensorOperator<RatFunc>> {
    let ring = RatRing;
    match kind {
        OperatorKind::Identity => Ok(TensorOperator::identity(&ring, n, k)),
        OperatorKind::Antisymmetrizer => Ok(antisymmetrizer(n, k).map_to(|q| RatFunc::from_upoly(crate::scalar::UPoly::constant(q.clone())))),
        _ if !(1 <= a && a < b && b <= k) => Err(Error::IndexOutOfRange(format!("placement ({a},{b}) in {k} factors"))),
        OperatorKind::P => TensorOperator::permutation(&ring, n, k, a, b),
        OperatorKind::Q => TensorOperator::permutation(&ring, n, k, a, b)?.partial_transpose(a, &ring),
        OperatorKind::RBar(x) => {
            let beta = RatFunc::h().div(x)?;
            TensorOperator::alpha_beta(&ring, n, k, a, b, &RatFunc::one(), &beta)
        }
    }
}

/// `R(u + γh)` on factors `(a, b)` as `u^{-1}`-series: `f(u+γh)(I + h/(u+γh) P)`
/// when `f` is given, and the unnormalized `R̄` otherwise.
pub fn r_series(
    n: usize,
    k: usize,
    a: usize,
    b: usize,
    gamma: &Rational,
    f: Option<&FCoeffs>,
    order: u32,
    m: usize,
) -> Result<TensorOperator<TruncatedSeries>> {
    let ring = SeriesRing::new(Expansion::InvU, order, m);
    let base = ring.base_ring();
    // h/u shifted to h/(u + γh)
    let h_over_u = Series::from_terms(&base, Expansion::InvU, order, [(1, HPoly::h(m))]);
    let beta0 = h_over_u.shift(gamma, &base)?;
    let fser = match f {
        Some(f) => f.series(order, m)?.shift(gamma, &base)?,
        None => ring.one(),
    };
    let beta = fser.mul(&beta0, &base)?;
    TensorOperator::alpha_beta(&ring, n, k, a, b, &fser, &beta)
}

/// Yang–Baxter equation (after clearing denominators, and at random rational
/// points) and unitarity (as a rational-function identity).
pub fn check_ybe_unitarity(n: usize, seed: u64, points: usize) -> Vec<CheckRecord> {
    let suite = "rmatrix";
    let mut out = Vec::new();
    out.push(timed(suite, &format!("ybe-cleared/n={n}"), "Yang-Baxter equation", || {
        // variables (u, v, h); x R̄(x) = xI + hP
        let ring = MPolyRing { nvars: 3, h_var: 2 };
        let var = |i| MPoly::var(i, 3);
        let h = var(2);
        let r = |a, b, x: MPoly| TensorOperator::alpha_beta(&ring, n, 3, a, b, &x, &h);
        let u_minus_v = var(0).add(&var(1).neg());
        let lhs = r(1, 2, u_minus_v.clone())?.compose(&r(1, 3, var(0))?, &ring)?.compose(&r(2, 3, var(1))?, &ring)?;
        let rhs = r(2, 3, var(1))?.compose(&r(1, 3, var(0))?, &ring)?.compose(&r(1, 2, u_minus_v)?, &ring)?;
        let d = lhs.sub(&rhs, &ring)?;
        Ok(expect(d.is_zero(), || format!("entry {:?}", d.first_entry())))
    }));
    out.push(timed(suite, &format!("ybe-points/n={n}"), "Yang-Baxter equation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..points {
            let mut pick = || Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=9));
            let (u, v, h) = (pick(), pick(), pick());
            if u.is_zero() || v.is_zero() || u == v {
                continue;
            }
            let r = |a, b, x: &Rational| {
                TensorOperator::alpha_beta(&QRing, n, 3, a, b, &Rational::one(), &(&h / x))
            };
            let uv = &u - &v;
            let lhs = r(1, 2, &uv)?.compose(&r(1, 3, &u)?, &QRing)?.compose(&r(2, 3, &v)?, &QRing)?;
            let rhs = r(2, 3, &v)?.compose(&r(1, 3, &u)?, &QRing)?.compose(&r(1, 2, &uv)?, &QRing)?;
            if lhs != rhs {
                return Ok(Some(format!("fails at (u, v, h) = ({u}, {v}, {h})")));
            }
        }
        Ok(None)
    }));
    out.push(timed(suite, &format!("unitarity/n={n}"), "unitarity", || {
        let ring = RatRing;
        let u = RatFunc::x();
        let r12 = build_operator(&OperatorKind::RBar(u.clone()), 1, 2, n, 2)?;
        let r21 = build_operator(&OperatorKind::RBar(u.neg()), 1, 2, n, 2)?;
        let lhs = r12.compose(&r21, &ring)?;
        let h = RatFunc::h();
        let c = u.mul(&u).sub(&h.mul(&h)).div(&u.mul(&u))?;
        let rhs = TensorOperator::identity(&ring, n, 2).map(|e| e.mul(&c));
        let d = lhs.sub(&rhs, &ring)?;
        Ok(expect(d.is_zero(), || format!("entry {:?}", d.first_entry())))
    }));
    out
}

/// Lexicographic product `Π_{i<j} R̄_{ij}(u_i - u_j)` with `u_i = u + (i-1)h`.
pub fn jucys_product(n: usize, k: usize) -> Result<TensorOperator<RatFunc>> {
    let ring = RatRing;
    let mut acc = TensorOperator::identity(&ring, n, k);
    for i in 1..=k {
        for j in i + 1..=k {
            // u_i - u_j = (i - j) h
            let x = RatFunc::h().mul(&RatFunc::from_upoly(crate::scalar::UPoly::constant(Rational::from_int(
                i as i64 - j as i64,
            ))));
            acc = acc.compose(&build_operator(&OperatorKind::RBar(x), i, j, n, k)?, &ring)?;
        }
    }
    Ok(acc)
}

pub fn check_jucys(k: usize, n: usize) -> CheckRecord {
    timed("rmatrix", &format!("jucys/n={n}/k={k}"), "Jucys fusion", || {
        let prod = jucys_product(n, k)?;
        let kf = (1..=k as i64).product::<i64>();
        let target = antisymmetrizer(n, k).map_to(|q| RatFunc::from_upoly(crate::scalar::UPoly::constant(q * &Rational::from_int(kf))));
        let d = prod.sub(&target, &RatRing)?;
        Ok(expect(d.is_zero(), || format!("entry {:?}", d.first_entry())))
    })
}

/// Residual of the crossing relations, `None` when both vanish.
pub fn crossing_residual(n: usize, order: u32, m: usize, f: Option<&FCoeffs>) -> Result<Option<String>> {
    let ring = SeriesRing::new(Expansion::InvU, order, m);
    let r = r_series(n, 2, 1, 2, &Rational::zero(), f, order, m)?;
    let r_shift = r_series(n, 2, 1, 2, &Rational::from_int(-(n as i64)), f, order, m)?;
    let r_inv = r.inverse_unipotent(&ring)?;
    let id = TensorOperator::identity(&ring, n, 2);
    let first = r_inv.partial_transpose(2, &ring)?.compose(&r_shift.partial_transpose(2, &ring)?, &ring)?;
    let second = r_shift.partial_transpose(1, &ring)?.compose(&r_inv.partial_transpose(1, &ring)?, &ring)?;
    for (name, op) in [("t2", first), ("t1", second)] {
        let d = op.sub(&id, &ring)?;
        if let Some((i, j, s)) = d.first_entry() {
            let (deg, c) = s.terms().iter().next().expect("nonzero");
            return Ok(Some(format!(
                "{name}: entry {i:?},{j:?} has residual {c} at u^-{deg} (lowest h-degree {:?})",
                c.valuation()
            )));
        }
    }
    Ok(None)
}

pub fn check_crossing(n: usize, m: usize, order: u32, f: &FCoeffs) -> Vec<CheckRecord> {
    vec![
        timed("rmatrix", &format!("crossing/n={n}/M={m}/N={order}"), "crossing symmetry", || {
            crossing_residual(n, order, m, Some(f))
        }),
        timed("rmatrix", &format!("crossing-control/n={n}/M={m}/N={order}"), "crossing symmetry (negative control)", || {
            let r = crossing_residual(n, order, m, None)?;
            Ok(expect(r.is_some(), || "unnormalized R-matrix unexpectedly crossing-symmetric".into()))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnorm::solve_f;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn permutation_matrix_n2() {
        let p = TensorOperator::permutation(&QRing, 2, 2, 1, 2).unwrap();
        assert_eq!(p.entries().len(), 4);
        assert_eq!(p.entry(&[0, 1], &[1, 0]), Some(&q(1)));
        assert_eq!(p.entry(&[0, 0], &[0, 0]), Some(&q(1)));
        assert_eq!(p.entry(&[0, 1], &[0, 1]), None);
        let p2 = p.compose(&p, &QRing).unwrap();
        assert_eq!(p2, TensorOperator::identity(&QRing, 2, 2));
    }

    #[test]
    fn rbar_n2_matches_explicit_matrix() {
        let u = RatFunc::x();
        let r = build_operator(&OperatorKind::RBar(u.clone()), 1, 2, 2, 2).unwrap();
        let diag = u.add(&RatFunc::h()).div(&u).unwrap();
        let off = RatFunc::h().div(&u).unwrap();
        assert_eq!(r.entry(&[0, 0], &[0, 0]), Some(&diag));
        assert_eq!(r.entry(&[1, 1], &[1, 1]), Some(&diag));
        assert_eq!(r.entry(&[0, 1], &[0, 1]), Some(&RatFunc::one()));
        assert_eq!(r.entry(&[0, 1], &[1, 0]), Some(&off));
        assert_eq!(r.entries().len(), 6);
    }

    #[test]
    fn antisymmetrizer_basics() {
        let a2 = antisymmetrizer(2, 2);
        let p = TensorOperator::permutation(&QRing, 2, 2, 1, 2).unwrap();
        let expect = TensorOperator::identity(&QRing, 2, 2).sub(&p, &QRing).unwrap().scale_q(&Rational::new(1, 2), &QRing);
        assert_eq!(a2, expect);
        for (n, k) in [(2, 2), (3, 2), (3, 3), (4, 3)] {
            let a = antisymmetrizer(n, k);
            assert_eq!(a.compose(&a, &QRing).unwrap(), a);
            for s in 1..k {
                let p = TensorOperator::permutation(&QRing, n, k, s, s + 1).unwrap();
                assert_eq!(p.compose(&a, &QRing).unwrap(), a.scale_q(&q(-1), &QRing));
            }
        }
        // tr A_n = 1
        for n in 1..=4 {
            assert_eq!(antisymmetrizer(n, n).trace(&QRing), q(1));
        }
    }

    #[test]
    fn q_squared_is_n_q() {
        for n in 2..=4 {
            let qop = TensorOperator::permutation(&QRing, n, 2, 1, 2).unwrap().partial_transpose(1, &QRing).unwrap();
            assert_eq!(qop.compose(&qop, &QRing).unwrap(), qop.scale_q(&q(n as i64), &QRing));
        }
    }

    #[test]
    fn partial_trace_of_identity() {
        let id = TensorOperator::identity(&QRing, 3, 3);
        assert_eq!(id.trace(&QRing), q(27));
        let t = id.partial_trace(&[2], &QRing).unwrap();
        assert_eq!(t, TensorOperator::identity(&QRing, 3, 2).scale_q(&q(3), &QRing));
        // tr_2 P_12 = I
        let p = TensorOperator::permutation(&QRing, 3, 2, 1, 2).unwrap();
        assert_eq!(p.partial_trace(&[2], &QRing).unwrap(), TensorOperator::identity(&QRing, 3, 1));
    }

    #[test]
    fn rejects_bad_placement() {
        assert!(build_operator(&OperatorKind::P, 2, 1, 2, 2).is_err());
        assert!(build_operator(&OperatorKind::P, 1, 3, 2, 2).is_err());
    }

    #[test]
    fn jucys_k2_is_one_minus_p() {
        let j = jucys_product(3, 2).unwrap();
        let p = build_operator(&OperatorKind::P, 1, 2, 3, 2).unwrap();
        let expect = TensorOperator::identity(&RatRing, 3, 2).sub(&p, &RatRing).unwrap();
        assert_eq!(j, expect);
        assert_eq!(jucys_product(3, 1).unwrap(), TensorOperator::identity(&RatRing, 3, 1));
    }

    #[test]
    fn identities_hold() {
        for r in check_ybe_unitarity(2, 7, 5) {
            assert!(r.passed(), "{r:?}");
        }
        assert!(check_jucys(3, 3).passed());
        let f = solve_f(2, 4).unwrap();
        for r in check_crossing(2, 4, 4, &f) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn crossing_at_h_zero_is_trivial() {
        // with M = 0 every R-matrix is the identity
        let f = solve_f(3, 0).unwrap();
        assert_eq!(crossing_residual(3, 3, 0, Some(&f)).unwrap(), None);
        assert_eq!(crossing_residual(3, 3, 0, None).unwrap(), None);
    }
}
