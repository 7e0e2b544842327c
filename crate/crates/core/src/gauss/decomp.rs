//! Generator matrices `L^±(u)`, their Gauss decomposition `L = F·H·E`, and the
//! quantum-determinant formulas for the Gauss components.

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::gauss::matrix::{quasideterminant, SeriesMatrix};
use crate::scalar::{Expansion, HPoly, Rational, Series};

/// Which half of the double a matrix series comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn direction(self) -> Expansion {
        match self {
            Sign::Plus => Expansion::InvU,
            Sign::Minus => Expansion::U,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

pub type AlgSeries = Series<Element>;
pub type AlgMatrix = SeriesMatrix<Element>;

/// `L^+(u) = I - h Σ_{r≥0} l^{(r)} u^{-r-1}` or `L^-(u) = I + h Σ_{s≥1}
/// l^{(-s)} u^{s-1}`, through `u^{∓order}`.
pub fn build_l(alg: &Algebra, sign: Sign, order: u32) -> Result<AlgMatrix> {
    let m = alg.m();
    let dir = sign.direction();
    let n = alg.n();
    SeriesMatrix::from_fn(n, n, dir, order, |i, j| {
        let mut s = Series::zero(dir, order);
        if i == j {
            s.add_at(alg, 0, &alg.one());
        }
        let degrees = match sign {
            Sign::Plus => 1..=order,
            Sign::Minus => 0..=order,
        };
        for d in degrees {
            let (r, c) = match sign {
                Sign::Plus => (d as i64 - 1, -1),
                Sign::Minus => (-(d as i64) - 1, 1),
            };
            let g = alg.gen(i + 1, j + 1, r)?;
            s.add_at(alg, d, &g.scale(&HPoly::monomial(Rational::from_int(c), 1, m)));
        }
        Ok(s)
    })
}

/// The factors of `L = F·H·E`: `F` lower unitriangular (entries `f_ji`), `H`
/// diagonal (`k_i`), `E` upper unitriangular (`e_ij`).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussData {
    pub f: AlgMatrix,
    pub h: AlgMatrix,
    pub e: AlgMatrix,
}

impl GaussData {
    pub fn n(&self) -> usize {
        self.h.rows()
    }

    pub fn order(&self) -> u32 {
        self.h.order()
    }

    /// `k_i(u)`, 1-based.
    pub fn k(&self, i: usize) -> &AlgSeries {
        self.h.get(i - 1, i - 1)
    }

    /// `e_ij(u)` for `i < j`, 1-based.
    pub fn e(&self, i: usize, j: usize) -> &AlgSeries {
        self.e.get(i - 1, j - 1)
    }

    /// `f_ji(u)` for `j > i`, 1-based.
    pub fn f(&self, j: usize, i: usize) -> &AlgSeries {
        self.f.get(j - 1, i - 1)
    }

    pub fn reconstruct(&self, alg: &Algebra) -> Result<AlgMatrix> {
        self.f.mul(&self.h, alg)?.mul(&self.e, alg)
    }

    pub fn truncated(&self, order: u32) -> Self {
        GaussData { f: self.f.truncated(order), h: self.h.truncated(order), e: self.e.truncated(order) }
    }

    /// First entry where two decompositions differ, as `(factor, i, j)`.
    pub fn first_difference(&self, o: &GaussData) -> Option<(char, usize, usize)> {
        let order = self.order().min(o.order());
        let (a, b) = (self.truncated(order), o.truncated(order));
        for (name, x, y) in [('F', &a.f, &b.f), ('H', &a.h, &b.h), ('E', &a.e, &b.e)] {
            for i in 0..x.rows() {
                for j in 0..x.cols() {
                    if x.get(i, j) != y.get(i, j) {
                        return Some((name, i + 1, j + 1));
                    }
                }
            }
        }
        None
    }

    fn empty(n: usize, dir: Expansion, order: u32, alg: &Algebra) -> Self {
        let id = SeriesMatrix::identity(alg, n, dir, order);
        GaussData { f: id.clone(), h: SeriesMatrix::zero(n, n, dir, order), e: id }
    }
}

/// Gauss decomposition by noncommutative elimination: peel off `k_t` and the
/// `t`-th row and column, then pass to the Schur complement.
pub fn gauss_elimination(alg: &Algebra, l: &AlgMatrix) -> Result<GaussData> {
    let n = l.rows();
    let mut out = GaussData::empty(n, l.direction(), l.order(), alg);
    let mut a = l.clone();
    for t in 0..n {
        let k = a.get(t, t).clone();
        let kinv = k.invert(alg)?;
        for j in t + 1..n {
            out.e.set(t, j, kinv.mul(a.get(t, j), alg)?);
        }
        for i in t + 1..n {
            out.f.set(i, t, a.get(i, t).mul(&kinv, alg)?);
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let x = a.get(i, j).sub(&out.f.get(i, t).mul(a.get(t, j), alg)?, alg)?;
                a.set(i, j, x);
            }
        }
        out.h.set(t, t, k);
    }
    Ok(out)
}

/// Gauss decomposition from the boxed quasideterminants of the leading
/// submatrices.
pub fn gauss_quasidet(alg: &Algebra, l: &AlgMatrix) -> Result<GaussData> {
    let n = l.rows();
    let mut out = GaussData::empty(n, l.direction(), l.order(), alg);
    for i in 0..n {
        let lead: Vec<usize> = (0..i).collect();
        let with = |x: usize| -> Vec<usize> { lead.iter().copied().chain([x]).collect() };
        let k = quasideterminant(&l.submatrix(&with(i), &with(i)), i, i, alg)?;
        let kinv = k.invert(alg)?;
        for j in i + 1..n {
            let e = quasideterminant(&l.submatrix(&with(i), &with(j)), i, i, alg)?;
            out.e.set(i, j, kinv.mul(&e, alg)?);
            let f = quasideterminant(&l.submatrix(&with(j), &with(i)), i, i, alg)?;
            out.f.set(j, i, f.mul(&kinv, alg)?);
        }
        out.h.set(i, i, k);
    }
    Ok(out)
}

/// Column quantum determinant `Σ_σ sgn σ m_{σ1,1}(u+γh) m_{σ2,2}(u+(γ+1)h) ⋯`.
pub fn column_qdet(alg: &Algebra, m: &AlgMatrix, gamma: &Rational) -> Result<AlgSeries> {
    let k = m.rows();
    if m.cols() != k {
        return Err(Error::ShapeMismatch("quantum determinant of a non-square matrix".into()));
    }
    // shift each column once, from the unshifted entries
    let mut cols = Vec::with_capacity(k);
    for b in 0..k {
        let g = gamma + &Rational::from_int(b as i64);
        let col: Result<Vec<AlgSeries>> = (0..k).map(|a| m.get(a, b).shift(&g, alg)).collect();
        cols.push(col?);
    }
    let order = cols.iter().flatten().map(Series::order).min().unwrap_or(m.order());
    let mut out = Series::zero(m.direction(), order);
    for (perm, sign) in permutations(k) {
        let mut t = cols[0][perm[0]].clone();
        for b in 1..k {
            t = t.mul(&cols[b][perm[b]], alg)?;
        }
        out = if sign > 0 { out.add(&t, alg)? } else { out.sub(&t, alg)? };
    }
    Ok(out)
}

/// Every permutation of `0..k` with its sign, in lexicographic order.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i32)>) {
        let k = used.len();
        if prefix.len() == k {
            let mut inv = 0;
            for a in 0..k {
                for b in a + 1..k {
                    if prefix[a] > prefix[b] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// The submatrix `L_{p,q}` (1-based): the leading `p×p` block when `p = q`,
/// rows `1..p` with columns `1..p-1, q` when `p < q`, and rows `1..q-1, p`
/// with columns `1..q` when `p > q`.
pub fn corner_submatrix(l: &AlgMatrix, p: usize, q: usize) -> AlgMatrix {
    let upto = |k: usize| -> Vec<usize> { (0..k).collect() };
    let bent = |k: usize, last: usize| -> Vec<usize> { (0..k - 1).chain([last - 1]).collect() };
    match p.cmp(&q) {
        std::cmp::Ordering::Equal => l.submatrix(&upto(p), &upto(p)),
        std::cmp::Ordering::Less => l.submatrix(&upto(p), &bent(p, q)),
        std::cmp::Ordering::Greater => l.submatrix(&bent(q, p), &upto(q)),
    }
}

/// `qdet L_{p,q}(u + γh)`, with `qdet L_{0,0} = 1`.
pub fn corner_qdet(alg: &Algebra, l: &AlgMatrix, p: usize, q: usize, gamma: &Rational) -> Result<AlgSeries> {
    if p == 0 && q == 0 {
        return Series::one(alg, l.direction(), l.order()).shift(gamma, alg);
    }
    column_qdet(alg, &corner_submatrix(l, p, q), gamma)
}

/// Gauss components as ratios of quantum determinants of corner submatrices,
/// all evaluated at `u - (i-1)h`.
pub fn gauss_qdet_ratios(alg: &Algebra, l: &AlgMatrix) -> Result<GaussData> {
    let n = l.rows();
    let mut parts: Vec<(usize, usize, AlgSeries)> = Vec::new();
    for i in 1..=n {
        let g = Rational::from_int(1 - i as i64);
        let dii = corner_qdet(alg, l, i, i, &g)?;
        let dprev = corner_qdet(alg, l, i - 1, i - 1, &g)?;
        let dii_inv = dii.invert(alg)?;
        parts.push((i, i, dii.mul(&dprev.invert(alg)?, alg)?));
        for j in i + 1..=n {
            parts.push((i, j, dii_inv.mul(&corner_qdet(alg, l, i, j, &g)?, alg)?));
            parts.push((j, i, corner_qdet(alg, l, j, i, &g)?.mul(&dii_inv, alg)?));
        }
    }
    let order = parts.iter().map(|(_, _, s)| s.order()).min().unwrap_or(l.order());
    let mut out = GaussData::empty(n, l.direction(), order, alg);
    for (i, j, s) in parts {
        let s = s.truncated(order);
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => out.h.set(i - 1, i - 1, s),
            std::cmp::Ordering::Less => out.e.set(i - 1, j - 1, s),
            std::cmp::Ordering::Greater => out.f.set(i - 1, j - 1, s),
        }
    }
    Ok(out)
}

/// `k_1(u) k_2(u+h) ⋯ k_n(u+(n-1)h)`.
pub fn gauss_qdet_product(alg: &Algebra, g: &GaussData) -> Result<AlgSeries> {
    let mut out = g.k(1).clone();
    for i in 2..=g.n() {
        out = out.mul(&g.k(i).shift(&Rational::from_int(i as i64 - 1), alg)?, alg)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraConfig, Normalization};

    fn alg(n: usize, m: usize, order: u32) -> Algebra {
        let cfg = AlgebraConfig::for_series(n, Rational::from_int(-2), Normalization::Unnormalized, m, order).unwrap();
        Algebra::new(cfg).unwrap()
    }

    #[test]
    fn generator_matrix_coefficients() {
        let a = alg(2, 2, 3);
        let lp = build_l(&a, Sign::Plus, 3).unwrap();
        let lm = build_l(&a, Sign::Minus, 3).unwrap();
        let mh = HPoly::monomial(Rational::from_int(-1), 1, 2);
        assert_eq!(lp.get(0, 1).coeff(&a, 3), a.gen(1, 2, 2).unwrap().scale(&mh));
        assert_eq!(lp.get(1, 1).coeff(&a, 0), a.one());
        assert_eq!(lm.get(1, 0).coeff(&a, 2), a.gen(2, 1, -3).unwrap().scale(&HPoly::h(2)));
        assert_eq!(lm.get(0, 0).coeff(&a, 0), a.one().add(&a.gen(1, 1, -1).unwrap().scale(&HPoly::h(2))));
        // at h = 0 the matrix is the identity
        for l in [&lp, &lm] {
            for i in 0..2 {
                for j in 0..2 {
                    for (d, e) in l.get(i, j).terms() {
                        let want = if i == j && *d == 0 { a.one() } else { Element::zero() };
                        assert_eq!(e.h_part(0), want.h_part(0));
                    }
                }
            }
        }
    }

    #[test]
    fn two_by_two_components() {
        let a = alg(2, 2, 3);
        for sign in [Sign::Plus, Sign::Minus] {
            let l = build_l(&a, sign, 3).unwrap();
            let g = gauss_elimination(&a, &l).unwrap();
            let k1i = l.get(0, 0).invert(&a).unwrap();
            assert_eq!(g.k(1), l.get(0, 0));
            assert_eq!(g.e(1, 2), &k1i.mul(l.get(0, 1), &a).unwrap());
            assert_eq!(g.f(2, 1), &l.get(1, 0).mul(&k1i, &a).unwrap());
            let k2 = l.get(1, 1).sub(&l.get(1, 0).mul(&k1i, &a).unwrap().mul(l.get(0, 1), &a).unwrap(), &a).unwrap();
            assert_eq!(g.k(2), &k2);
        }
    }

    #[test]
    fn routes_agree_and_reconstruct() {
        let a = alg(3, 2, 2);
        for sign in [Sign::Plus, Sign::Minus] {
            let l = build_l(&a, sign, 2 + if sign == Sign::Minus { 2 } else { 0 }).unwrap();
            let g = gauss_elimination(&a, &l).unwrap();
            assert_eq!(g.reconstruct(&a).unwrap(), l);
            let q = gauss_quasidet(&a, &l).unwrap();
            assert_eq!(g.first_difference(&q), None);
            let back = gauss_elimination(&a, &g.reconstruct(&a).unwrap()).unwrap();
            assert_eq!(back, g);
            let r = gauss_qdet_ratios(&a, &l).unwrap();
            assert!(r.order() >= 2);
            assert_eq!(g.first_difference(&r), None, "{sign:?}");
            let qd = column_qdet(&a, &l, &Rational::zero()).unwrap();
            let prod = gauss_qdet_product(&a, &g).unwrap();
            let o = qd.order().min(prod.order());
            assert_eq!(qd.truncated(o), prod.truncated(o), "{sign:?}");
        }
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i32>(), 0);
        assert_eq!(p[1], (vec![0, 2, 1], -1));
    }
}
