//! Matrices of truncated series over a (possibly noncommutative) ring.

use crate::error::{Error, Result};
use crate::scalar::{Expansion, Rational, Ring, Series};

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix<E> {
    rows: usize,
    cols: usize,
    dir: Expansion,
    order: u32,
    entries: Vec<Series<E>>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> SeriesMatrix<E> {
    pub fn zero(rows: usize, cols: usize, dir: Expansion, order: u32) -> Self {
        SeriesMatrix { rows, cols, dir, order, entries: vec![Series::zero(dir, order); rows * cols] }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize, dir: Expansion, order: u32) -> Self {
        let mut m = Self::zero(n, n, dir, order);
        for i in 0..n {
            m.set(i, i, Series::one(ring, dir, order));
        }
        m
    }

    pub fn from_fn<F>(rows: usize, cols: usize, dir: Expansion, order: u32, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<Series<E>>,
    {
        let mut m = Self::zero(rows, cols, dir, order);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j)?;
                if s.direction() != dir {
                    return Err(Error::DirectionMismatch);
                }
                m.order = m.order.min(s.order());
                m.set(i, j, s);
            }
        }
        Ok(m.truncated(m.order))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn direction(&self) -> Expansion {
        self.dir
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> &Series<E> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series<E>) {
        self.entries[i * self.cols + j] = s;
    }

    pub fn truncated(&self, order: u32) -> Self {
        let order = order.min(self.order);
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            dir: self.dir,
            order,
            entries: self.entries.iter().map(|s| s.truncated(order)).collect(),
        }
    }

    pub fn map_entries<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Series<E>) -> Result<Series<E>>,
    {
        Self::from_fn(self.rows, self.cols, self.dir, self.order, |i, j| f(self.get(i, j)))
    }

    /// Rows and columns picked by index lists (0-based, in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zero(rows.len(), cols.len(), self.dir, self.order);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    fn check_shape(&self, o: &Self) -> Result<()> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        if self.dir != o.dir {
            return Err(Error::DirectionMismatch);
        }
        Ok(())
    }

    pub fn add<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.check_shape(o)?;
        Self::from_fn(self.rows, self.cols, self.dir, self.order.min(o.order), |i, j| {
            self.get(i, j).add(o.get(i, j), ring)
        })
    }

    pub fn sub<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        self.check_shape(o)?;
        Self::from_fn(self.rows, self.cols, self.dir, self.order.min(o.order), |i, j| {
            self.get(i, j).sub(o.get(i, j), ring)
        })
    }

    pub fn mul<R: Ring<Elem = E>>(&self, o: &Self, ring: &R) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::ShapeMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        if self.dir != o.dir {
            return Err(Error::DirectionMismatch);
        }
        let order = self.order.min(o.order);
        Self::from_fn(self.rows, o.cols, self.dir, order, |i, j| {
            let mut s = Series::zero(self.dir, order);
            for k in 0..self.cols {
                s = s.add(&self.get(i, k).mul(o.get(k, j), ring)?, ring)?;
            }
            Ok(s)
        })
    }

    /// Substitutes `u ↦ u + γh` in every entry.
    pub fn shift<R: Ring<Elem = E>>(&self, gamma: &Rational, ring: &R) -> Result<Self> {
        self.map_entries(|s| s.shift(gamma, ring))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Series::is_zero)
    }

    /// Inverse of `I + X` as `Σ_k (-X)^k`, for `X` nilpotent (for generator
    /// matrices every coefficient of `X` is divisible by `h`).
    pub fn invert_geometric<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let id = Self::identity(ring, self.rows, self.dir, self.order);
        let minus_x = id.sub(self, ring)?;
        let mut term = id.clone();
        let mut acc = id;
        let bound = ring.nilpotency_bound() + self.order as usize + 1;
        for _ in 0..=bound {
            term = term.mul(&minus_x, ring)?;
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term, ring)?;
        }
        Err(Error::NotUnit("matrix is not the identity plus a nilpotent part".into()))
    }

    /// Inverse by Gauss–Jordan elimination with series pivots (each pivot
    /// needs a unit constant term).
    pub fn invert_elimination<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = Self::identity(ring, n, self.dir, self.order);
        for c in 0..n {
            let piv = a.get(c, c).invert(ring)?;
            for j in 0..n {
                let x = piv.mul(a.get(c, j), ring)?;
                a.set(c, j, x);
                let y = piv.mul(b.get(c, j), ring)?;
                b.set(c, j, y);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let x = a.get(r, j).sub(&f.mul(a.get(c, j), ring)?, ring)?;
                    a.set(r, j, x);
                    let y = b.get(r, j).sub(&f.mul(b.get(c, j), ring)?, ring)?;
                    b.set(r, j, y);
                }
            }
        }
        Ok(b)
    }

    /// Inverse, by the geometric series when it applies and by elimination
    /// otherwise.
    pub fn invert<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        match self.invert_geometric(ring) {
            Ok(x) => Ok(x),
            Err(Error::NotUnit(_)) => self.invert_elimination(ring),
            Err(e) => Err(e),
        }
    }
}

/// The quasideterminant `|A|_{pq} = a_pq - r_p (A^{pq})^{-1} c_q` (0-based).
pub fn quasideterminant<E, R>(a: &SeriesMatrix<E>, p: usize, q: usize, ring: &R) -> Result<Series<E>>
where
    E: Clone + PartialEq + std::fmt::Debug,
    R: Ring<Elem = E>,
{
    if a.rows() != a.cols() || p >= a.rows() || q >= a.cols() {
        return Err(Error::IndexOutOfRange(format!("quasideterminant ({p}, {q}) of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n == 1 {
        return Ok(a.get(0, 0).clone());
    }
    let rows: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| j != q).collect();
    let inv = a.submatrix(&rows, &cols).invert(ring)?;
    let r = a.submatrix(&[p], &cols);
    let c = a.submatrix(&rows, &[q]);
    let t = r.mul(&inv, ring)?.mul(&c, ring)?;
    a.get(p, q).sub(t.get(0, 0), ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{HPoly, HRing};

    fn m2(ring: &HRing, e: [[&[(u32, i64, usize)]; 2]; 2]) -> SeriesMatrix<HPoly> {
        // entries from (degree, rational, h-power) triples
        SeriesMatrix::from_fn(2, 2, Expansion::InvU, 4, |i, j| {
            Ok(Series::from_terms(
                ring,
                Expansion::InvU,
                4,
                e[i][j].iter().map(|&(d, q, k)| (d, HPoly::monomial(Rational::from_int(q), k, ring.h_order()))),
            ))
        })
        .unwrap()
    }

    #[test]
    fn inverse_routes_agree_and_multiply_back() {
        let ring = HRing::new(4);
        let a = m2(&ring, [[&[(0, 1, 0), (1, 2, 1)], &[(1, 1, 1)]], [&[(2, -1, 1)], &[(0, 1, 0), (1, 3, 1)]]]);
        let g = a.invert_geometric(&ring).unwrap();
        let e = a.invert_elimination(&ring).unwrap();
        assert_eq!(g, e);
        let id = SeriesMatrix::identity(&ring, 2, Expansion::InvU, 4);
        assert_eq!(a.mul(&g, &ring).unwrap(), id);
        assert_eq!(g.mul(&a, &ring).unwrap(), id);
    }

    #[test]
    fn geometric_series_rejects_non_unipotent() {
        let ring = HRing::new(2);
        let a = m2(&ring, [[&[(0, 2, 0)], &[]], [&[], &[(0, 1, 0)]]]);
        assert!(matches!(a.invert_geometric(&ring), Err(Error::NotUnit(_))));
        assert!(a.invert(&ring).is_ok());
    }

    #[test]
    fn two_by_two_quasideterminant_is_schur_complement() {
        // commutative: |A|_22 = d - c a^{-1} b = det / a
        let ring = HRing::new(3);
        let a = m2(&ring, [[&[(0, 2, 0), (1, 1, 1)], &[(0, 3, 0)]], [&[(0, 5, 0)], &[(0, 7, 0), (2, 1, 2)]]]);
        let q = quasideterminant(&a, 1, 1, &ring).unwrap();
        let det = a.get(0, 0).mul(a.get(1, 1), &ring).unwrap().sub(&a.get(1, 0).mul(a.get(0, 1), &ring).unwrap(), &ring).unwrap();
        let want = a.get(0, 0).invert(&ring).unwrap().mul(&det, &ring).unwrap();
        assert_eq!(q, want);
        let one = SeriesMatrix::identity(&ring, 1, Expansion::InvU, 4);
        assert_eq!(quasideterminant(&one, 0, 0, &ring).unwrap(), *one.get(0, 0));
    }
}
