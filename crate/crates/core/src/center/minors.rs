//! Quantum minors of `L^±(u)`, the quantum determinant, and inverse entries
//! as ratios of minors.

use rayon::prelude::*;

use crate::algebra::{Algebra, Element, Gen};
use crate::error::{Error, Result};
use crate::gauss::decomp::{permutations, AlgMatrix, AlgSeries, Sign};
use crate::report::{expect, Outcome};
use crate::scalar::{Rational, Series};

/// Rows `a_1..a_k` and columns `b_1..b_k` (1-based) of a minor of `L^±`
/// evaluated at `u + γh`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumMinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub gamma: Rational,
    pub sign: Sign,
}

impl QuantumMinorSpec {
    pub fn new(rows: &[usize], cols: &[usize], sign: Sign) -> Self {
        QuantumMinorSpec { rows: rows.to_vec(), cols: cols.to_vec(), gamma: Rational::zero(), sign }
    }

    pub fn at(mut self, gamma: Rational) -> Self {
        self.gamma = gamma;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.rows.len() != self.cols.len() || self.rows.is_empty() || self.rows.len() > n {
            return Err(Error::ShapeMismatch(format!("{} rows and {} columns with n = {n}", self.rows.len(), self.cols.len())));
        }
        if let Some(x) = self.rows.iter().chain(&self.cols).find(|&&x| x == 0 || x > n) {
            return Err(Error::IndexOutOfRange(format!("minor index {x} with n = {n}")));
        }
        Ok(())
    }
}

/// Entry `(a, b)` (1-based) of `l` at `u + γh`.
fn shifted(alg: &Algebra, l: &AlgMatrix, a: usize, b: usize, gamma: &Rational) -> Result<AlgSeries> {
    l.get(a - 1, b - 1).shift(gamma, alg)
}

fn product(alg: &Algebra, factors: &[&AlgSeries]) -> Result<AlgSeries> {
    let mut t = factors[0].clone();
    for f in &factors[1..] {
        t = t.mul(f, alg)?;
    }
    Ok(t)
}

/// Row expansion `Σ_σ sgn σ l_{a_σ(1) b_1}(u) l_{a_σ(2) b_2}(u+h) ⋯ l_{a_σ(k) b_k}(u+(k-1)h)`
/// of a minor of `l` (all at the extra shift `γ`).
pub fn quantum_minor(alg: &Algebra, l: &AlgMatrix, spec: &QuantumMinorSpec) -> Result<AlgSeries> {
    spec.validate(l.rows())?;
    let k = spec.rows.len();
    // column t is evaluated at u + (γ + t)h, so shift each (row, column t) once
    let mut at = vec![Vec::with_capacity(k); k];
    for (t, col) in at.iter_mut().enumerate() {
        let g = &spec.gamma + &Rational::from_int(t as i64);
        for &a in &spec.rows {
            col.push(shifted(alg, l, a, spec.cols[t], &g)?);
        }
    }
    let terms: Vec<Result<(AlgSeries, i32)>> = permutations(k)
        .into_par_iter()
        .map(|(perm, sign)| {
            let fs: Vec<&AlgSeries> = (0..k).map(|t| &at[t][perm[t]]).collect();
            Ok((product(alg, &fs)?, sign))
        })
        .collect();
    sum_signed(alg, terms)
}

/// Column expansion `Σ_σ sgn σ l_{a_k b_σ(k)}(u+(k-1)h) ⋯ l_{a_1 b_σ(1)}(u)`.
pub fn quantum_minor_columns(alg: &Algebra, l: &AlgMatrix, spec: &QuantumMinorSpec) -> Result<AlgSeries> {
    spec.validate(l.rows())?;
    let k = spec.rows.len();
    // row t is evaluated at u + (γ + t)h
    let mut at = vec![Vec::with_capacity(k); k];
    for (t, row) in at.iter_mut().enumerate() {
        let g = &spec.gamma + &Rational::from_int(t as i64);
        for &b in &spec.cols {
            row.push(shifted(alg, l, spec.rows[t], b, &g)?);
        }
    }
    let terms: Vec<Result<(AlgSeries, i32)>> = permutations(k)
        .into_par_iter()
        .map(|(perm, sign)| {
            let fs: Vec<&AlgSeries> = (0..k).rev().map(|t| &at[t][perm[t]]).collect();
            Ok((product(alg, &fs)?, sign))
        })
        .collect();
    sum_signed(alg, terms)
}

fn sum_signed(alg: &Algebra, terms: Vec<Result<(AlgSeries, i32)>>) -> Result<AlgSeries> {
    let mut out: Option<AlgSeries> = None;
    for t in terms {
        let (s, sign) = t?;
        let s = if sign > 0 { s } else { s.neg(alg) };
        out = Some(match out {
            None => s,
            Some(o) => o.add(&s, alg)?,
        });
    }
    out.ok_or_else(|| Error::ShapeMismatch("empty minor".into()))
}

/// `qdet L(u + γh)`: the minor on all rows and columns.
pub fn qdet(alg: &Algebra, l: &AlgMatrix, sign: Sign, gamma: &Rational) -> Result<AlgSeries> {
    let all: Vec<usize> = (1..=l.rows()).collect();
    quantum_minor(alg, l, &QuantumMinorSpec::new(&all, &all, sign).at(gamma.clone()))
}

/// `[L(u)^{-1}]_ij = (-1)^{j-i} qdet L(u-(n-1)h)^{-1} · L(u-(n-1)h)^{1..ĵ..n}_{1..î..n}`
/// (rows without `j`, columns without `i`).
pub fn inverse_entry_by_minors(alg: &Algebra, l: &AlgMatrix, sign: Sign, i: usize, j: usize) -> Result<AlgSeries> {
    let n = l.rows();
    let g = Rational::from_int(1 - n as i64);
    let rows: Vec<usize> = (1..=n).filter(|&x| x != j).collect();
    let cols: Vec<usize> = (1..=n).filter(|&x| x != i).collect();
    let minor = quantum_minor(alg, l, &QuantumMinorSpec::new(&rows, &cols, sign).at(g.clone()))?;
    let d = qdet(alg, l, sign, &g)?.invert(alg)?;
    let out = d.mul(&minor, alg)?;
    Ok(if (i + j) % 2 == 0 { out } else { out.neg(alg) })
}

/// Every `l_ij^{(r)}` with `r` in the given range.
pub fn probes(n: usize, modes: std::ops::RangeInclusive<i64>) -> Vec<Gen> {
    let mut out = Vec::new();
    for r in modes {
        for i in 1..=n {
            for j in 1..=n {
                out.push(Gen::new(i, j, r));
            }
        }
    }
    out
}

/// First `(coefficient degree, probe)` whose commutator is nonzero after
/// `keep`, or `None`; also returns the number of nonzero coefficients tested.
pub fn commutator_witness<F>(alg: &Algebra, coeffs: &[(i32, Element)], probes: &[Gen], keep: F) -> Result<(usize, Outcome)>
where
    F: Fn(&[Gen]) -> bool + Sync,
{
    let pairs: Vec<(&(i32, Element), Gen)> =
        coeffs.iter().filter(|(_, x)| !x.is_zero()).flat_map(|c| probes.iter().map(move |&g| (c, g))).collect();
    let tested = coeffs.iter().filter(|(_, x)| !x.is_zero()).count();
    let bad: Vec<Result<Option<String>>> = pairs
        .into_par_iter()
        .map(|((d, x), g)| {
            let y = alg.gen(g.i(), g.j(), g.r())?;
            let c = alg.bracket(x, &y)?.filter(&keep);
            Ok((!c.is_zero()).then(|| format!("[coefficient u^{d}, {g:?}] = {c}")))
        })
        .collect();
    let mut first = None;
    for b in bad {
        if let Some(w) = b? {
            first.get_or_insert(w);
        }
    }
    Ok((tested, first))
}

/// `qdet L^±` coefficients through `u^{∓order}` commute with every probe.
/// The algebra's cutoff must lie above every plus mode these products reach.
pub fn qdet_centrality(alg: &Algebra, sign: Sign, order: u32, probes: &[Gen]) -> Result<Outcome> {
    let extra = if sign == Sign::Minus { alg.m() as u32 } else { 0 };
    let l = crate::gauss::build_l(alg, sign, order + extra)?;
    let q = qdet(alg, &l, sign, &Rational::zero())?;
    if q.order() < order {
        return Err(Error::TruncationMismatch(format!("qdet known to order {} < {order}", q.order())));
    }
    let coeffs: Vec<(i32, Element)> =
        (1..=order).map(|d| (sign.direction().exponent(d), q.coeff(alg, d))).collect();
    let (tested, w) = commutator_witness(alg, &coeffs, probes, |_| true)?;
    if tested == 0 {
        return Ok(Some("every qdet coefficient vanished".into()));
    }
    Ok(w)
}

/// Coefficients of one series through `order` as `(exponent, element)`.
pub fn coefficients(s: &AlgSeries, alg: &Algebra) -> Vec<(i32, Element)> {
    (0..=s.order()).map(|d| (s.direction().exponent(d), s.coeff(alg, d))).collect()
}

/// Agreement of two series through their common order, with a witness.
pub fn same_series(a: &AlgSeries, b: &AlgSeries, what: &str) -> Outcome {
    let o = a.order().min(b.order());
    let (x, y) = (a.truncated(o), b.truncated(o));
    expect(x == y, || {
        let d = (0..=o).find(|d| x.get(*d) != y.get(*d)).unwrap_or(0);
        format!("{what}: degree {d} differs: {:?} vs {:?}", x.get(d), y.get(d))
    })
}

/// `Series::zero` in the direction of `sign`.
pub fn zero_series(sign: Sign, order: u32) -> AlgSeries {
    Series::zero(sign.direction(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraConfig, Normalization};
    use crate::gauss::decomp::column_qdet;
    use crate::gauss::build_l;

    fn alg(n: usize, m: usize, order: u32) -> Algebra {
        let cfg = AlgebraConfig::for_series(n, Rational::from_int(-(n as i64)), Normalization::Normalized, m, order).unwrap();
        Algebra::new(cfg).unwrap()
    }

    #[test]
    fn qdet_is_the_full_minor_and_both_expansions_agree() {
        let a = alg(3, 2, 3);
        for sign in [Sign::Plus, Sign::Minus] {
            let l = build_l(&a, sign, 3 + if sign == Sign::Minus { 2 } else { 0 }).unwrap();
            let s = QuantumMinorSpec::new(&[1, 2, 3], &[1, 2, 3], sign);
            let rows = quantum_minor(&a, &l, &s).unwrap();
            assert_eq!(rows, column_qdet(&a, &l, &Rational::zero()).unwrap());
            assert_eq!(same_series(&rows, &quantum_minor_columns(&a, &l, &s).unwrap(), "qdet"), None);
            let s2 = QuantumMinorSpec::new(&[1, 3], &[2, 3], sign);
            let r2 = quantum_minor(&a, &l, &s2).unwrap();
            assert_eq!(same_series(&r2, &quantum_minor_columns(&a, &l, &s2).unwrap(), "minor"), None);
        }
    }

    #[test]
    fn antisymmetry_and_repeated_indices() {
        let a = alg(2, 3, 3);
        let l = build_l(&a, Sign::Plus, 3).unwrap();
        let m = |r: &[usize], c: &[usize]| quantum_minor(&a, &l, &QuantumMinorSpec::new(r, c, Sign::Plus)).unwrap();
        let base = m(&[1, 2], &[1, 2]);
        assert!(!base.is_zero());
        // column swap is a genuine relation in the row expansion
        assert_eq!(m(&[1, 2], &[2, 1]), base.neg(&a));
        assert_eq!(m(&[2, 1], &[1, 2]), base.neg(&a));
        assert!(m(&[1, 2], &[2, 2]).is_zero());
        assert!(m(&[1, 1], &[1, 2]).is_zero());
    }

    #[test]
    fn inverse_entries_from_minors() {
        let a = alg(2, 3, 4);
        let l = build_l(&a, Sign::Plus, 4).unwrap();
        let inv = l.invert(&a).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                let e = inverse_entry_by_minors(&a, &l, Sign::Plus, i, j).unwrap();
                assert_eq!(same_series(&e, inv.get(i - 1, j - 1), "inverse entry"), None, "({i},{j})");
            }
        }
    }

    #[test]
    fn qdet_plus_is_central_at_small_order() {
        let cfg = AlgebraConfig::for_series(2, Rational::from_int(-2), Normalization::Normalized, 2, 2).unwrap().with_p(6);
        let a = Algebra::new(cfg).unwrap();
        let pr = probes(2, -1..=1);
        assert_eq!(qdet_centrality(&a, Sign::Plus, 2, &pr).unwrap(), None);
        assert_eq!(qdet_centrality(&a, Sign::Minus, 2, &pr).unwrap(), None);
    }
}
