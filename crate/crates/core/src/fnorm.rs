//! The normalizing series `f(u) = 1 + Σ_{k≥1} c_k (h/u)^k`, fixed by
//! `f(u - nh) = ((u² - h²)/u²) f(u)`, which turns the Yang matrix into a
//! crossing-symmetric one.
//!
//! With `t = h/u` the equation reads `f̂(t/(1-nt)) = (1 - t²) f̂(t)`. Comparing
//! coefficients of `t^{m}` the `c_m` terms cancel, so the equation at `t^{m}`
//! determines `c_{m-1}` from lower coefficients:
//!
//! `(m-1)n c_{m-1} = -c_{m-2} - Σ_{k=1}^{m-2} binom(m-1, k-1) n^{m-k} c_k`.

use crate::error::{Error, Result};
use crate::report::{expect, timed, CheckRecord};
use crate::scalar::{Expansion, HPoly, HRing, Rational, Series, TruncatedSeries};

/// `c_0 = 1, c_1, …, c_K` for a given `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FCoeffs {
    pub n: usize,
    pub coeffs: Vec<Rational>,
}

impl FCoeffs {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `f(u)` as a series in `u^{-1}`, truncated at `h^{M+1}` and `u^{-N-1}`.
    pub fn series(&self, order: u32, m: usize) -> Result<TruncatedSeries> {
        let need = m.min(order as usize);
        if self.order() < need {
            return Err(Error::TruncationMismatch(format!(
                "f known to order {}, need {need}",
                self.order()
            )));
        }
        Ok(TruncatedSeries::from_t_series(&self.coeffs[..=need], order, m))
    }
}

/// Solves the functional equation for `c_1..c_K`.
pub fn solve_f(n: usize, k: usize) -> Result<FCoeffs> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be positive".into()));
    }
    let nq = Rational::from_int(n as i64);
    let mut c = vec![Rational::one()];
    for m in 2..=k + 1 {
        let mut rhs = -c[m - 2].clone();
        for (kk, ck) in c.iter().enumerate().take(m - 1).skip(1) {
            rhs -= &(Rational::binom_int(m as i64 - 1, kk as i64 - 1) * nq.pow((m - kk) as u32) * ck);
        }
        c.push(rhs / (Rational::from_int(m as i64 - 1) * &nq));
    }
    Ok(FCoeffs { n, coeffs: c })
}

/// Plain power series in `t` over ℚ, dense, truncated at `t^len`.
fn t_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// Coefficients of `f̂(t/(1-nt)) - (1-t²)f̂(t)` through `t^{K+1}`, computed by
/// direct substitution.
pub fn residual(f: &FCoeffs) -> Vec<Rational> {
    let len = f.order() + 2;
    let nq = Rational::from_int(f.n as i64);
    // s = t/(1 - nt) = Σ_{j≥0} n^j t^{j+1}
    let s: Vec<Rational> = (0..len)
        .map(|i| if i == 0 { Rational::zero() } else { nq.pow(i as u32 - 1) })
        .collect();
    let mut lhs = vec![Rational::zero(); len];
    let mut sk = {
        let mut v = vec![Rational::zero(); len];
        v[0] = Rational::one();
        v
    };
    for ck in &f.coeffs {
        for (l, x) in lhs.iter_mut().zip(&sk) {
            *l += &(ck * x);
        }
        sk = t_mul(&sk, &s, len);
    }
    let mut one_minus_t2 = vec![Rational::zero(); len];
    one_minus_t2[0] = Rational::one();
    if len > 2 {
        one_minus_t2[2] = -Rational::one();
    }
    let rhs = t_mul(&one_minus_t2, &f.coeffs, len);
    lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect()
}

/// `F(u) = Π_{j<n} f(u - jh)` as a truncated series.
pub fn telescoped_product(f: &FCoeffs, order: u32, m: usize) -> Result<TruncatedSeries> {
    let ring = HRing::new(m);
    let base = f.series(order, m)?;
    let mut acc = Series::one(&ring, Expansion::InvU, order);
    for j in 0..f.n {
        let shifted = base.shift(&Rational::from_int(-(j as i64)), &ring)?;
        acc = acc.mul(&shifted, &ring)?;
    }
    Ok(acc)
}

/// `(1 + h/u)^{-1}`
pub fn telescoping_target(order: u32, m: usize) -> Result<TruncatedSeries> {
    let ring = HRing::new(m);
    let s = Series::from_terms(
        &ring,
        Expansion::InvU,
        order,
        [(0, HPoly::one(m)), (1, HPoly::h(m))],
    );
    s.invert(&ring)
}

/// The checks of the `fnorm` suite at a given `n` and order `K`.
pub fn check_fnorm(n: usize, k: usize) -> Vec<CheckRecord> {
    let suite = "fnorm";
    let id = |s: &str| format!("{s}/n={n}/K={k}");
    let solved = solve_f(n, k);
    let mut out = Vec::new();
    out.push(timed(suite, &id("functional-equation"), "normalizing functional equation", || {
        let f = solved.clone()?;
        let r = residual(&f);
        Ok(expect(r.iter().all(Rational::is_zero), || {
            let (i, c) = r.iter().enumerate().find(|(_, c)| !c.is_zero()).unwrap();
            format!("residual coefficient of t^{i} is {c}")
        }))
    }));
    out.push(timed(suite, &id("telescoping"), "telescoping product of f", || {
        let f = solved.clone()?;
        let lhs = telescoped_product(&f, k as u32, k)?;
        let rhs = telescoping_target(k as u32, k)?;
        let diff = lhs.sub(&rhs, &HRing::new(k))?;
        Ok(expect(diff.is_zero(), || format!("difference {:?}", diff.terms().iter().next())))
    }));
    out.push(timed(suite, &id("fixed-point"), "shift equation of the telescoped product", || {
        // F(u - h) = (1 - h²/u²) F(u)
        let f = solved.clone()?;
        let ring = HRing::new(k);
        let big_f = telescoped_product(&f, k as u32, k)?;
        let lhs = big_f.shift(&Rational::from_int(-1), &ring)?;
        let factor = Series::from_terms(
            &ring,
            Expansion::InvU,
            k as u32,
            [(0, HPoly::one(k)), (2, HPoly::monomial(-Rational::one(), 2, k))],
        );
        let rhs = factor.mul(&big_f, &ring)?;
        let diff = lhs.sub(&rhs, &ring)?;
        Ok(expect(diff.is_zero(), || format!("difference {:?}", diff.terms().iter().next())))
    }));
    out
}
