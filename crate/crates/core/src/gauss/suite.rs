//! The `gauss` verification suite.

use crate::algebra::{Algebra, AlgebraConfig, Normalization};
use crate::error::Result;
use crate::gauss::currents::{check_families, currents_are_h_divisible, Currents, Family};
use crate::gauss::decomp::{
    build_l, column_qdet, gauss_elimination, gauss_qdet_product, gauss_qdet_ratios, gauss_quasidet, Sign,
};
use crate::gauss::matrix::SeriesMatrix;
use crate::report::{expect, timed, CheckRecord};
use crate::scalar::Rational;

pub const SUITE: &str = "gauss";

/// Parameters of one run of the suite.
#[derive(Clone, Debug)]
pub struct GaussParams {
    pub n: usize,
    pub c: Rational,
    pub m: usize,
    pub order: u32,
    /// Relation coefficients are compared for exponents in `[-window, window - 1]`.
    pub window: i32,
    pub families: Vec<Family>,
}

impl GaussParams {
    pub fn config(&self) -> Result<AlgebraConfig> {
        AlgebraConfig::for_series(self.n, self.c.clone(), Normalization::Unnormalized, self.m, self.order)
    }
}

/// Decomposition checks for both halves, then the selected current relations.
pub fn run(p: &GaussParams) -> Result<Vec<CheckRecord>> {
    let alg = Algebra::new(p.config()?)?;
    let n = p.n;
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        // the minus half loses M orders to every shift
        let extra = if sign == Sign::Minus { p.m as u32 } else { 0 };
        let l = build_l(&alg, sign, p.order + extra)?;
        let tag = |what: &str| format!("n{n}/{}/{what}", sign.symbol());
        let g = gauss_elimination(&alg, &l)?;
        out.push(timed(SUITE, &tag("inverse"), "inverse of the generator matrix", || {
            let inv = l.invert_geometric(&alg)?;
            let id = SeriesMatrix::identity(&alg, n, l.direction(), l.order());
            Ok(expect(l.mul(&inv, &alg)? == id && inv.mul(&l, &alg)? == id, || "L·L^{-1} ≠ I".into()))
        }));
        out.push(timed(SUITE, &tag("reconstruct"), "Gauss decomposition L = F H E", || {
            Ok(expect(g.reconstruct(&alg)? == l, || "F·H·E differs from L".into()))
        }));
        out.push(timed(SUITE, &tag("uniqueness"), "uniqueness of the Gauss decomposition", || {
            let back = gauss_elimination(&alg, &g.reconstruct(&alg)?)?;
            Ok(back.first_difference(&g).map(|d| format!("recomputed component {d:?} differs")))
        }));
        out.push(timed(SUITE, &tag("quasideterminants"), "Gauss components as quasideterminants", || {
            Ok(gauss_quasidet(&alg, &l)?.first_difference(&g).map(|d| format!("component {d:?} differs")))
        }));
        out.push(timed(SUITE, &tag("qdet-ratios"), "Gauss components as quantum determinant ratios", || {
            let r = gauss_qdet_ratios(&alg, &l)?;
            if r.order() < p.order {
                return Ok(Some(format!("ratios exact only to order {}", r.order())));
            }
            Ok(r.first_difference(&g).map(|d| format!("component {d:?} differs")))
        }));
        out.push(timed(SUITE, &tag("qdet-factorization"), "qdet L = k_1(u) k_2(u+h) ⋯ k_n(u+(n-1)h)", || {
            let qd = column_qdet(&alg, &l, &Rational::zero())?;
            let pr = gauss_qdet_product(&alg, &g)?;
            let o = qd.order().min(pr.order());
            if o < p.order {
                return Ok(Some(format!("factorization exact only to order {o}")));
            }
            Ok(expect(qd.truncated(o) == pr.truncated(o), || "quantum determinant differs from the product".into()))
        }));
    }
    let cur = Currents::new(&alg, p.order)?;
    out.push(timed(SUITE, &format!("n{n}/currents/h-divisible"), "E_i and F_i are h-regular", || {
        currents_are_h_divisible(&cur)
    }));
    let mut rel = check_families(&cur, &p.families, p.window, SUITE);
    for r in &mut rel {
        r.check_id = format!("n{n}/{}", r.check_id);
    }
    out.extend(rel);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let p = GaussParams { n: 2, c: Rational::from_int(-2), m: 2, order: 3, window: 2, families: Family::ALL.to_vec() };
        let recs = run(&p).unwrap();
        assert!(recs.len() > 12);
        for r in recs {
            assert!(r.passed(), "{}: {:?}", r.check_id, r.witness);
        }
    }
}
