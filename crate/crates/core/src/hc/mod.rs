//! The Harish-Chandra map `χ = η ∘ θ` on the central series `ℓ_k(u)`, the
//! `λ`-sum image formula, and Wakimoto eigenvalues.

pub mod diag;
pub mod image;
pub mod suite;
pub mod wakimoto;

pub use diag::{chi, eta, eta_inverse, theta, DiagMono, DiagPoly, DiagRing, DiagVar};
pub use image::{increasing_subsets, minus_series, plus_series, qdet_plus_image, LambdaFamily, SplitFamily};
pub use suite::HcParams;
pub use wakimoto::{check_wakimoto_consistency, specialize, wakimoto_eigenvalues, WakimotoParams};

use crate::algebra::Element;
use crate::center::CentralSeries;
use crate::error::Result;
use crate::report::Outcome;
use crate::scalar::{Laurent, Ring};

/// `χ` applied coefficientwise.
pub fn chi_series(s: &CentralSeries, ring: &DiagRing) -> Result<Laurent<DiagPoly>> {
    let mut out = Laurent::zero(s.coeffs.lo, s.coeffs.hi);
    for (e, c) in s.coeffs.terms() {
        out.add_at(ring, *e, &chi(c, ring)?);
    }
    Ok(out)
}

/// First exponent where two images differ, with both values.
pub fn first_difference(a: &Laurent<DiagPoly>, b: &Laurent<DiagPoly>, ring: &DiagRing) -> Outcome {
    let (lo, hi) = (a.lo.max(b.lo), a.hi.min(b.hi));
    (lo..=hi).find(|&e| a.coeff(ring, e) != b.coeff(ring, e)).map(|e| {
        let (x, y) = (a.coeff(ring, e), b.coeff(ring, e));
        let d = ring.sub(&x, &y);
        format!("u^{e}: χ side has {} terms, formula {} terms, difference {d}", x.len(), y.len())
    })
}

/// `χ(ℓ_k(u))` against the `λ`-sum, coefficientwise on the range of `ell`.
pub fn check_hc_image(ell: &CentralSeries, lambda: &LambdaFamily) -> Result<Outcome> {
    let ring = lambda.ring();
    let lhs = chi_series(ell, ring)?;
    let rhs = lambda.image(ell.k, ell.coeffs.lo, ell.coeffs.hi)?;
    Ok(first_difference(&lhs, &rhs, ring))
}

/// `χ(x y) = χ(x) χ(y)` for every pair of coefficients `x` of `a`, `y` of `b`
/// with exponents in the given ranges. The right factor must be central for
/// the product to be exact modulo the cutoff.
pub fn check_multiplicativity(
    alg: &crate::algebra::Algebra,
    a: &CentralSeries,
    b: &CentralSeries,
    range_a: std::ops::RangeInclusive<i32>,
    range_b: std::ops::RangeInclusive<i32>,
    ring: &DiagRing,
) -> Result<Outcome> {
    use rayon::prelude::*;
    let pairs: Vec<(i32, i32)> = range_a.flat_map(|x| range_b.clone().map(move |y| (x, y))).collect();
    let bad: Vec<Outcome> = pairs
        .into_par_iter()
        .map(|(x, y)| {
            let (cx, cy): (Element, Element) = (a.coeff(x), b.coeff(y));
            let lhs = chi(&alg.mul(&cx, &cy)?, ring)?;
            let rhs = ring.mul(&chi(&cx, ring)?, &chi(&cy, ring)?)?;
            Ok((lhs != rhs).then(|| {
                format!("ℓ_{} u^{x} · ℓ_{} u^{y}: difference {}", a.k, b.k, ring.sub(&lhs, &rhs))
            }))
        })
        .collect::<Result<_>>()?;
    Ok(bad.into_iter().flatten().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraConfig, Normalization};
    use crate::scalar::{HPoly, Rational};
    use proptest::prelude::*;

    fn alg() -> Algebra {
        Algebra::new(AlgebraConfig::new(2, Rational::from_int(-2), Normalization::Normalized, 2, 2, 6, 3).unwrap()).unwrap()
    }

    /// Sums of products of up to three generators with small modes.
    fn element(a: &Algebra, words: &[(i64, Vec<(usize, usize, i64)>)]) -> Element {
        let mut out = Element::zero();
        for (c, w) in words {
            let mut x = a.scalar(Rational::from_int(*c));
            for &(i, j, r) in w {
                x = a.mul(&x, &a.gen(i, j, r).unwrap()).unwrap();
            }
            out = out.add(&x);
        }
        out
    }

    fn words() -> impl Strategy<Value = Vec<(i64, Vec<(usize, usize, i64)>)>> {
        prop::collection::vec((-3i64..=3, prop::collection::vec((1usize..=2, 1usize..=2, -2i64..=2), 0..=3)), 0..=4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn theta_is_an_idempotent_linear_projection(x in words(), y in words()) {
            let a = alg();
            let (x, y) = (element(&a, &x), element(&a, &y));
            prop_assert_eq!(theta(&theta(&x)), theta(&x));
            prop_assert_eq!(theta(&x.add(&y)), theta(&x).add(&theta(&y)));
            prop_assert!(theta(&x).terms().keys().all(|w| w.iter().all(|g| g.is_diagonal())));
        }

        #[test]
        fn eta_is_invertible_on_the_diagonal_sector(x in words()) {
            let a = alg();
            let r = DiagRing::for_algebra(&a);
            let t = theta(&element(&a, &x));
            let img = eta(&t, &r).unwrap();
            // the cutoff already removed modes ≥ p, so nothing is lost
            prop_assert_eq!(eta_inverse(&img), t);
        }

        #[test]
        fn chi_is_linear(x in words(), y in words(), c in -4i64..=4) {
            let a = alg();
            let r = DiagRing::for_algebra(&a);
            let (x, y) = (element(&a, &x), element(&a, &y));
            let q = HPoly::constant(Rational::from_int(c), 2);
            let lhs = chi(&x.scale(&q).add(&y), &r).unwrap();
            let rhs = chi(&x, &r).unwrap().scale(&q).add(&chi(&y, &r).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chi_is_not_multiplicative_off_the_center() {
        // l_12^{(0)} l_21^{(-1)} = l_21^{(-1)} l_12^{(0)} + (diagonal terms)
        let a = alg();
        let r = DiagRing::for_algebra(&a);
        let (x, y) = (a.gen(1, 2, 0).unwrap(), a.gen(2, 1, -1).unwrap());
        assert!(chi(&x, &r).unwrap().is_zero() && chi(&y, &r).unwrap().is_zero());
        assert!(!chi(&a.mul(&x, &y).unwrap(), &r).unwrap().is_zero());
    }
}
