//! The `hc` and `wakimoto` verification suites.

use crate::algebra::{Algebra, AlgebraConfig, Normalization};
use crate::center::{qdet, CentralSeries, EllBuilder, Route};
use crate::error::{Error, Result};
use crate::gauss::{build_l, Sign};
use crate::report::{expect, timed, CheckRecord};
use crate::scalar::{HRing, Laurent, Rational, Ring};

use super::image::{qdet_plus_image, LambdaFamily};
use super::wakimoto::{binomial_series, check_wakimoto_consistency, specialize, wakimoto_eigenvalues, WakimotoParams};
use super::{check_hc_image, check_multiplicativity, chi, chi_series, first_difference, DiagPoly, DiagRing};

pub const SUITE: &str = "hc";
pub const WAKIMOTO_SUITE: &str = "wakimoto";

#[derive(Clone, Debug)]
pub struct HcParams {
    pub n: usize,
    pub m: usize,
    /// Laurent exponents `-order..=order` are compared.
    pub order: i32,
    /// Cutoff: images are compared modulo `l_i^k`, `k ≥ p`.
    pub p: u32,
    /// `ℓ_1 … ℓ_{k_max}`.
    pub k_max: usize,
    /// Multiplicativity is checked on exponents `-mult..=mult` of `ℓ_1`, `ℓ_2`.
    pub mult: i32,
}

impl HcParams {
    pub fn new(n: usize, m: usize, order: i32) -> Self {
        HcParams { n, m, order, p: order.max(1) as u32, k_max: n, mult: 1 }
    }

    /// The critical-level algebra whose window reaches every minus mode the
    /// pairing uses.
    pub fn config(&self) -> Result<AlgebraConfig> {
        let m = self.m as u32;
        let hi = self.order.max(1) as u32;
        let w = hi + m * self.p + m + 1;
        AlgebraConfig::new(self.n, Rational::from_int(-(self.n as i64)), Normalization::Normalized, self.m, hi, w, self.p)
    }

    fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.k_max > self.n || self.order < 0 {
            return Err(Error::InvalidConfig(format!("hc suite with n = {}, k_max = {}, order = {}", self.n, self.k_max, self.order)));
        }
        Ok(())
    }
}

/// The central series and their images, shared by both suites.
pub struct Images {
    pub ring: DiagRing,
    pub ells: Vec<CentralSeries>,
    pub chi: Vec<Laurent<DiagPoly>>,
}

impl Images {
    pub fn build(b: &EllBuilder, k_max: usize) -> Result<Self> {
        let ring = DiagRing::for_algebra(b.algebra());
        let ells = (1..=k_max).map(|k| b.ell(k, Route::Trace)).collect::<Result<Vec<_>>>()?;
        let chi = ells.iter().map(|l| chi_series(l, &ring)).collect::<Result<_>>()?;
        Ok(Images { ring, ells, chi })
    }
}

pub fn run(p: &HcParams) -> Result<Vec<CheckRecord>> {
    p.validate()?;
    let n = p.n;
    let (lo, hi) = (-p.order, p.order);
    let alg = Algebra::new(p.config()?)?;
    let b = EllBuilder::new(&alg, p.k_max, lo, hi)?;
    let img = Images::build(&b, p.k_max)?;
    let ring = img.ring;
    let lam = LambdaFamily::new(ring, p.k_max, hi)?;
    let mut out = Vec::new();

    for (k, ell) in (1..=p.k_max).zip(&img.ells) {
        let tag = |s: &str| format!("n{n}/ell{k}/{s}");
        out.push(timed(SUITE, &tag("image"), "χ(ℓ_k(u)) is the λ-sum", || check_hc_image(ell, &lam)));
        out.push(timed(SUITE, &tag("control-offset"), "the λ-sum without the hn/2 shift differs (control)", || {
            let wrong = LambdaFamily::with_offset(ring, k, hi, Rational::zero())?;
            Ok(expect(check_hc_image(ell, &wrong)?.is_some(), || "the unshifted formula also matched".into()))
        }));
    }
    if p.k_max == n {
        out.push(timed(SUITE, &format!("n{n}/ell{n}/qdet-route"), "χ(qdet L⁻(u) qdet L⁺(u+hn/2)^{-1}) is the λ-sum", || {
            let l = b.ell_n_by_qdet()?;
            Ok(first_difference(&chi_series(&l, &ring)?, &lam.image(n, lo, hi)?, &ring))
        }));
    }
    out.push(timed(SUITE, &format!("n{n}/qdet-plus-image"), "χ(qdet L⁺(u)) = l_1⁺(u+(n-1)h) ⋯ l_n⁺(u)", || {
        let order = hi.max(1) as u32;
        let lp = build_l(&alg, Sign::Plus, order)?;
        let q = qdet(&alg, &lp, Sign::Plus, &Rational::zero())?;
        let want = qdet_plus_image(&ring, order)?;
        for d in 0..=order {
            let x = chi(&q.coeff(&alg, d), &ring)?;
            let y = want.coeff(&ring, d);
            if x != y {
                return Ok(Some(format!("u^-{d}: difference {}", ring.sub(&x, &y))));
            }
        }
        Ok(None)
    }));
    out.push(timed(SUITE, &format!("n{n}/formula/k1-sum"), "the k = 1 image is Σ_i λ_i(u)", || {
        let mut s = Laurent::zero(lo, hi);
        for i in 1..=n {
            s = s.add(&lam.lambda(i, lo, hi)?, &ring);
        }
        Ok(first_difference(&lam.image(1, lo, hi)?, &s, &ring))
    }));
    if p.k_max == n {
        out.push(timed(SUITE, &format!("n{n}/formula/kn-single-term"), "the k = n image is λ_1(u) λ_2(u+h) ⋯ λ_n(u+(n-1)h)", || {
            let all: Vec<usize> = (0..n).collect();
            Ok(first_difference(&lam.image(n, lo, hi)?, &lam.family().ordered_product(&ring, &all, lo, hi)?, &ring))
        }));
    }
    out.push(timed(SUITE, &format!("n{n}/formula/trivial-values"), "λ_i = 1 gives binomial(n, k)", || {
        let zero = WakimotoParams::ones(n);
        for k in 1..=p.k_max {
            let got = specialize(&lam.image(k, lo, hi)?, &zero, p.m);
            if got != binomial_series(n, k, p.m, lo, hi) {
                return Ok(Some(format!("k = {k}: {got:?}")));
            }
        }
        Ok(None)
    }));
    if p.k_max >= 2 {
        let r = p.mult.min(p.order);
        let (l1, l2) = (&img.ells[0], &img.ells[1]);
        out.push(timed(SUITE, &format!("n{n}/multiplicativity"), "χ is multiplicative on central elements", || {
            if let Some(w) = check_multiplicativity(&alg, l1, l2, -r..=r, -r..=r, &ring)? {
                return Ok(Some(w));
            }
            check_multiplicativity(&alg, l2, l1, -r..=r, -r..=r, &ring)
        }));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct WakimotoSuiteParams {
    pub hc: HcParams,
    /// Seeds of random parameter sets.
    pub seeds: Vec<u64>,
    /// Number of `κ⁺` coefficients (at most `p`) and of each `κ_i⁻`.
    pub plus_len: usize,
    pub minus_len: usize,
    /// Parameter sets supplied as text.
    pub extra: Vec<WakimotoParams>,
}

impl WakimotoSuiteParams {
    pub fn new(hc: HcParams, seeds: Vec<u64>) -> Self {
        let plus_len = hc.p as usize;
        let minus_len = hc.p as usize + 2;
        WakimotoSuiteParams { hc, seeds, plus_len, minus_len, extra: vec![] }
    }
}

pub fn run_wakimoto(w: &WakimotoSuiteParams) -> Result<Vec<CheckRecord>> {
    let p = &w.hc;
    p.validate()?;
    let n = p.n;
    let (lo, hi) = (-p.order, p.order);
    let alg = Algebra::new(p.config()?)?;
    let b = EllBuilder::new(&alg, p.k_max, lo, hi)?;
    let img = Images::build(&b, p.k_max)?;
    let lam = LambdaFamily::new(img.ring, p.k_max, hi)?;
    let hring = HRing::new(p.m);
    let mut out = Vec::new();

    let mut sets: Vec<(String, WakimotoParams)> = vec![("ones".into(), WakimotoParams::ones(n))];
    for s in &w.seeds {
        sets.push((format!("seed{s}"), WakimotoParams::random(n, w.plus_len, w.minus_len, *s)));
    }
    for (t, x) in w.extra.iter().enumerate() {
        if x.n != n {
            return Err(Error::InvalidConfig(format!("Wakimoto parameter set {t} has n = {}, suite n = {n}", x.n)));
        }
        sets.push((format!("file{t}"), x.clone()));
    }
    for (name, params) in &sets {
        for k in 1..=p.k_max {
            let tag = |s: &str| format!("n{n}/{name}/ell{k}/{s}");
            out.push(timed(WAKIMOTO_SUITE, &tag("chi-specialization"), "the Λ-sum is the specialized image of ℓ_k", || {
                check_wakimoto_consistency(params, &img.chi[k - 1], k, p.m, p.p)
            }));
            out.push(timed(WAKIMOTO_SUITE, &tag("formula-specialization"), "the Λ-sum is the specialized λ-sum", || {
                check_wakimoto_consistency(params, &lam.image(k, lo, hi)?, k, p.m, p.p)
            }));
            if name == "ones" {
                out.push(timed(WAKIMOTO_SUITE, &tag("binomial"), "trivial parameters give binomial(n, k)", || {
                    let ev = wakimoto_eigenvalues(params, p.m, k, lo, hi)?;
                    Ok(expect(ev == binomial_series(n, k, p.m, lo, hi), || format!("{ev:?}")))
                }));
            }
        }
        if p.k_max == n {
            out.push(timed(WAKIMOTO_SUITE, &format!("n{n}/{name}/ell{n}/product"), "the k = n eigenvalue is Λ_1(u) ⋯ Λ_n(u+(n-1)h)", || {
                let fam = params.family(p.m, n, hi)?;
                let all: Vec<usize> = (0..n).collect();
                let prod = fam.ordered_product(&hring, &all, lo, hi)?;
                let ev = wakimoto_eigenvalues(params, p.m, n, lo, hi)?;
                Ok((lo..=hi)
                    .find(|&e| ev.coeff(&hring, e) != prod.coeff(&hring, e))
                    .map(|e| format!("u^{e}: {} vs {}", ev.coeff(&hring, e), prod.coeff(&hring, e))))
            }));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> HcParams {
        HcParams { n: 2, m: 2, order: 2, p: 2, k_max: 2, mult: 1 }
    }

    #[test]
    fn small_hc_suite_passes() {
        let recs = run(&small()).unwrap();
        assert!(recs.len() >= 8);
        for r in &recs {
            assert!(r.passed(), "{} {:?}", r.check_id, r.witness);
        }
    }

    #[test]
    fn small_wakimoto_suite_passes() {
        let recs = run_wakimoto(&WakimotoSuiteParams::new(small(), vec![1, 2])).unwrap();
        assert_eq!(recs.iter().filter(|r| r.check_id.contains("seed")).count(), 2 * 5);
        for r in &recs {
            assert!(r.passed(), "{} {:?}", r.check_id, r.witness);
        }
    }

    #[test]
    fn oversized_kappa_plus_is_rejected() {
        let p = small();
        let w = WakimotoSuiteParams { plus_len: 3, ..WakimotoSuiteParams::new(p, vec![1]) };
        let recs = run_wakimoto(&w).unwrap();
        assert!(recs.iter().any(|r| !r.passed()));
    }
}
