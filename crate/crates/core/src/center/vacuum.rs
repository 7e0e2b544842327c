//! The vacuum module: the quotient by the left ideal generated by all plus
//! modes, spanned by minus-only normal monomials applied to `1`.

use rayon::prelude::*;

use crate::algebra::{Algebra, Element, Gen};
use crate::error::{Error, Result};
use crate::report::Outcome;

use super::ell::{CentralSeries, EllBuilder};

/// A combination of minus-only normal monomials applied to `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct VacuumVector(Element);

fn minus_only(mono: &[Gen]) -> bool {
    mono.iter().all(|g| g.is_minus())
}

impl VacuumVector {
    /// The generating vector `1`.
    pub fn vacuum(alg: &Algebra) -> Self {
        VacuumVector(alg.one())
    }

    pub fn new(e: Element) -> Result<Self> {
        if !e.terms().keys().all(|m| minus_only(m)) {
            return Err(Error::InvalidConfig(format!("vacuum vector with plus modes: {e}")));
        }
        Ok(VacuumVector(e))
    }

    pub fn element(&self) -> &Element {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// `x · v`: in normal order plus modes stand rightmost, so every monomial
/// containing one annihilates `1`.
pub fn vacuum_act(alg: &Algebra, x: &Element, v: &VacuumVector) -> Result<VacuumVector> {
    Ok(VacuumVector(alg.mul(x, &v.0)?.filter(minus_only)))
}

/// Outcomes of the vacuum-module checks.
pub struct VacuumChecks {
    pub ell_matches_bar: Outcome,
    pub invariance: Outcome,
    pub commutativity: Outcome,
}

/// Vacuum-module checks for `ells = [ℓ_1, …, ℓ_{k_max}]` built by `b`:
/// `ℓ_k·1 = ℓ̄_k·1`, `L⁺(z)(ℓ̄_k·1) = ℓ̄_k·1` against plus modes `0..=r_max`,
/// and commutativity of the coefficients of `ℓ̄_k`, `ℓ̄_m` on `1`, all through
/// `u^{hi}`.
pub fn check_vacuum_invariants(b: &EllBuilder, ells: &[CentralSeries], hi: u32, r_max: i64) -> Result<VacuumChecks> {
    let alg = b.algebra();
    let k_max = ells.len();
    let n = alg.n();
    let one = VacuumVector::vacuum(alg);
    let mut bars = Vec::new();
    let mut ell_matches_bar = None;
    for k in 1..=k_max {
        let bar = b.ell_bar(k)?;
        if bar.order() < hi {
            return Err(Error::TruncationMismatch(format!("ℓ̄_{k} known to order {} < {hi}", bar.order())));
        }
        let l = &ells[k - 1];
        for m in l.range() {
            let lhs = vacuum_act(alg, &l.coeff(m), &one)?;
            let rhs = if m >= 0 { bar.coeff(alg, m as u32) } else { Element::zero() };
            if *lhs.element() != rhs && ell_matches_bar.is_none() {
                ell_matches_bar = Some(format!("ℓ_{k} u^{m}: {} vs ℓ̄ {rhs}", lhs.element()));
            }
        }
        bars.push((0..=hi).map(|d| VacuumVector::new(bar.coeff(alg, d))).collect::<Result<Vec<_>>>()?);
    }

    let h = alg.h();
    let mut probes = Vec::new();
    for r in 0..=r_max {
        for i in 1..=n {
            for j in 1..=n {
                probes.push((Gen::new(i, j, r), h.clone()));
            }
        }
    }
    let np = probes.len();
    let cases: Vec<(usize, u32, &(Gen, Element))> = (0..k_max)
        .flat_map(|k| (0..=hi).flat_map(move |d| (0..np).map(move |p| (k, d, p))))
        .map(|(k, d, p)| (k, d, &probes[p]))
        .collect();
    let inv: Vec<Option<String>> = cases
        .into_par_iter()
        .map(|(k, d, (g, h))| {
            let x = alg.mul(h, &alg.gen(g.i(), g.j(), g.r())?)?;
            let y = vacuum_act(alg, &x, &bars[k][d as usize])?;
            Ok((!y.is_zero()).then(|| format!("h·{g:?} ℓ̄_{} u^{d} ·1 = {}", k + 1, y.element())))
        })
        .collect::<Result<_>>()?;
    let invariance = inv.into_iter().flatten().next();

    let mut pairs = Vec::new();
    for k in 0..k_max {
        for m in k + 1..k_max {
            for d in 0..=hi {
                for e in 0..=hi {
                    pairs.push((k, m, d, e));
                }
            }
        }
    }
    let com: Vec<Option<String>> = pairs
        .into_par_iter()
        .map(|(k, m, d, e)| {
            let (x, y) = (&bars[k][d as usize], &bars[m][e as usize]);
            let xy = vacuum_act(alg, x.element(), y)?;
            let yx = vacuum_act(alg, y.element(), x)?;
            Ok((xy != yx).then(|| format!("ℓ̄_{} u^{d} and ℓ̄_{} u^{e} differ on 1", k + 1, m + 1)))
        })
        .collect::<Result<_>>()?;
    let commutativity = com.into_iter().flatten().next();
    Ok(VacuumChecks { ell_matches_bar, invariance, commutativity })
}
