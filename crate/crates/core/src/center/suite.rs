//! The `center` verification suite.

use crate::algebra::element::plus_modes_below;
use crate::algebra::{Algebra, AlgebraConfig, Normalization};
use crate::error::{Error, Result};
use crate::gauss::decomp::{column_qdet, Sign};
use crate::gauss::build_l;
use crate::report::{expect, timed, CheckRecord};
use crate::scalar::Rational;

use super::ell::{CentralSeries, EllBuilder, Route};
use super::minors::{
    commutator_witness, inverse_entry_by_minors, probes, qdet_centrality, quantum_minor, quantum_minor_columns,
    same_series, QuantumMinorSpec,
};
use super::vacuum::check_vacuum_invariants;

pub const SUITE: &str = "center";

#[derive(Clone, Debug)]
pub struct CenterParams {
    pub n: usize,
    pub m: usize,
    /// Cutoff for `ℓ_k`; centrality is repeated at `p + 1`.
    pub p: u32,
    /// Laurent exponents of `ℓ_k` that are built and probed.
    pub lo: i32,
    pub hi: i32,
    /// Probes are all `l_ij^{(r)}` with `|r| ≤ probe`.
    pub probe: i64,
    /// qdet coefficients through `u^{∓qdet_order}` are probed at each level.
    pub qdet_order: u32,
    pub qdet_levels: Vec<Rational>,
    /// Run the non-critical negative control for `ℓ_1`.
    pub negative_control: bool,
}

impl CenterParams {
    pub fn new(n: usize, m: usize, p: u32) -> Self {
        CenterParams {
            n,
            m,
            p,
            lo: -2,
            hi: 2,
            probe: 2,
            qdet_order: 4,
            qdet_levels: vec![Rational::from_int(-(n as i64)), Rational::zero()],
            negative_control: true,
        }
    }

    /// Configuration for `ℓ_k` at cutoff `p` and level `c`: the window reaches
    /// every minus mode the pairing uses.
    pub fn ell_config(&self, p: u32, c: Rational) -> Result<AlgebraConfig> {
        let m = self.m as u32;
        let w = self.hi.max(1) as u32 + m * p + m + 1;
        AlgebraConfig::new(self.n, c, Normalization::Normalized, self.m, self.hi.max(1) as u32, w, p)
    }

    /// Plus modes below this bound are unaffected by the cutoff at `p` in a
    /// commutator with any probe: passing `l^{(-s)}` lowers a plus mode by at
    /// most `s - 1 + M`.
    pub fn probe_bound(&self, p: u32) -> i64 {
        p as i64 - self.probe - self.m as i64
    }

    fn critical(&self) -> Rational {
        Rational::from_int(-(self.n as i64))
    }
}

fn minor_checks(n: usize, m: usize, out: &mut Vec<CheckRecord>) -> Result<()> {
    let order = 3;
    let cfg = AlgebraConfig::for_series(n, Rational::from_int(-(n as i64)), Normalization::Normalized, m, order)?;
    let alg = Algebra::new(cfg)?;
    let all: Vec<usize> = (1..=n).collect();
    for sign in [Sign::Plus, Sign::Minus] {
        let extra = if sign == Sign::Minus { m as u32 } else { 0 };
        let l = build_l(&alg, sign, order + extra)?;
        let tag = |s: &str| format!("n{n}/{}/minors/{s}", sign.symbol());
        out.push(timed(SUITE, &tag("qdet-is-full-minor"), "quantum determinant as the full quantum minor", || {
            let a = quantum_minor(&alg, &l, &QuantumMinorSpec::new(&all, &all, sign))?;
            Ok(same_series(&a, &column_qdet(&alg, &l, &Rational::zero())?, "qdet"))
        }));
        out.push(timed(SUITE, &tag("row-column-expansions"), "row and column expansions of quantum minors", || {
            for k in 1..=n {
                for rows in subsets(n, k) {
                    for cols in subsets(n, k) {
                        let s = QuantumMinorSpec::new(&rows, &cols, sign);
                        let w = same_series(&quantum_minor(&alg, &l, &s)?, &quantum_minor_columns(&alg, &l, &s)?, "expansions");
                        if let Some(w) = w {
                            return Ok(Some(format!("{rows:?}/{cols:?}: {w}")));
                        }
                    }
                }
            }
            Ok(None)
        }));
        out.push(timed(SUITE, &tag("antisymmetry"), "quantum minors are antisymmetric in rows and columns", || {
            let s = |r: &[usize], c: &[usize]| quantum_minor(&alg, &l, &QuantumMinorSpec::new(r, c, sign));
            let base = s(&[1, 2], &[1, 2])?;
            if base.is_zero() {
                return Ok(Some("the 12/12 minor vanished".into()));
            }
            let neg = base.neg(&alg);
            for (r, c) in [([2, 1], [1, 2]), ([1, 2], [2, 1])] {
                if let Some(w) = same_series(&s(&r, &c)?, &neg, "swap") {
                    return Ok(Some(format!("{r:?}/{c:?}: {w}")));
                }
            }
            for (r, c) in [([1, 1], [1, 2]), ([1, 2], [2, 2]), ([2, 2], [1, 1])] {
                if !s(&r, &c)?.is_zero() {
                    return Ok(Some(format!("repeated indices {r:?}/{c:?} gave a nonzero minor")));
                }
            }
            Ok(None)
        }));
    }
    let lp = build_l(&alg, Sign::Plus, order)?;
    out.push(timed(SUITE, &format!("n{n}/+/minors/inverse-entries"), "entries of the inverse matrix as quantum minors", || {
        let inv = lp.invert(&alg)?;
        for i in 1..=n {
            for j in 1..=n {
                let e = inverse_entry_by_minors(&alg, &lp, Sign::Plus, i, j)?;
                if let Some(w) = same_series(&e, inv.get(i - 1, j - 1), "inverse") {
                    return Ok(Some(format!("({i},{j}): {w}")));
                }
            }
        }
        Ok(None)
    }));
    Ok(())
}

/// Increasing `k`-subsets of `1..=n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k..=n).flat_map(|last| subsets(last - 1, k - 1).into_iter().map(move |mut s| {
        s.push(last);
        s
    })).collect()
}

fn ell_centrality(b: &EllBuilder, l: &CentralSeries, pr: &[crate::algebra::Gen], q: i64) -> Result<Option<String>> {
    let (tested, w) = commutator_witness(b.algebra(), &l.pairs(), pr, |mono| plus_modes_below(mono, q))?;
    if tested == 0 {
        return Ok(Some("no nonzero coefficient to probe".into()));
    }
    Ok(w)
}

pub fn run(p: &CenterParams) -> Result<Vec<CheckRecord>> {
    let n = p.n;
    let mut out = Vec::new();
    minor_checks(n, p.m.min(3), &mut out)?;

    let pr = probes(n, -p.probe..=p.probe);
    for c in &p.qdet_levels {
        let cfg = AlgebraConfig::for_series(n, c.clone(), Normalization::Normalized, p.m, p.qdet_order)?
            .with_p(p.qdet_order + p.probe as u32 + 2);
        let alg = Algebra::new(cfg)?;
        for sign in [Sign::Plus, Sign::Minus] {
            out.push(timed(SUITE, &format!("n{n}/qdet-centrality/{}/c={c}", sign.symbol()), "quantum determinant coefficients are central at any level", || {
                qdet_centrality(&alg, sign, p.qdet_order, &pr)
            }));
        }
    }

    let crit = p.critical();
    let a = Algebra::new(p.ell_config(p.p, crit.clone())?)?;
    let a1 = Algebra::new(p.ell_config(p.p + 1, crit.clone())?)?;
    let b = EllBuilder::new(&a, n, p.lo, p.hi)?;
    let b1 = EllBuilder::new(&a1, n, p.lo, p.hi)?;
    let q = p.probe_bound(p.p);
    let mut ells = Vec::new();
    for k in 1..=n {
        let tag = |s: &str| format!("n{n}/ell{k}/{s}");
        let trace = b.ell(k, Route::Trace);
        let trace = match trace {
            Ok(t) => t,
            Err(e) => {
                out.push(timed(SUITE, &tag("build"), "ℓ_k by the partial trace", || Err(e)));
                continue;
            }
        };
        for (route, name) in [(Route::Increasing, "formula-increasing"), (Route::Decreasing, "formula-decreasing")] {
            out.push(timed(SUITE, &tag(name), "ℓ_k in terms of the entries of L⁻ and L⁺ inverse", || {
                let r = b.ell(k, route)?;
                Ok(trace.first_difference(&r).map(|m| format!("coefficient u^{m}: trace {} vs formula {}", trace.coeff(m), r.coeff(m))))
            }));
        }
        if k == n {
            out.push(timed(SUITE, &tag("qdet-identity"), "ℓ_n = qdet L⁻(u) qdet L⁺(u + hn/2)^{-1}", || {
                let r = b.ell_n_by_qdet()?;
                Ok(trace.first_difference(&r).map(|m| format!("coefficient u^{m}: {} vs {}", trace.coeff(m), r.coeff(m))))
            }));
        }
        out.push(timed(SUITE, &tag("fusion"), "A_k L⁻_1⋯L⁻_k = L⁻_k⋯L⁻_1 A_k", || b.fusion_commutes(k)));
        out.push(timed(SUITE, &tag(&format!("centrality/p={}", p.p)), "ℓ_k coefficients are central at the critical level", || {
            ell_centrality(&b, &trace, &pr, q)
        }));
        let trace1 = b1.ell(k, Route::Trace);
        out.push(timed(SUITE, &tag(&format!("centrality/p={}", p.p + 1)), "ℓ_k coefficients are central at the critical level", || {
            ell_centrality(&b1, trace1.as_ref().map_err(Clone::clone)?, &pr, p.probe_bound(p.p + 1))
        }));
        out.push(timed(SUITE, &tag("cutoff-stability"), "completion by the cutoff ideal", || {
            let t1 = trace1.as_ref().map_err(Clone::clone)?;
            let keep = |mono: &[crate::algebra::Gen]| plus_modes_below(mono, q);
            for m in trace.range() {
                let (x, y) = (trace.coeff(m).filter(keep), t1.coeff(m).filter(keep));
                if x != y {
                    return Ok(Some(format!("u^{m} below {q}: cutoff {} gives {x}, cutoff {} gives {y}", p.p, p.p + 1)));
                }
            }
            Ok(None)
        }));
        ells.push(trace);
    }
    if p.negative_control {
        out.push(timed(SUITE, &format!("n{n}/ell1/non-critical-control"), "centrality needs the critical level", || {
            let a0 = Algebra::new(p.ell_config(p.p, Rational::zero())?)?;
            let b0 = EllBuilder::new(&a0, 1, p.lo, p.hi)?;
            let l = b0.ell(1, Route::Trace)?;
            let w = ell_centrality(&b0, &l, &pr, q)?;
            Ok(expect(w.is_some(), || "ℓ_1 commutes with every probe at c = 0".into()))
        }));
    }
    if ells.len() == n {
        let mut vac = None;
        out.push(timed(SUITE, &format!("n{n}/vacuum/ell-on-vacuum"), "ℓ_k(u)·1 = ℓ̄_k(u)·1", || {
            let v = check_vacuum_invariants(&b, &ells, p.hi.max(0) as u32, p.probe)?;
            let o = v.ell_matches_bar.clone();
            vac = Some(v);
            Ok(o)
        }));
        for (id, anchor, invariance) in [
            ("invariance", "ℓ̄_k(u)·1 lies in the invariants of L⁺(z)", true),
            ("commutativity", "coefficients of ℓ̄_k commute on the vacuum", false),
        ] {
            out.push(timed(SUITE, &format!("n{n}/vacuum/{id}"), anchor, || {
                let v = vac.as_ref().ok_or_else(|| Error::InvalidConfig("vacuum checks did not run".into()))?;
                Ok(if invariance { v.invariance.clone() } else { v.commutativity.clone() })
            }));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_increasing() {
        assert_eq!(subsets(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn small_suite_passes() {
        let mut p = CenterParams::new(2, 2, 5);
        p.probe = 1;
        p.qdet_order = 2;
        p.lo = -1;
        p.hi = 1;
        let recs = run(&p).unwrap();
        assert!(recs.len() > 15);
        for r in recs {
            assert!(r.passed(), "{}: {:?}", r.check_id, r.witness);
        }
    }
}
