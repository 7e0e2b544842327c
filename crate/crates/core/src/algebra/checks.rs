//! Soundness checks for the derived relations and the rewriting engine.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::smallvec;

use crate::algebra::config::{AlgebraConfig, Normalization};
use crate::algebra::element::{plus_modes_below, Element};
use crate::algebra::engine::Algebra;
use crate::algebra::generator::{is_normal, Gen, Monomial};
use crate::algebra::rules::RawTerm;
use crate::algebra::table::RelationTable;
use crate::error::Result;
use crate::fnorm::solve_f;
use crate::report::{expect, timed, CheckRecord, Outcome};
use crate::scalar::{expand_ratio_function, HPoly, Rational, Region, Window};

/// All generators of the relation window: `-W ≤ r < min(W, p)`.
pub fn window_gens(cfg: &AlgebraConfig) -> Vec<Gen> {
    let mut out = Vec::new();
    let top = cfg.w.min(cfg.p) as i64;
    for i in 1..=cfg.n {
        for j in 1..=cfg.n {
            for r in -(cfg.w as i64)..top {
                out.push(Gen::new(i, j, r));
            }
        }
    }
    out.sort();
    out
}

/// Which pair of generating matrices an RTT identity involves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    PlusPlus,
    MinusMinus,
    PlusMinus,
}

/// Coefficient of `u^{-a}` in `l⁺_ij(u)` as raw terms.
fn plus_coeff(i: usize, j: usize, a: usize, m: usize) -> Vec<RawTerm> {
    if a == 0 {
        return if i == j { vec![(HPoly::one(m), Monomial::new())] } else { vec![] };
    }
    vec![(HPoly::h(m).neg(), smallvec![Gen::new(i, j, a as i64 - 1)])]
}

/// Coefficient of `u^{b}` in `l⁻_ij(u)` as raw terms.
fn minus_coeff(i: usize, j: usize, b: usize, m: usize) -> Vec<RawTerm> {
    let mut out = vec![(HPoly::h(m), smallvec![Gen::new(i, j, -(b as i64) - 1)])];
    if b == 0 && i == j {
        out.push((HPoly::one(m), Monomial::new()));
    }
    out
}

fn raw_mul(x: &[RawTerm], y: &[RawTerm], s: &HPoly) -> Vec<RawTerm> {
    let mut out = Vec::new();
    for (a, u) in x {
        for (b, w) in y {
            let c = a.mul(b).mul(s);
            if c.is_zero() {
                continue;
            }
            let mut word = u.clone();
            word.extend_from_slice(w);
            out.push((c, word));
        }
    }
    out
}

/// Substitutes the engine's products back into the RTT relation of a sector
/// and returns the first nonzero coefficient, if any, inside the box
/// `0 ≤ a, b ≤ depth` of spectral exponents.
///
/// Same-sign sectors use the cleared form `((u-v) + hP) L_1 L_2 = L_2 L_1 ((u-v) + hP)`.
/// The mixed sector expands `R(u - v ∓ hc/2)` directly in `|u| > |v|`.
pub fn rtt_residual(alg: &Algebra, sector: Sector, depth: usize) -> Result<Outcome> {
    rtt_residual_at(alg, sector, depth, &alg.config().c.clone())
}

/// As [`rtt_residual`], with the R-matrix shifts taken at level `c` instead of
/// the algebra's own level (a negative control when they differ).
pub fn rtt_residual_at(alg: &Algebra, sector: Sector, depth: usize, c: &Rational) -> Result<Outcome> {
    let n = alg.n();
    let m = alg.m();
    let one = HPoly::one(m);
    let h = HPoly::h(m);
    let neg = one.neg();
    let idx: Vec<(usize, usize, usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).flat_map(move |j| (1..=n).flat_map(move |k| (1..=n).map(move |l| (i, j, k, l)))))
        .collect();
    match sector {
        Sector::PlusPlus | Sector::MinusMinus => {
            let plus = sector == Sector::PlusPlus;
            // coefficient of u^{∓x}; x < 0 gives nothing
            let co = |i: usize, j: usize, x: i64| -> Vec<RawTerm> {
                if x < 0 {
                    vec![]
                } else if plus {
                    plus_coeff(i, j, x as usize, m)
                } else {
                    minus_coeff(i, j, x as usize, m)
                }
            };
            // multiplying by u moves the u-exponent by one: in the plus
            // sector that is index + 1, in the minus sector index - 1
            let du: i64 = if plus { 1 } else { -1 };
            for &(i, j, k, l) in &idx {
                for a in 0..=depth as i64 {
                    for b in 0..=depth as i64 {
                        let mut raw = Vec::new();
                        // (u - v)(L_ij(u) L_kl(v) - L_kl(v) L_ij(u))
                        raw.extend(raw_mul(&co(i, j, a + du), &co(k, l, b), &one));
                        raw.extend(raw_mul(&co(i, j, a), &co(k, l, b + du), &neg));
                        raw.extend(raw_mul(&co(k, l, b), &co(i, j, a + du), &neg));
                        raw.extend(raw_mul(&co(k, l, b + du), &co(i, j, a), &one));
                        // h(L_kj(u) L_il(v) - L_kj(v) L_il(u))
                        raw.extend(raw_mul(&co(k, j, a), &co(i, l, b), &h));
                        raw.extend(raw_mul(&co(k, j, b), &co(i, l, a), &h.neg()));
                        let e = alg.eval_raw(&raw)?;
                        if !e.is_zero() {
                            return Ok(Some(format!("{sector:?} entry ({i}{k},{j}{l}) at (a, b) = ({a}, {b}): {e}")));
                        }
                    }
                }
            }
            Ok(None)
        }
        Sector::PlusMinus => {
            let cfg = alg.config();
            let f = match cfg.normalization {
                Normalization::Unnormalized => {
                    let mut v = vec![Rational::zero(); m + 1];
                    v[0] = Rational::one();
                    v
                }
                Normalization::Normalized => solve_f(n, m)?.coeffs,
            };
            // R(x) = φ_I(x) + φ_P(x) P with φ_I = f, φ_P = f·h/x
            let mut fp = vec![Rational::zero()];
            fp.extend(f.iter().cloned());
            let win = Window::new(-(depth as i32), 0, 0, depth as i32);
            let half = Rational::new(1, 2);
            let g1 = -(c * &half);
            let g2 = c * &half;
            let ri1 = expand_ratio_function(&f, &g1, Region::UOverV, win, m)?;
            let rp1 = expand_ratio_function(&fp, &g1, Region::UOverV, win, m)?;
            let ri2 = expand_ratio_function(&f, &g2, Region::UOverV, win, m)?;
            let rp2 = expand_ratio_function(&fp, &g2, Region::UOverV, win, m)?;
            let zero = HPoly::zero(m);
            let at = |s: &crate::scalar::BiRegionSeries, aa: usize, bb: usize| -> HPoly {
                s.get(-(aa as i32), bb as i32).cloned().unwrap_or_else(|| zero.clone())
            };
            for &(i, j, k, l) in &idx {
                for a in 0..=depth {
                    for b in 0..=depth {
                        let mut raw = Vec::new();
                        for aa in 0..=a {
                            for bb in 0..=b {
                                let (xa, yb) = (a - aa, b - bb);
                                // R(x_1) L⁺_1(u) L⁻_2(v)
                                let (ci, cp) = (at(&ri1, aa, bb), at(&rp1, aa, bb));
                                raw.extend(raw_mul(&plus_coeff(i, j, xa, m), &minus_coeff(k, l, yb, m), &ci));
                                raw.extend(raw_mul(&plus_coeff(k, j, xa, m), &minus_coeff(i, l, yb, m), &cp));
                                // L⁻_2(v) L⁺_1(u) R(x_2)
                                let (ci, cp) = (at(&ri2, aa, bb), at(&rp2, aa, bb));
                                raw.extend(raw_mul(&minus_coeff(k, l, yb, m), &plus_coeff(i, j, xa, m), &ci.neg()));
                                raw.extend(raw_mul(&minus_coeff(k, j, yb, m), &plus_coeff(i, l, xa, m), &cp.neg()));
                            }
                        }
                        let e = alg.eval_raw(&raw)?;
                        if !e.is_zero() {
                            return Ok(Some(format!("mixed entry ({i}{k},{j}{l}) at u^-{a} v^{b}: {e}")));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

/// `[l_ij^{(0)}, l_kl^{(s)}] = δ_kj l_il^{(s)} - δ_il l_kj^{(s)}` on the window.
pub fn base_commutators(alg: &Algebra) -> Result<Outcome> {
    let cfg = alg.config();
    for g2 in window_gens(cfg) {
        for i in 1..=cfg.n {
            for j in 1..=cfg.n {
                let g = Gen::new(i, j, 0);
                let (k, l, s) = (g2.i(), g2.j(), g2.r());
                let lhs = alg.nf(&[g, g2])?.sub(&alg.nf(&[g2, g])?);
                let mut want = Element::zero();
                if k == j {
                    want = want.add(&alg.gen(i, l, s)?);
                }
                if i == l {
                    want = want.sub(&alg.gen(k, j, s)?);
                }
                if lhs != want {
                    return Ok(Some(format!("[{g:?}, {g2:?}] = {lhs}, expected {want}")));
                }
            }
        }
    }
    Ok(None)
}

/// The loop-algebra bracket with central term: `[l_ij^{(r)}, l_kl^{(s)}]` at
/// `h = 0` is `δ_kj l_il^{(r+s)} - δ_il l_kj^{(r+s)} + r δ_{r+s,0} c (δ_il δ_kj - ν δ_ij δ_kl / n)`,
/// with `ν = 1` for the normalized R-matrix and `0` otherwise.
pub fn loop_bracket(alg: &Algebra, g: Gen, g2: Gen) -> Result<Element> {
    let cfg = alg.config();
    let (i, j, r, k, l, s) = (g.i(), g.j(), g.r(), g2.i(), g2.j(), g2.r());
    let mut want = Element::zero();
    if k == j {
        want = want.add(&alg.gen(i, l, r + s)?);
    }
    if i == l {
        want = want.sub(&alg.gen(k, j, r + s)?);
    }
    if r + s == 0 && r != 0 {
        let mut z = Rational::zero();
        if i == l && k == j {
            z += &Rational::one();
        }
        if cfg.normalization == Normalization::Normalized && i == j && k == l {
            z -= &Rational::new(1, cfg.n as i64);
        }
        want = want.add(&alg.scalar(z * &cfg.c * Rational::from_int(r)));
    }
    Ok(want)
}

/// The `h⁰` part of every window commutator equals [`loop_bracket`].
pub fn graded_leading_terms(alg: &Algebra) -> Result<Outcome> {
    let gens = window_gens(alg.config());
    for (x, &g) in gens.iter().enumerate() {
        for &g2 in &gens[..x] {
            let br = alg.nf(&[g, g2])?.sub(&alg.nf(&[g2, g])?).h_part(0);
            let want = loop_bracket(alg, g, g2)?;
            if br != want {
                return Ok(Some(format!("[{g:?}, {g2:?}] at h⁰ = {br}, expected {want}")));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random,
}

/// Rewrites a word to normal form by applying pair rules one adjacent
/// inversion at a time, choosing the inversion by `strategy`. Independent of
/// the engine's multiplication; only the pair rules are shared. Assumes no
/// cutoff is reached (all plus modes of the word sum to less than `p`).
pub fn rewrite(alg: &Algebra, word: &[Gen], strategy: Strategy, rng: &mut ChaCha8Rng) -> Result<Element> {
    let m = alg.m();
    let mut pending: BTreeMap<Vec<Gen>, HPoly> = BTreeMap::new();
    pending.insert(word.to_vec(), HPoly::one(m));
    let mut out = Element::zero();
    while let Some((w, c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        let inv: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&t| w[t] > w[t + 1]).collect();
        if inv.is_empty() {
            debug_assert!(is_normal(&w));
            out.add_term(Monomial::from_slice(&w), &c);
            continue;
        }
        let t = match strategy {
            Strategy::Leftmost => inv[0],
            Strategy::Rightmost => inv[inv.len() - 1],
            Strategy::Random => *inv.choose(rng).expect("nonempty"),
        };
        let rule = alg.rule(w[t], w[t + 1], m)?;
        for (mono, rc) in rule.terms() {
            let mut nw = w[..t].to_vec();
            nw.extend_from_slice(mono);
            nw.extend_from_slice(&w[t + 2..]);
            let nc = c.mul(rc);
            if nc.is_zero() {
                continue;
            }
            pending.entry(nw).or_insert_with(|| HPoly::zero(m)).add_assign(&nc);
        }
    }
    Ok(out)
}

fn random_word(cfg: &AlgebraConfig, len: usize, rmax: i64, rng: &mut ChaCha8Rng) -> Vec<Gen> {
    (0..len)
        .map(|_| Gen::new(rng.gen_range(1..=cfg.n), rng.gen_range(1..=cfg.n), rng.gen_range(-rmax..=rmax)))
        .collect()
}

/// Normal forms agree across rewriting strategies and with the engine.
pub fn confluence(alg: &Algebra, samples: usize, len: usize, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = alg.config();
    let rmax = 2;
    if (len as i64) * rmax >= cfg.p as i64 {
        return Err(crate::Error::InvalidConfig("confluence needs p above the plus-mode sum of the words".into()));
    }
    for _ in 0..samples {
        let w = random_word(cfg, len, rmax, &mut rng);
        let reference = alg.nf(&w)?;
        for s in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random] {
            let e = rewrite(alg, &w, s, &mut rng)?;
            if e != reference {
                return Ok(Some(format!("word {w:?}: {s:?} gives {e}, engine gives {reference}")));
            }
        }
    }
    Ok(None)
}

/// Jacobi identity on random triples of generators.
pub fn jacobi(alg: &Algebra, samples: usize, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = alg.config();
    for _ in 0..samples {
        let w = random_word(cfg, 3, 2, &mut rng);
        let e: Vec<Element> = w.iter().map(|&g| Element::gen(g, alg.m())).collect();
        let (x, y, z) = (&e[0], &e[1], &e[2]);
        let t1 = alg.bracket(x, &alg.bracket(y, z)?)?;
        let t2 = alg.bracket(y, &alg.bracket(z, x)?)?;
        let t3 = alg.bracket(z, &alg.bracket(x, y)?)?;
        let s = t1.add(&t2).add(&t3);
        if !s.is_zero() {
            return Ok(Some(format!("Jacobi fails on {w:?}: {s}")));
        }
    }
    Ok(None)
}

/// Same-sign rules do not depend on the normalization of the R-matrix.
pub fn normalization_independence(cfg: &AlgebraConfig) -> Result<Outcome> {
    let a = Algebra::new(cfg.with_normalization(Normalization::Normalized))?;
    let b = Algebra::new(cfg.with_normalization(Normalization::Unnormalized))?;
    let gens = window_gens(cfg);
    for (x, &g) in gens.iter().enumerate() {
        for &g2 in &gens[..x] {
            if g.is_plus() != g2.is_plus() {
                continue;
            }
            let (ra, rb) = (a.rule(g, g2, cfg.m)?, b.rule(g, g2, cfg.m)?);
            if ra != rb {
                return Ok(Some(format!("rule {g:?}·{g2:?}: normalized {ra}, unnormalized {rb}")));
            }
        }
    }
    Ok(None)
}

/// Mixed rules derived at `M + 3` other levels and interpolated in `c` agree
/// with the rules derived directly at the target level.
pub fn c_specialization(cfg: &AlgebraConfig, target: &Rational, pairs: &[(Gen, Gen)]) -> Result<Outcome> {
    let deg = cfg.m + 2;
    let nodes: Vec<Rational> = (0..=deg as i64)
        .map(|t| Rational::from_int(t) + Rational::new(1, 3))
        .filter(|q| q != target)
        .take(deg + 1)
        .collect();
    let algs: Vec<Algebra> = nodes.iter().map(|c| Algebra::new(cfg.with_c(c.clone()))).collect::<Result<_>>()?;
    let direct = Algebra::new(cfg.with_c(target.clone()))?;
    // Lagrange weights at the target
    let weights: Vec<Rational> = (0..nodes.len())
        .map(|a| {
            let mut w = Rational::one();
            for b in 0..nodes.len() {
                if a != b {
                    w = w * (target - &nodes[b]) / (&nodes[a] - &nodes[b]);
                }
            }
            w
        })
        .collect();
    for &(g, g2) in pairs {
        let mut interp = Element::zero();
        for (alg, w) in algs.iter().zip(&weights) {
            interp = interp.add(&alg.rule(g, g2, cfg.m)?.scale_q(w));
        }
        let want = direct.rule(g, g2, cfg.m)?;
        if interp != *want {
            return Ok(Some(format!("rule {g:?}·{g2:?}: interpolated {interp}, direct {want}")));
        }
    }
    Ok(None)
}

/// Compares an element built at cutoffs `p` and `p + 1` on monomials whose
/// plus modes all lie below `q`.
pub fn cutoff_stability<F>(cfg: &AlgebraConfig, q: i64, build: F) -> Result<Outcome>
where
    F: Fn(&Algebra) -> Result<Element>,
{
    let a = Algebra::new(cfg.clone())?;
    let b = Algebra::new(cfg.with_p(cfg.p + 1))?;
    let keep = |mono: &[Gen]| plus_modes_below(mono, q);
    let (x, y) = (build(&a)?.filter(keep), build(&b)?.filter(keep));
    Ok(expect(x == y, || format!("cutoff {} gives {x}, cutoff {} gives {y} below {q}", cfg.p, cfg.p + 1)))
}

/// The `relations` suite on one configuration.
pub fn check_relations(cfg: &AlgebraConfig, seed: u64) -> Vec<CheckRecord> {
    check_relations_with(cfg, seed, None)
}

/// The `relations` suite, with the rule cache seeded from a table derived
/// for the same configuration.
pub fn check_relations_with(cfg: &AlgebraConfig, seed: u64, table: Option<&RelationTable>) -> Vec<CheckRecord> {
    let suite = "relations";
    let tag = format!("n={}/M={}/W={}/{}", cfg.n, cfg.m, cfg.w, cfg.normalization);
    let id = |s: &str| format!("{s}/{tag}");
    let alg = match Algebra::new(cfg.clone()).and_then(|a| {
        if let Some(t) = table {
            a.preload(t)?;
        }
        Ok(a)
    }) {
        Ok(a) => a,
        Err(e) => return vec![timed(suite, &id("config"), "algebra configuration", || Err(e))],
    };
    let depth = (cfg.w as usize).min(cfg.p as usize);
    let mut out = vec![
        timed(suite, &id("base-commutators"), "zero-mode commutators", || base_commutators(&alg)),
        timed(suite, &id("graded-leading-terms"), "graded leading terms", || graded_leading_terms(&alg)),
    ];
    for (sector, name) in
        [(Sector::PlusPlus, "rtt-plus-plus"), (Sector::MinusMinus, "rtt-minus-minus"), (Sector::PlusMinus, "rtt-mixed")]
    {
        out.push(timed(suite, &id(name), "RTT relations", || rtt_residual(&alg, sector, depth.min(3))));
    }
    out.push(timed(suite, &id("normalization-independence"), "same-sign relations", || {
        normalization_independence(cfg)
    }));
    out.push(timed(suite, &id("central-charge-specialization"), "mixed RTT relations", || {
        let target = Rational::from_int(-(cfg.n as i64));
        let gens = window_gens(cfg);
        let pairs: Vec<(Gen, Gen)> = gens
            .iter()
            .filter(|g| g.is_plus() && g.r() <= 1)
            .flat_map(|&g| gens.iter().filter(|h| h.is_minus() && h.r() >= -2).map(move |&h| (g, h)))
            .collect();
        c_specialization(cfg, &target, &pairs)
    }));
    // random words of four generators with |r| ≤ 2 reorder into minus modes
    // down to about -(8 + M); give them room whatever the suite window
    let big_p = AlgebraConfig { p: cfg.p.max(9), w: cfg.w.max(4 + cfg.m as u32), ..cfg.clone() };
    let free = Algebra::new(big_p);
    out.push(timed(suite, &id("confluence"), "PBW rewriting", || confluence(free.as_ref().map_err(Clone::clone)?, 12, 4, seed)));
    out.push(timed(suite, &id("jacobi"), "associativity", || jacobi(free.as_ref().map_err(Clone::clone)?, 12, seed)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, norm: Normalization, c: i64) -> AlgebraConfig {
        AlgebraConfig::new(n, Rational::from_int(c), norm, 3, 3, 3, 4).unwrap()
    }

    #[test]
    fn rtt_holds_in_every_sector() {
        for norm in [Normalization::Normalized, Normalization::Unnormalized] {
            for c in [-2, 0, 3] {
                let alg = Algebra::new(cfg(2, norm, c)).unwrap();
                for s in [Sector::PlusPlus, Sector::MinusMinus, Sector::PlusMinus] {
                    assert_eq!(rtt_residual(&alg, s, 2).unwrap(), None, "{norm} c={c} {s:?}");
                }
            }
        }
    }

    #[test]
    fn rtt_detects_a_wrong_level() {
        let alg = Algebra::new(cfg(2, Normalization::Unnormalized, 1)).unwrap();
        assert!(rtt_residual_at(&alg, Sector::PlusMinus, 2, &Rational::zero()).unwrap().is_some());
    }

    #[test]
    fn leading_terms_and_base_commutators() {
        for norm in [Normalization::Normalized, Normalization::Unnormalized] {
            let alg = Algebra::new(cfg(2, norm, -2)).unwrap();
            assert_eq!(base_commutators(&alg).unwrap(), None);
            assert_eq!(graded_leading_terms(&alg).unwrap(), None);
        }
    }

    #[test]
    fn strategies_agree() {
        let alg = Algebra::new(AlgebraConfig { p: 12, ..cfg(2, Normalization::Normalized, -2) }).unwrap();
        assert_eq!(confluence(&alg, 8, 4, 7).unwrap(), None);
        assert_eq!(jacobi(&alg, 8, 7).unwrap(), None);
    }

    #[test]
    fn same_sign_rules_ignore_normalization() {
        assert_eq!(normalization_independence(&cfg(2, Normalization::Normalized, -2)).unwrap(), None);
    }

    #[test]
    fn interpolation_in_c() {
        let c = cfg(2, Normalization::Normalized, 0);
        let pairs = [(Gen::new(1, 2, 1), Gen::new(2, 1, -1)), (Gen::new(1, 1, 2), Gen::new(2, 2, -1))];
        assert_eq!(c_specialization(&c, &Rational::from_int(-2), &pairs).unwrap(), None);
    }

    #[test]
    fn polynomial_elements_are_cutoff_stable() {
        let c = cfg(2, Normalization::Normalized, -2);
        let out = cutoff_stability(&c, 2, |a| a.nf(&[Gen::new(1, 2, 1), Gen::new(2, 1, -1), Gen::new(1, 1, 0)]));
        assert_eq!(out.unwrap(), None);
    }
}
