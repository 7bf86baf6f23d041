//! Randomized exact checks of the valuation, equivariance and collapse laws.

use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{
    random_diagonal, random_direction, random_polytope, random_positive_rational, random_spec,
    random_unimodular, random_vector, TrialConfig,
};
use super::report::{CheckReport, TrialOutcome};
use crate::error::{Error, Result};
use crate::geometry::integrals::{simplex_moment, simplex_volume};
use crate::geometry::{Halfspace, Polytope, RMat, RVec};
use crate::io::{polytope_json, rational_json, rvec_json};
use crate::rational::{format_rational, int, pow_rational_exponent, Rational};
use crate::valuation::{m_star, Family, Operator, SupportBody, ValuationSpec, Variance};

/// What a check is run against: a basis operator or a family member.
#[derive(Clone, Debug)]
pub enum Target {
    Op(Operator),
    Spec(ValuationSpec),
}

impl Target {
    pub fn apply(&self, k: &Polytope) -> Result<SupportBody> {
        match self {
            Target::Op(op) => op.apply(k),
            Target::Spec(s) => s.apply(k),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Target::Op(op) => op.name().to_string(),
            Target::Spec(s) => s.to_string(),
        }
    }

    /// `(q, r, variance)` in ambient dimension `n`.
    pub fn exponents(&self, n: usize) -> (Rational, Rational, Variance) {
        match self {
            Target::Op(op) => {
                let d = op.descriptor(n);
                (d.q, d.r, d.variance)
            }
            Target::Spec(s) => match s.family() {
                Family::Degree1 => (int(0), int(1), Variance::Equivariant),
                Family::DegreeNPlus1 => (int(1), int(n as i64 + 1), Variance::Equivariant),
            },
        }
    }
}

impl From<Operator> for Target {
    fn from(op: Operator) -> Self {
        Target::Op(op)
    }
}

impl From<ValuationSpec> for Target {
    fn from(s: ValuationSpec) -> Self {
        Target::Spec(s)
    }
}

/// Runs `trial` for every index in parallel and merges results in index order.
pub(crate) fn run_trials<F>(report: &mut CheckReport, count: usize, trial: F)
where
    F: Fn(usize) -> Result<TrialOutcome> + Sync,
{
    let outcomes: Vec<TrialOutcome> = (0..count)
        .into_par_iter()
        .map(|t| {
            trial(t).unwrap_or_else(|e| TrialOutcome::Failed(json!({"trial": t, "error": e.to_string()})))
        })
        .collect();
    report.absorb(outcomes);
}

/// A strictly positive convex combination of the vertices: a relative interior point.
pub fn interior_point(p: &Polytope, rng: &mut impl Rng) -> RVec {
    let weights: Vec<Rational> = p.vertices().iter().map(|_| random_positive_rational(rng, 5, 1)).collect();
    let total: Rational = weights.iter().sum();
    let mut c = RVec::zeros(p.dim());
    for (w, v) in weights.iter().zip(p.vertices()) {
        c = c.add_scaled(&(w / &total), v);
    }
    c
}

fn values(body: &SupportBody, dirs: &[RVec]) -> Result<Vec<Rational>> {
    dirs.iter().map(|u| body.value(u)).collect()
}

/// The four bodies of a valuation instance: `K`, `L`, `K ∪ L`, `K ∩ L`.
struct Split {
    k: Polytope,
    l: Polytope,
    union: Polytope,
    inter: Polytope,
    cut: Value,
}

fn hyperplane_split(p: &Polytope, rng: &mut impl Rng) -> Result<Option<Split>> {
    let c = interior_point(p, rng);
    let a = random_direction(p.dim(), rng);
    let h = Halfspace::new(a.clone(), a.dot(&c))?;
    let (Some(k), Some(l), Some(inter)) = (p.clip(&h)?, p.clip(&h.complement())?, p.slice(&h)?) else {
        return Ok(None);
    };
    if !k.is_full_dimensional() || !l.is_full_dimensional() {
        return Ok(None);
    }
    Ok(Some(Split {
        k,
        l,
        union: p.clone(),
        inter,
        cut: json!({"normal": rvec_json(&a), "offset": rational_json(h.offset())}),
    }))
}

/// Overlapping slab split: `K ∩ L` is a full-dimensional slab.
fn slab_split(p: &Polytope, rng: &mut impl Rng) -> Result<Option<Split>> {
    let a = random_direction(p.dim(), rng);
    let c1 = interior_point(p, rng);
    let c2 = interior_point(p, rng);
    let (lo, hi) = {
        let (x, y) = (a.dot(&c1), a.dot(&c2));
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    };
    if lo == hi {
        return Ok(None);
    }
    let below = Halfspace::new(a.clone(), hi.clone())?;
    let above = Halfspace::new(-&a, -lo.clone())?;
    let (Some(k), Some(l)) = (p.clip(&below)?, p.clip(&above)?) else {
        return Ok(None);
    };
    let Some(inter) = k.clip(&above)? else {
        return Ok(None);
    };
    Ok(Some(Split {
        k,
        l,
        union: p.clone(),
        inter,
        cut: json!({"normal": rvec_json(&a), "slab": [rational_json(&lo), rational_json(&hi)]}),
    }))
}

/// `ΦK + ΦL = Φ(K ∪ L) + Φ(K ∩ L)` on hyperplane splits of random polytopes.
/// The centroid body, which is not a valuation, is tested on overlapping
/// slab splits so that every piece has positive volume.
pub fn check_valuation_identity(target: &Target, cfg: &TrialConfig) -> Result<CheckReport> {
    let dirs = cfg.directions();
    let slab = matches!(target, Target::Op(Operator::CentroidBody));
    let mut report = CheckReport::new(format!("valuation-identity/{}/n{}", target.name(), cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let p = random_polytope(cfg.n, &mut rng);
        let split = if slab { slab_split(&p, &mut rng)? } else { hyperplane_split(&p, &mut rng)? };
        let Some(s) = split else {
            return Ok(TrialOutcome::Skipped);
        };
        let bodies = [&s.k, &s.l, &s.union, &s.inter]
            .into_iter()
            .map(|b| target.apply(b))
            .collect::<Result<Vec<_>>>()?;
        for u in &dirs {
            let v: Vec<_> = bodies.iter().map(|b| b.eval(u)).collect::<Result<_>>()?;
            let lhs = &v[0].value + &v[1].value;
            let rhs = &v[2].value + &v[3].value;
            if lhs != rhs {
                return Ok(TrialOutcome::Failed(json!({
                    "trial": t,
                    "polytope": polytope_json(&p),
                    "cut": s.cut,
                    "direction": rvec_json(u),
                    "lhs": rational_json(&lhs),
                    "rhs": rational_json(&rhs),
                })));
            }
        }
        Ok(TrialOutcome::Ok)
    });
    Ok(report.with_details(json!({"directions": dirs.len(), "split": if slab { "slab" } else { "hyperplane" }})))
}

fn exponent_factor(det: &Rational, q: &Rational) -> Result<Rational> {
    pow_rational_exponent(&det.abs(), q)
        .ok_or_else(|| Error::InvalidArgument(format!("non-integral exponent {}", format_rational(q))))
}

/// Compares `h(Φ(φK), u)` with the value predicted by the exponent table.
fn compare_image(
    target: &Target,
    k: &Polytope,
    phi: &RMat,
    dirs: &[RVec],
    n: usize,
) -> Result<Option<Value>> {
    let (q, _, variance) = target.exponents(n);
    let factor = exponent_factor(phi.det(), &q)?;
    let image = target.apply(&k.apply_linear(phi)?)?;
    let base = target.apply(k)?;
    let pull = match variance {
        Variance::Equivariant => phi.transpose(),
        Variance::Contravariant => phi.inverse()?,
    };
    for u in dirs {
        let lhs = image.value(u)?;
        let rhs = &factor * base.value(&pull.mul_vec(u))?;
        if lhs != rhs {
            return Ok(Some(json!({
                "polytope": polytope_json(k),
                "matrix": phi.rows().iter().map(|r| r.iter().map(rational_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "direction": rvec_json(u),
                "lhs": rational_json(&lhs),
                "rhs": rational_json(&rhs),
            })));
        }
    }
    Ok(None)
}

/// Unimodular shears, diagonal maps of either sign and positive dilations.
pub fn check_equivariance(target: &Target, cfg: &TrialConfig) -> Result<CheckReport> {
    let dirs = cfg.directions();
    let n = cfg.n;
    let (_, r, _) = target.exponents(n);
    let diagonals = cfg.dilations / 2;
    let total = cfg.trials + cfg.dilations + diagonals;
    let mut report = CheckReport::new(format!("equivariance/{}/n{}", target.name(), n), cfg.seed);
    run_trials(&mut report, total, |t| {
        let mut rng = cfg.rng(t as u64);
        let k = random_polytope(n, &mut rng);
        let witness = if t < cfg.trials {
            compare_image(target, &k, &random_unimodular(n, &mut rng), &dirs, n)?
        } else if t < cfg.trials + cfg.dilations {
            let lambda = random_positive_rational(&mut rng, 7, 3);
            let scaled = target.apply(&k.scale(&lambda))?;
            let base = target.apply(&k)?;
            let factor = pow_rational_exponent(&lambda, &r).expect("integral degree");
            let mut w = None;
            for u in &dirs {
                let lhs = scaled.value(u)?;
                let rhs = &factor * base.value(u)?;
                if lhs != rhs {
                    w = Some(json!({
                        "polytope": polytope_json(&k),
                        "lambda": rational_json(&lambda),
                        "direction": rvec_json(u),
                        "lhs": rational_json(&lhs),
                        "rhs": rational_json(&rhs),
                    }));
                    break;
                }
            }
            w
        } else {
            compare_image(target, &k, &random_diagonal(n, &mut rng), &dirs, n)?
        };
        Ok(match witness {
            None => TrialOutcome::Ok,
            Some(w) => {
                let mut w = w;
                w["trial"] = json!(t);
                TrialOutcome::Failed(w)
            }
        })
    });
    Ok(report.with_details(json!({
        "shears": cfg.trials,
        "dilations": cfg.dilations,
        "diagonal_maps": diagonals,
        "directions": dirs.len(),
    })))
}

/// A random polytope inside a random proper linear subspace.
pub fn random_flat_polytope(n: usize, rng: &mut impl Rng) -> Polytope {
    let k = rng.gen_range(1..n);
    let basis: Vec<RVec> = (0..k).map(|_| random_direction(n, rng)).collect();
    let count = rng.gen_range(2..=8);
    let pts: Vec<RVec> = (0..count)
        .map(|_| {
            let mut p = RVec::zeros(n);
            for b in &basis {
                p = p.add_scaled(&super::config::random_rational(rng, 5, 3), b);
            }
            p
        })
        .collect();
    Polytope::hull(&pts).expect("nonempty")
}

/// Bodies in proper subspaces: degree `n+1` operators give `{0}`, degree 1
/// operators stay inside the span of the body.
pub fn check_lower_dim_collapse(target: &Target, cfg: &TrialConfig) -> Result<CheckReport> {
    let dirs = cfg.directions();
    let (_, r, _) = target.exponents(cfg.n);
    let collapses = r != int(1);
    let mut report = CheckReport::new(format!("lower-dim-collapse/{}/n{}", target.name(), cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let k = random_flat_polytope(cfg.n, &mut rng);
        let body = target.apply(&k)?;
        for u in &dirs {
            let sp = body.eval(u)?;
            let ok = if collapses {
                sp.value.is_zero() && sp.point.is_zero()
            } else {
                k.span_contains(&sp.point)?
            };
            if !ok {
                return Ok(TrialOutcome::Failed(json!({
                    "trial": t,
                    "polytope": polytope_json(&k),
                    "direction": rvec_json(u),
                    "value": rational_json(&sp.value),
                    "point": rvec_json(&sp.point),
                })));
            }
        }
        Ok(TrialOutcome::Ok)
    });
    Ok(report.with_details(json!({"expect": if collapses { "zero" } else { "inside-span" }})))
}

/// A random polytope containing the origin; every third one has it on the boundary.
pub fn random_origin_polytope(n: usize, index: usize, rng: &mut impl Rng) -> Polytope {
    let p = random_polytope(n, rng);
    let shift = if index % 3 == 2 {
        p.vertices()[rng.gen_range(0..p.vertices().len())].clone()
    } else {
        interior_point(&p, rng)
    };
    p.translate(&-&shift).expect("same dimension")
}

/// `m*(K) = 0` and `M*K = {0}` whenever `0 ∈ K`.
pub fn check_vanishing(cfg: &TrialConfig) -> Result<CheckReport> {
    let dirs = cfg.directions();
    let mut report = CheckReport::new(format!("origin-vanishing/n{}", cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let k = random_origin_polytope(cfg.n, t, &mut rng);
        if !k.contains(&RVec::zeros(cfg.n))? {
            return Ok(TrialOutcome::Failed(json!({"trial": t, "error": "origin not in body"})));
        }
        let ms = m_star(&k);
        if !ms.is_zero() {
            return Ok(TrialOutcome::Failed(json!({
                "trial": t, "polytope": polytope_json(&k), "m_star": rvec_json(&ms),
            })));
        }
        let body = Operator::MomentBodyStar.apply(&k)?;
        for u in &dirs {
            let v = body.value(u)?;
            if !v.is_zero() {
                return Ok(TrialOutcome::Failed(json!({
                    "trial": t, "polytope": polytope_json(&k), "direction": rvec_json(u), "value": rational_json(&v),
                })));
            }
        }
        Ok(TrialOutcome::Ok)
    });
    Ok(report)
}

/// `m(K_o \ K)` as a sum over cones from the origin to the facets of `K`
/// that face it; independent of the hull of `K ∪ {0}`.
pub fn m_star_by_cones(k: &Polytope) -> RVec {
    let n = k.dim();
    let zero = RVec::zeros(n);
    let mut m = RVec::zeros(n);
    if !k.is_full_dimensional() {
        return k.o_hull().moment_vector();
    }
    for b in k.boundary_cells() {
        if !k.facets()[b.facet].halfspace.offset().is_negative() {
            continue;
        }
        let mut verts: Vec<&RVec> = vec![&zero];
        verts.extend(b.vertices.iter().map(|&i| &k.vertices()[i]));
        let vol = simplex_volume(&verts);
        m.add_assign(&simplex_moment(&verts, &vol));
    }
    m
}

/// `m*(K) + m(K) = m(K_o)` with `m*` computed through facet cones.
pub fn check_mstar_consistency(cfg: &TrialConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("mstar-consistency/n{}", cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let shift = random_vector(cfg.n, &mut rng, 8, 1);
        let k = random_polytope(cfg.n, &mut rng).translate(&shift)?;
        let lhs = &m_star_by_cones(&k) + &k.moment_vector();
        let rhs = k.o_hull().moment_vector();
        if lhs != rhs || m_star(&k) != m_star_by_cones(&k) {
            return Ok(TrialOutcome::Failed(json!({
                "trial": t, "polytope": polytope_json(&k), "lhs": rvec_json(&lhs), "rhs": rvec_json(&rhs),
            })));
        }
        Ok(TrialOutcome::Ok)
    });
    Ok(report)
}

/// `Φ{x} ⊆ Φ[0, x]` for random degree-1 family members.
pub fn check_point_segment_inclusion(cfg: &TrialConfig) -> Result<CheckReport> {
    let dirs = cfg.directions();
    let mut report = CheckReport::new(format!("point-segment-inclusion/n{}", cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let spec = random_spec(Family::Degree1, &mut rng, cfg.coeff_num, cfg.coeff_den);
        let x = random_direction(cfg.n, &mut rng);
        let point = spec.apply(&Polytope::point(x.clone()))?;
        let seg = spec.apply(&Polytope::hull(&[RVec::zeros(cfg.n), x.clone()])?)?;
        let (pv, sv) = (values(&point, &dirs)?, values(&seg, &dirs)?);
        if let Some(i) = (0..dirs.len()).find(|&i| pv[i] > sv[i]) {
            return Ok(TrialOutcome::Failed(json!({
                "trial": t, "spec": spec.to_string(), "x": rvec_json(&x), "direction": rvec_json(&dirs[i]),
                "point_value": rational_json(&pv[i]), "segment_value": rational_json(&sv[i]),
            })));
        }
        Ok(TrialOutcome::Ok)
    });
    Ok(report)
}

/// `h(ΦK, u) = h(Φ(π_u K), u)` for degree-1 operators.
pub fn check_line_projection_reduction(target: &Target, cfg: &TrialConfig) -> Result<CheckReport> {
    let dirs = cfg.directions();
    let mut report = CheckReport::new(format!("line-projection/{}/n{}", target.name(), cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let k = random_polytope(cfg.n, &mut rng).translate(&random_vector(cfg.n, &mut rng, 4, 1))?;
        let body = target.apply(&k)?;
        for u in &dirs {
            let lhs = body.value(u)?;
            let rhs = target.apply(&k.project_onto_line(u)?)?.value(u)?;
            if lhs != rhs {
                return Ok(TrialOutcome::Failed(json!({
                    "trial": t, "polytope": polytope_json(&k), "direction": rvec_json(u),
                    "lhs": rational_json(&lhs), "rhs": rational_json(&rhs),
                })));
            }
        }
        Ok(TrialOutcome::Ok)
    });
    Ok(report)
}

/// `h(ΦK, g u) = h(ΦK, u)` for symmetries `g` of `K` with `det g = 1`.
pub fn check_symmetry_invariance(
    target: &Target,
    k: &Polytope,
    group: &[RMat],
    dirs: &[RVec],
    seed: u64,
) -> Result<CheckReport> {
    for g in group {
        if g.det() != &int(1) {
            return Err(Error::InvalidArgument("symmetries must have determinant 1".into()));
        }
        if &k.apply_linear(g)? != k {
            return Err(Error::NotASymmetry);
        }
    }
    let body = target.apply(k)?;
    let mut report = CheckReport::new(format!("symmetry-invariance/{}", target.name()), seed);
    let mut outcomes = Vec::with_capacity(group.len());
    for (gi, g) in group.iter().enumerate() {
        let mut outcome = TrialOutcome::Ok;
        for u in dirs {
            let gu = g.mul_vec(u);
            let (a, b) = (body.value(&gu)?, body.value(u)?);
            if a != b {
                outcome = TrialOutcome::Failed(json!({
                    "element": gi, "direction": rvec_json(u), "lhs": rational_json(&a), "rhs": rational_json(&b),
                }));
                break;
            }
        }
        outcomes.push(outcome);
    }
    report.absorb(outcomes);
    Ok(report)
}

fn permutation_matrix(perm: &[usize], signs: &[i64]) -> RMat {
    let n = perm.len();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| if perm[j] == i { int(signs[j]) } else { int(0) }).collect())
        .collect();
    RMat::from_rows(rows).expect("square")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Even coordinate permutations: the rotations fixing `conv{e_1, ..., e_n}`.
pub fn even_permutations(n: usize) -> Vec<RMat> {
    permutations(n)
        .into_iter()
        .map(|p| permutation_matrix(&p, &vec![1; n]))
        .filter(|m| m.det() == &int(1))
        .collect()
}

/// Signed permutation matrices of determinant 1: the rotations of the cube.
pub fn cube_rotations(n: usize) -> Vec<RMat> {
    let mut out = Vec::new();
    for p in permutations(n) {
        for mask in 0u32..(1 << n) {
            let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let m = permutation_matrix(&p, &signs);
            if m.det() == &int(1) {
                out.push(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::Verdict;
    use crate::rational::frac;

    fn small(n: usize, trials: usize) -> TrialConfig {
        let mut cfg = TrialConfig::new(n, trials, 11);
        cfg.random_directions = 4;
        cfg.dilations = 2;
        cfg
    }

    #[test]
    fn valuation_identity_smoke() {
        for op in [Operator::Id, Operator::MomentBody, Operator::MomentVecStar] {
            let r = check_valuation_identity(&op.into(), &small(3, 3)).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_json());
        }
        let r = check_valuation_identity(&Operator::CentroidBody.into(), &small(3, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn equivariance_smoke() {
        for op in [Operator::OHull, Operator::MomentBodyStar, Operator::ProjBody] {
            let r = check_equivariance(&op.into(), &small(3, 2)).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_json());
        }
    }

    #[test]
    fn symmetry_groups() {
        assert_eq!(even_permutations(3).len(), 3);
        assert_eq!(even_permutations(4).len(), 12);
        assert_eq!(cube_rotations(3).len(), 24);
        let s = Polytope::hull(&[RVec::unit(3, 0), RVec::unit(3, 1), RVec::unit(3, 2)]).unwrap();
        let dirs = TrialConfig::new(3, 1, 1).directions();
        let r = check_symmetry_invariance(&Operator::MomentBodyStar.into(), &s, &even_permutations(3), &dirs, 1)
            .unwrap();
        assert!(r.passed());
        let shear = RMat::shear(3, 0, 1, frac(1, 2));
        assert_eq!(
            check_symmetry_invariance(&Operator::Id.into(), &s, &[shear], &dirs, 1).unwrap_err(),
            Error::NotASymmetry
        );
    }

    #[test]
    fn cone_decomposition_matches_o_hull() {
        let s = Polytope::hull(&[RVec::unit(3, 0), RVec::unit(3, 1), RVec::unit(3, 2)]).unwrap();
        assert_eq!(m_star_by_cones(&s), RVec::new(vec![frac(1, 24); 3]));
        let r = check_mstar_consistency(&small(3, 5)).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }
}
