//! Exact identities on the standard simplex `S = conv{e_1, ..., e_n}`.
//!
//! For `i != j` and `0 < λ < 1`, `φ` sends `e_i` to `λe_i + (1-λ)e_j` and `ψ`
//! sends `e_j` to the same point; both fix every other basis vector. The
//! hyperplane through `λe_i + (1-λ)e_j` and the remaining `e_k` has normal
//! `(1-λ)e_i - λe_j`, and cuts `S` into `φS` and `ψS`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{random_spec, TrialConfig};
use super::report::{CheckReport, TrialOutcome};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polytope, RMat, RVec};
use crate::io::{rational_json, rvec_json};
use crate::rational::{frac, int, Rational};
use crate::valuation::{Family, Operator, SupportBody, ValuationSpec};

/// `conv{e_1, ..., e_n}`.
pub fn standard_simplex(n: usize) -> Polytope {
    Polytope::hull(&(0..n).map(|i| RVec::unit(n, i)).collect::<Vec<_>>()).expect("nonempty")
}

/// `conv{0, e_1, ..., e_n}`.
pub fn corner_simplex(n: usize) -> Polytope {
    let mut pts: Vec<RVec> = (0..n).map(|i| RVec::unit(n, i)).collect();
    pts.push(RVec::zeros(n));
    Polytope::hull(&pts).expect("nonempty")
}

fn validate(n: usize, lambda: &Rational, i: usize, j: usize) -> Result<()> {
    if lambda <= &Rational::zero() || lambda >= &Rational::one() {
        return Err(Error::InvalidLambda(crate::rational::format_rational(lambda)));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("simplex identities need n >= 3, got {n}")));
    }
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidArgument(format!("invalid index pair ({i}, {j}) for n = {n}")));
    }
    Ok(())
}

fn basis_map(n: usize, lambda: &Rational, moved: usize, i: usize, j: usize) -> RMat {
    let mut rows = RMat::identity(n).rows().to_vec();
    for r in rows.iter_mut() {
        r[moved] = Rational::zero();
    }
    rows[i][moved] = lambda.clone();
    rows[j][moved] = Rational::one() - lambda;
    RMat::from_rows(rows).expect("square")
}

/// `φ_λ`: `e_i ↦ λe_i + (1-λ)e_j`.
pub fn phi_map(n: usize, lambda: &Rational, i: usize, j: usize) -> Result<RMat> {
    validate(n, lambda, i, j)?;
    Ok(basis_map(n, lambda, i, i, j))
}

/// `ψ_λ`: `e_j ↦ λe_i + (1-λ)e_j`.
pub fn psi_map(n: usize, lambda: &Rational, i: usize, j: usize) -> Result<RMat> {
    validate(n, lambda, i, j)?;
    Ok(basis_map(n, lambda, j, i, j))
}

/// `{<(1-λ)e_i - λe_j, x> <= 0}`, which contains `φS`.
pub fn split_halfspace(n: usize, lambda: &Rational, i: usize, j: usize) -> Result<Halfspace> {
    validate(n, lambda, i, j)?;
    let mut a = vec![Rational::zero(); n];
    a[i] = Rational::one() - lambda;
    a[j] = -lambda.clone();
    Halfspace::new(RVec::new(a), Rational::zero())
}

fn plane_point(n: usize, i: usize, j: usize, x1: &Rational, x2: &Rational) -> RVec {
    let mut v = vec![Rational::zero(); n];
    v[i] = x1.clone();
    v[j] = x2.clone();
    RVec::new(v)
}

fn mismatch(name: &str, at: Value, lhs: &Rational, rhs: &Rational) -> Value {
    json!({"identity": name, "at": at, "lhs": rational_json(lhs), "rhs": rational_json(rhs)})
}

/// Runs every simplex identity for one `(Ψ, λ, i, j)`; returns the first
/// violated one as a witness.
pub fn simplex_identities(
    spec: &ValuationSpec,
    n: usize,
    lambda: &Rational,
    i: usize,
    j: usize,
    dirs: &[RVec],
) -> Result<Option<Value>> {
    let phi = phi_map(n, lambda, i, j)?;
    let psi = psi_map(n, lambda, i, j)?;
    let s = standard_simplex(n);
    let body = spec.apply(&s)?;
    let h = |u: &RVec| body.value(u);

    // Pull-back identity with exponent q = 1.
    let weight = match spec.family() {
        Family::Degree1 => None,
        Family::DegreeNPlus1 => Some((lambda.clone(), Rational::one() - lambda)),
    };
    if let Some((wl, wr)) = &weight {
        for u in dirs {
            let lhs = h(u)?;
            let rhs = wl * h(&phi.transpose().mul_vec(u))? + wr * h(&psi.transpose().mul_vec(u))?;
            if lhs != rhs {
                return Ok(Some(mismatch("pullback", rvec_json(u), &lhs, &rhs)));
            }
        }
    }

    // The cut really produces φS and ψS, and Ψ is additive over it.
    let cut = split_halfspace(n, lambda, i, j)?;
    let lower = s.clip(&cut)?.ok_or(Error::EmptyInput)?;
    let upper = s.clip(&cut.complement())?.ok_or(Error::EmptyInput)?;
    let slice = s.slice(&cut)?.ok_or(Error::EmptyInput)?;
    if lower != s.apply_linear(&phi)? || upper != s.apply_linear(&psi)? {
        return Ok(Some(json!({"identity": "cut", "lambda": rational_json(lambda), "pair": [i, j]})));
    }
    let parts = [&lower, &upper, &slice].map(|p| spec.apply(p));
    let [pl, pu, ps] = parts;
    let (pl, pu, ps) = (pl?, pu?, ps?);
    for u in dirs {
        let lhs = pl.value(u)? + pu.value(u)?;
        let rhs = h(u)? + ps.value(u)?;
        if lhs != rhs {
            return Ok(Some(mismatch("split", rvec_json(u), &lhs, &rhs)));
        }
    }

    // Restriction to span{e_i, e_j}.
    if weight.is_some() {
        let f = |x1: &Rational, x2: &Rational| h(&plane_point(n, i, j, x1, x2));
        let f10 = f(&int(1), &int(0))?;
        let fm10 = f(&int(-1), &int(0))?;
        let grid = [int(0), frac(1, 3), frac(1, 2), int(1), int(2), frac(5, 2)];
        for x1 in &grid {
            for x2 in &grid {
                if x1.is_zero() && x2.is_zero() {
                    continue;
                }
                let at = json!([rational_json(x1), rational_json(x2)]);
                let sum = x1 + x2;
                let checks = [
                    ("positive-quadrant", f(x1, x2)?, &sum * &f10),
                    ("negative-quadrant", f(&-x1, &-x2)?, &sum * &fm10),
                    ("mixed-quadrant", &sum * f(&-x1, x2)?, x2 * x2 * &f10 + x1 * x1 * &fm10),
                ];
                for (name, lhs, rhs) in checks {
                    if lhs != rhs {
                        return Ok(Some(mismatch(name, at, &lhs, &rhs)));
                    }
                }
            }
        }
        for x1 in &grid {
            for x2 in grid.iter().filter(|x2| !(x1.is_zero() && x2.is_zero())) {
                for (a, b) in [(x1.clone(), x2.clone()), (-x1, x2.clone()), (x1.clone(), -x2), (-x1, -x2)] {
                    let (lhs, rhs) = (f(&a, &b)?, f(&b, &a)?);
                    if lhs != rhs {
                        return Ok(Some(mismatch("swap", json!([rational_json(&a), rational_json(&b)]), &lhs, &rhs)));
                    }
                }
            }
        }

        // On S only the starred terms survive.
        let t = corner_simplex(n);
        let [_, a2, _, a4] = spec.coefficients().clone();
        let expected = SupportBody::combination(vec![
            (a2, SupportBody::point(t.moment_vector())),
            (a4, Operator::MomentBody.apply(&t)?),
        ])?;
        for u in dirs {
            let (lhs, rhs) = (h(u)?, expected.value(u)?);
            if lhs != rhs {
                return Ok(Some(mismatch("starred-terms", rvec_json(u), &lhs, &rhs)));
            }
        }
    }
    Ok(None)
}

pub const LAMBDAS: [(i64, i64); 4] = [(1, 4), (1, 3), (1, 2), (2, 3)];

/// Every simplex identity for `cfg.trials` random members of `family`, all
/// index pairs `i < j` and a fixed set of `λ`.
pub fn check_simplex_identities(family: Family, cfg: &TrialConfig) -> Result<CheckReport> {
    cfg.require_n_at_least(3)?;
    let n = cfg.n;
    let dirs = cfg.directions();
    let mut jobs = Vec::new();
    for t in 0..cfg.trials {
        for &(p, q) in &LAMBDAS {
            for i in 0..n {
                for j in i + 1..n {
                    jobs.push((t, frac(p, q), i, j));
                }
            }
        }
    }
    let outcomes: Vec<TrialOutcome> = jobs
        .par_iter()
        .map(|(t, lambda, i, j)| {
            let mut rng = cfg.rng(*t as u64);
            let spec = random_spec(family, &mut rng, cfg.coeff_num, cfg.coeff_den);
            match simplex_identities(&spec, n, lambda, *i, *j, &dirs) {
                Ok(None) => TrialOutcome::Ok,
                Ok(Some(mut w)) => {
                    w["spec"] = json!(spec.to_string());
                    w["lambda"] = rational_json(lambda);
                    w["pair"] = json!([i, j]);
                    TrialOutcome::Failed(w)
                }
                Err(e) => TrialOutcome::Failed(json!({"trial": t, "error": e.to_string()})),
            }
        })
        .collect();
    let mut report = CheckReport::new(format!("simplex-identities/{}/n{n}", family.tag()), cfg.seed);
    report.absorb(outcomes);
    Ok(report.with_details(json!({"specs": cfg.trials, "lambdas": LAMBDAS.len(), "directions": dirs.len()})))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_and_cut() {
        let lam = frac(1, 3);
        let phi = phi_map(3, &lam, 0, 1).unwrap();
        assert_eq!(phi.mul_vec(&RVec::unit(3, 0)), RVec::new(vec![frac(1, 3), frac(2, 3), int(0)]));
        assert_eq!(phi.mul_vec(&RVec::unit(3, 1)), RVec::unit(3, 1));
        let psi = psi_map(3, &lam, 0, 1).unwrap();
        assert_eq!(psi.mul_vec(&RVec::unit(3, 1)), RVec::new(vec![frac(1, 3), frac(2, 3), int(0)]));
        let s = standard_simplex(3);
        let h = split_halfspace(3, &lam, 0, 1).unwrap();
        assert_eq!(s.clip(&h).unwrap().unwrap(), s.apply_linear(&phi).unwrap());
        assert_eq!(s.clip(&h.complement()).unwrap().unwrap(), s.apply_linear(&psi).unwrap());
    }

    #[test]
    fn half_split_is_phi() {
        let s = standard_simplex(3);
        let h = Halfspace::new(RVec::new(vec![frac(1, 2), frac(-1, 2), int(0)]), int(0)).unwrap();
        let phi = phi_map(3, &frac(1, 2), 0, 1).unwrap();
        assert_eq!(s.clip(&h).unwrap().unwrap(), s.apply_linear(&phi).unwrap());
    }

    #[test]
    fn lambda_is_validated() {
        assert!(matches!(phi_map(3, &int(0), 0, 1), Err(Error::InvalidLambda(_))));
        assert!(matches!(psi_map(3, &int(1), 0, 1), Err(Error::InvalidLambda(_))));
        assert!(matches!(split_halfspace(3, &frac(3, 2), 0, 1), Err(Error::InvalidLambda(_))));
        assert!(phi_map(2, &frac(1, 2), 0, 1).is_err());
    }

    #[test]
    fn identities_hold_for_a_fixed_spec() {
        let dirs = TrialConfig::new(3, 1, 2).directions();
        let spec: ValuationSpec = "np1:1,-2,3,1/2".parse().unwrap();
        assert_eq!(simplex_identities(&spec, 3, &frac(2, 5), 0, 2, &dirs).unwrap(), None);
        let spec: ValuationSpec = "d1:1,0,2,1".parse().unwrap();
        assert_eq!(simplex_identities(&spec, 3, &frac(1, 2), 1, 2, &dirs).unwrap(), None);
    }
}
