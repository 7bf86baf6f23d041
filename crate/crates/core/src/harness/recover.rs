//! Recovering family coefficients from a black-box operator.

use serde::Serialize;
use serde_json::json;

use super::config::{random_polytope, random_spec, TrialConfig};
use super::checks::run_trials;
use super::report::{CheckReport, TrialOutcome};
use super::simplex::{corner_simplex, standard_simplex};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, RVec};
use crate::io::{polytope_json, rational_json, rvec_json};
use crate::rational::{format_rational, int, Rational};
use crate::valuation::{Family, SupportBody, ValuationSpec};

/// A black-box operator on polytopes.
pub type OperatorFn<'a> = dyn Fn(&Polytope) -> Result<SupportBody> + Sync + 'a;

#[derive(Clone, Debug, Serialize)]
pub struct SideCondition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Degree1Recovery {
    /// `h(Φ[0,e_1], -e_1)`, `h(Φ[0,e_1], e_1)`, `h(Φ{e_1}, -e_1)`, `h(Φ{e_1}, e_1)`.
    #[serde(serialize_with = "ser_z")]
    pub z: [Rational; 4],
    pub spec: ValuationSpec,
    pub side_conditions: Vec<SideCondition>,
}

fn ser_z<S: serde::Serializer>(z: &[Rational; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(z.iter().map(format_rational))
}

fn segment(n: usize) -> Polytope {
    Polytope::hull(&[RVec::zeros(n), RVec::unit(n, 0)]).expect("nonempty")
}

/// The four probe values from a segment and a point on the first axis.
pub fn degree1_probes(phi: &OperatorFn, n: usize) -> Result<[Rational; 4]> {
    let e1 = RVec::unit(n, 0);
    let seg = phi(&segment(n))?;
    let pt = phi(&Polytope::point(e1.clone()))?;
    Ok([seg.value(&-&e1)?, seg.value(&e1)?, pt.value(&-&e1)?, pt.value(&e1)?])
}

/// `(a_1, ..., a_4)` from the probe values.
pub fn degree1_coefficients(z: &[Rational; 4]) -> [Rational; 4] {
    let [z1, z2, z3, z4] = z;
    [z1 - z3, z2 - z4, z2 + z3 - z1, z1 + z4 - z2]
}

fn degree1_side_conditions(phi: &OperatorFn, n: usize, z: &[Rational; 4]) -> Result<Vec<SideCondition>> {
    let [z1, z2, z3, z4] = z;
    let mut out = vec![
        SideCondition { name: "segment-upper", holds: int(2) * z2 <= z4 + z1 + z2 },
        SideCondition { name: "segment-lower", holds: int(2) * z1 <= z3 + z1 + z2 },
        SideCondition { name: "point-upper", holds: z4 <= z2 },
        SideCondition { name: "point-lower", holds: z3 <= z1 },
    ];
    if n >= 2 {
        let (e1, e2) = (RVec::unit(n, 0), RVec::unit(n, 1));
        let s = phi(&Polytope::hull(&[e1.clone(), e2.clone()])?)?;
        let t = phi(&Polytope::hull(&[e1.clone(), e2.clone(), &e1 + &e2])?)?;
        out.push(SideCondition { name: "edge-diagonal", holds: &s.value(&(&e1 + &e2))? == z4 });
        out.push(SideCondition { name: "edge-antidiagonal", holds: s.value(&(&e2 - &e1))? == z1 + z2 });
        out.push(SideCondition { name: "triangle-diagonal", holds: t.value(&(&e1 + &e2))? == z2 + z4 });
    }
    Ok(out)
}

/// Compares `phi` with `spec` on a few random polytopes and the configured directions.
pub fn validate_against(phi: &OperatorFn, spec: &ValuationSpec, cfg: &TrialConfig) -> Result<()> {
    let dirs = cfg.directions();
    for t in 0..cfg.trials {
        let mut rng = cfg.rng(t as u64);
        let k = random_polytope(cfg.n, &mut rng);
        let (a, b) = (phi(&k)?, spec.apply(&k)?);
        for u in &dirs {
            let (x, y) = (a.value(u)?, b.value(u)?);
            if x != y {
                return Err(Error::NotAValuationWitness(
                    json!({
                        "recovered": spec.to_string(),
                        "polytope": polytope_json(&k),
                        "direction": rvec_json(u),
                        "operator": rational_json(&x),
                        "recovered_value": rational_json(&y),
                    })
                    .to_string(),
                ));
            }
        }
    }
    Ok(())
}

/// Recovers a degree-1 family member from four probe values, checks the side
/// conditions every member satisfies, then validates on random polytopes.
pub fn recover_degree1(phi: &OperatorFn, validation: &TrialConfig) -> Result<Degree1Recovery> {
    let n = validation.n;
    let z = degree1_probes(phi, n)?;
    let side_conditions = degree1_side_conditions(phi, n, &z)?;
    let witness = |msg: String| {
        Error::NotAValuationWitness(
            json!({"z": z.iter().map(rational_json).collect::<Vec<_>>(), "reason": msg}).to_string(),
        )
    };
    if let Some(c) = side_conditions.iter().find(|c| !c.holds) {
        return Err(witness(format!("side condition {} fails", c.name)));
    }
    let spec = ValuationSpec::new(Family::Degree1, degree1_coefficients(&z)).map_err(|e| witness(e.to_string()))?;
    validate_against(phi, &spec, validation)?;
    Ok(Degree1Recovery { z, spec, side_conditions })
}

/// Recovers a degree `n+1` family member from `ΦT` and `ΦS` on `±e_1`, where
/// `T = conv{0, e_1, ..., e_n}` and `S = conv{e_1, ..., e_n}`.
pub fn recover_np1(phi: &OperatorFn, validation: &TrialConfig) -> Result<ValuationSpec> {
    let n = validation.n;
    let e1 = RVec::unit(n, 0);
    let t = corner_simplex(n);
    let c = t.moment_vector().dot(&e1);
    let pair = |body: &Polytope| -> Result<(Rational, Rational)> {
        let b = phi(body)?;
        let (hp, hm) = (b.value(&e1)?, b.value(&-&e1)?);
        let two_c = int(2) * &c;
        Ok(((&hp - &hm) / &two_c, (hp + hm) / two_c))
    };
    let (a1, a3) = pair(&t)?;
    let (a2, a4) = pair(&standard_simplex(n))?;
    let cs = [a1, a2, a3, a4];
    let spec = ValuationSpec::new(Family::DegreeNPlus1, cs.clone()).map_err(|e| {
        Error::NotAValuationWitness(
            json!({"coefficients": cs.iter().map(rational_json).collect::<Vec<_>>(), "reason": e.to_string()})
                .to_string(),
        )
    })?;
    validate_against(phi, &spec, validation)?;
    Ok(spec)
}

/// Recovers random family members through the black-box interface and
/// compares with the generating coefficients.
pub fn check_recovery_round_trip(family: Family, cfg: &TrialConfig) -> Result<CheckReport> {
    let mut validation = cfg.clone();
    validation.trials = 2;
    let mut report = CheckReport::new(format!("recovery/{}/n{}", family.tag(), cfg.n), cfg.seed);
    run_trials(&mut report, cfg.trials, |t| {
        let mut rng = cfg.rng(t as u64);
        let spec = random_spec(family, &mut rng, cfg.coeff_num, cfg.coeff_den);
        let phi = |k: &Polytope| spec.apply(k);
        let got = match family {
            Family::Degree1 => recover_degree1(&phi, &validation)?.spec,
            Family::DegreeNPlus1 => recover_np1(&phi, &validation)?,
        };
        Ok(if got == spec {
            TrialOutcome::Ok
        } else {
            TrialOutcome::Failed(json!({"trial": t, "spec": spec.to_string(), "recovered": got.to_string()}))
        })
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::Operator;

    fn small(n: usize) -> TrialConfig {
        let mut cfg = TrialConfig::new(n, 2, 4);
        cfg.random_directions = 4;
        cfg
    }

    fn zs(op: Operator) -> [Rational; 4] {
        degree1_probes(&|k: &Polytope| op.apply(k), 3).unwrap()
    }

    #[test]
    fn probe_tables() {
        let ints = |v: [i64; 4]| v.map(int);
        assert_eq!(zs(Operator::Id), ints([0, 1, -1, 1]));
        assert_eq!(zs(Operator::OHull), ints([0, 1, 0, 1]));
        assert_eq!(zs(Operator::Neg), ints([1, 0, 1, -1]));
        assert_eq!(degree1_coefficients(&ints([0, 1, -1, 1])), ints([1, 0, 0, 0]));
        assert_eq!(degree1_coefficients(&ints([0, 1, 0, 1])), ints([0, 0, 1, 0]));
        assert_eq!(degree1_coefficients(&ints([1, 0, 1, -1])), ints([0, 1, 0, 0]));
    }

    #[test]
    fn recovers_basis_operators() {
        let r = recover_degree1(&|k: &Polytope| Operator::DiffBody.apply(k), &small(3)).unwrap();
        assert_eq!(r.spec.to_string(), "d1:1,1,0,0");
        let s = recover_np1(&|k: &Polytope| Operator::MomentBodyStar.apply(k), &small(3)).unwrap();
        assert_eq!(s.to_string(), "np1:0,0,0,1");
        let s = recover_np1(&|k: &Polytope| Operator::MomentVec.apply(k), &small(4)).unwrap();
        assert_eq!(s.to_string(), "np1:1,0,0,0");
    }

    #[test]
    fn rejects_non_members() {
        let err = recover_np1(&|k: &Polytope| Operator::ProjBody.apply(k), &small(3)).unwrap_err();
        assert!(matches!(err, Error::NotAValuationWitness(_)));
        let err = recover_degree1(&|k: &Polytope| Operator::MomentBody.apply(k), &small(3)).unwrap_err();
        assert!(matches!(err, Error::NotAValuationWitness(_)));
    }
}
