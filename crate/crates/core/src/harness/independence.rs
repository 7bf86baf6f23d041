//! Exact linear-algebra demonstrations that the starred operators are new.
//!
//! With columns `m, m_o, M, M_o` (where `X_o(K) = X(K_o)`), the support
//! function of `M*` is matched row by row over a set of bodies and directions.
//! The only unconstrained fit is `M_o - M`, which has a negative coefficient;
//! with `a_3, a_4 >= 0` there is no fit at all.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::config::TrialConfig;
use super::report::CheckReport;
use super::simplex::{corner_simplex, standard_simplex};
use crate::error::Result;
use crate::geometry::linalg::{solve, Solution};
use crate::geometry::{Polytope, RVec};
use crate::io::{polytope_json, rvec_json};
use crate::rational::{int, Rational};
use crate::valuation::{m_star, SupportBody};

/// A named column operator.
pub struct Column {
    pub name: &'static str,
    pub apply: fn(&Polytope) -> SupportBody,
}

fn col_m(k: &Polytope) -> SupportBody {
    SupportBody::point(k.moment_vector())
}
fn col_m_o(k: &Polytope) -> SupportBody {
    SupportBody::point(k.o_hull().moment_vector())
}
fn col_m_star(k: &Polytope) -> SupportBody {
    SupportBody::point(m_star(k))
}
fn col_big_m(k: &Polytope) -> SupportBody {
    SupportBody::moment_body(k)
}
fn col_big_m_o(k: &Polytope) -> SupportBody {
    SupportBody::moment_body(&k.o_hull())
}
fn col_big_m_star(k: &Polytope) -> SupportBody {
    SupportBody::moment_body_star(k)
}

pub const M: Column = Column { name: "m", apply: col_m };
pub const M_O: Column = Column { name: "m_o", apply: col_m_o };
pub const M_STAR: Column = Column { name: "m*", apply: col_m_star };
pub const BIG_M: Column = Column { name: "M", apply: col_big_m };
pub const BIG_M_O: Column = Column { name: "M_o", apply: col_big_m_o };
pub const BIG_M_STAR: Column = Column { name: "M*", apply: col_big_m_star };

/// Linear system `Σ a_k h(col_k(B), u) = h(target(B), u)` over bodies and directions.
pub struct System {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    /// Index of the body each row came from.
    pub body_of_row: Vec<usize>,
}

pub fn build_system(columns: &[&Column], target: &Column, bodies: &[Polytope], dirs: &[RVec]) -> Result<System> {
    let mut sys = System { rows: Vec::new(), rhs: Vec::new(), body_of_row: Vec::new() };
    for (bi, b) in bodies.iter().enumerate() {
        let cols: Vec<SupportBody> = columns.iter().map(|c| (c.apply)(b)).collect();
        let tgt = (target.apply)(b);
        for u in dirs {
            sys.rows.push(cols.iter().map(|c| c.value(u)).collect::<Result<_>>()?);
            sys.rhs.push(tgt.value(u)?);
            sys.body_of_row.push(bi);
        }
    }
    Ok(sys)
}

fn solution_json(s: &Solution) -> Value {
    match s {
        Solution::Unique(x) => json!({"kind": "unique", "solution": rvec_json(x)}),
        Solution::Family { particular, kernel } => json!({
            "kind": "family",
            "particular": rvec_json(particular),
            "kernel": kernel.iter().map(rvec_json).collect::<Vec<_>>(),
        }),
        Solution::Inconsistent { certificate } => json!({"kind": "inconsistent", "certificate": rvec_json(certificate)}),
    }
}

/// Verifies `y^T A = 0` and `y^T b != 0` independently of the solver.
pub fn certificate_holds(rows: &[Vec<Rational>], rhs: &[Rational], y: &RVec) -> bool {
    let k = rows.first().map(Vec::len).unwrap_or(0);
    let annihilates = (0..k).all(|c| {
        rows.iter().zip(y.coords()).map(|(r, yi)| &r[c] * yi).sum::<Rational>().is_zero()
    });
    let separates = !rhs.iter().zip(y.coords()).map(|(b, yi)| b * yi).sum::<Rational>().is_zero();
    annihilates && separates
}

/// `conv{±e_i}`.
pub fn cross_polytope(n: usize) -> Polytope {
    let pts: Vec<RVec> = (0..n).flat_map(|i| [RVec::unit(n, i), -&RVec::unit(n, i)]).collect();
    Polytope::hull(&pts).expect("nonempty")
}

/// The test bodies: the cross-polytope, and `S`, `T` shifted by `(1, ..., 1)`.
pub fn independence_bodies(n: usize) -> Vec<Polytope> {
    let ones = RVec::new(vec![int(1); n]);
    vec![
        cross_polytope(n),
        standard_simplex(n).translate(&ones).expect("dim"),
        corner_simplex(n).translate(&ones).expect("dim"),
    ]
}

fn expect_unique(sys: &System, k: usize, expected: &[i64]) -> (bool, Value) {
    let sol = solve(&sys.rows, &sys.rhs, k);
    let ok = matches!(&sol, Solution::Unique(x) if x == &RVec::from_ints(expected));
    (ok, solution_json(&sol))
}

/// Exact demonstration that `M*` is not a non-negative combination of
/// `m, m_o, M, M_o`, with controls that fit `M` and `M*` in their own spans.
pub fn check_independence(cfg: &TrialConfig) -> Result<CheckReport> {
    let n = cfg.n;
    cfg.require_n_at_least(3)?;
    let dirs = cfg.directions();
    let bodies = independence_bodies(n);
    let columns = [&M, &M_O, &BIG_M, &BIG_M_O];
    let sys = build_system(&columns, &BIG_M_STAR, &bodies, &dirs)?;
    let mut report = CheckReport::new(format!("independence/n{n}"), cfg.seed);

    // Without sign constraints the fit is unique and has a_3 < 0.
    let free = solve(&sys.rows, &sys.rhs, 4);
    let free_ok = matches!(&free, Solution::Unique(x) if x[2].is_negative() || x[3].is_negative());

    // Rows from the cross-polytope read (a_3 + a_4) h(MC, u) = 0.
    let c_rows: Vec<usize> = (0..sys.rows.len()).filter(|&r| sys.body_of_row[r] == 0).collect();
    let stage1 = c_rows.iter().all(|&r| {
        let row = &sys.rows[r];
        row[0].is_zero() && row[1].is_zero() && row[2] == row[3] && sys.rhs[r].is_zero()
    }) && c_rows.iter().any(|&r| sys.rows[r][2].is_positive());

    // With a_3 = a_4 = 0 the remaining rows cannot be met.
    let rest: Vec<usize> = (0..sys.rows.len()).filter(|&r| sys.body_of_row[r] != 0).collect();
    let reduced: Vec<Vec<Rational>> = rest.iter().map(|&r| sys.rows[r][..2].to_vec()).collect();
    let reduced_rhs: Vec<Rational> = rest.iter().map(|&r| sys.rhs[r].clone()).collect();
    let stage2 = solve(&reduced, &reduced_rhs, 2);
    let stage2_ok = matches!(&stage2, Solution::Inconsistent { certificate } if certificate_holds(&reduced, &reduced_rhs, certificate));

    let control_m = build_system(&columns, &BIG_M, &bodies, &dirs)?;
    let (control_m_ok, control_m_sol) = expect_unique(&control_m, 4, &[0, 0, 1, 0]);
    let star_columns = [&M, &M_STAR, &BIG_M, &BIG_M_STAR];
    let control_star = build_system(&star_columns, &BIG_M_STAR, &bodies, &dirs)?;
    let (control_star_ok, control_star_sol) = expect_unique(&control_star, 4, &[0, 0, 0, 1]);

    let details = json!({
        "bodies": bodies.iter().map(polytope_json).collect::<Vec<_>>(),
        "directions": dirs.len(),
        "rows": sys.rows.len(),
        "columns": columns.iter().map(|c| c.name).collect::<Vec<_>>(),
        "unconstrained": solution_json(&free),
        "cross_polytope_forces_a3_plus_a4_zero": stage1,
        "reduced_system": solution_json(&stage2),
        "control_M": control_m_sol,
        "control_Mstar": control_star_sol,
    });
    report.trials = 1;
    if !(free_ok && stage1 && stage2_ok && control_m_ok && control_star_ok) {
        report.fail(json!({
            "unconstrained": free_ok,
            "stage1": stage1,
            "stage2": stage2_ok,
            "control_M": control_m_ok,
            "control_Mstar": control_star_ok,
        }));
    }
    Ok(report.with_details(details))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demonstration_passes() {
        for n in [3, 4] {
            let mut cfg = TrialConfig::new(n, 1, 1);
            cfg.random_directions = 0;
            let r = check_independence(&cfg).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn certificate_check_rejects_bad_vectors() {
        let rows = vec![vec![int(1)], vec![int(1)]];
        let rhs = vec![int(0), int(1)];
        assert!(certificate_holds(&rows, &rhs, &RVec::from_ints(&[1, -1])));
        assert!(!certificate_holds(&rows, &rhs, &RVec::from_ints(&[1, 1])));
    }
}
