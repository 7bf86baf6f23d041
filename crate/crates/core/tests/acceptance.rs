//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use minkval_core::harness::bp::{bp_bodies, near_ball, BallReference, BpConfig};
use minkval_core::harness::checks::{
    check_equivariance, check_lower_dim_collapse, check_mstar_consistency, check_valuation_identity, check_vanishing,
};
use minkval_core::harness::independence::check_independence;
use minkval_core::harness::montecarlo::{check_monte_carlo, mc_bodies, DEFAULT_SAMPLES, DEFAULT_SEED};
use minkval_core::harness::recover::{
    check_recovery_round_trip, degree1_coefficients, degree1_probes, recover_np1,
};
use minkval_core::harness::simplex::check_simplex_identities;
use minkval_core::harness::{CheckReport, Target, TrialConfig, Verdict};
use minkval_core::valuation::{Family, Operator, ValuationSpec};
use minkval_core::{int, Polytope, Result};

const SEED: u64 = 7;

struct Outcome {
    ok: bool,
    summary: String,
}

fn all_pass(reports: &[CheckReport]) -> Outcome {
    let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    if failed.is_empty() {
        Outcome { ok: true, summary: format!("{} checks, {trials} trials", reports.len()) }
    } else {
        Outcome { ok: false, summary: format!("failed: {}", failed.iter().map(|r| r.to_json()).collect::<Vec<_>>().join("; ")) }
    }
}

fn cfg(n: usize, trials: usize) -> TrialConfig {
    TrialConfig::new(n, trials, SEED)
}

fn valuation_identity() -> Result<Outcome> {
    let mut reports = Vec::new();
    for (n, trials) in [(3, 100), (4, 25)] {
        for op in Operator::VALUATIONS {
            reports.push(check_valuation_identity(&Target::from(op), &cfg(n, trials))?);
        }
    }
    let mut out = all_pass(&reports);
    let gamma = check_valuation_identity(&Target::from(Operator::CentroidBody), &cfg(3, 20))?;
    let witnessed = gamma.verdict == Verdict::Fail && gamma.witness.is_some();
    out.ok &= witnessed;
    out.summary.push_str(if witnessed { ", Gamma fails with witness" } else { ", Gamma did not fail" });
    Ok(out)
}

fn equivariance() -> Result<Outcome> {
    let mut c = cfg(3, 50);
    c.dilations = 20;
    let ops = Operator::VALUATIONS.into_iter().chain([Operator::ProjBody]);
    let reports = ops.map(|op| check_equivariance(&Target::from(op), &c)).collect::<Result<Vec<_>>>()?;
    Ok(all_pass(&reports))
}

fn collapse() -> Result<Outcome> {
    let ops = Operator::DEGREE_NP1.into_iter().chain(Operator::DEGREE_ONE);
    let reports = ops.map(|op| check_lower_dim_collapse(&Target::from(op), &cfg(3, 50))).collect::<Result<Vec<_>>>()?;
    Ok(all_pass(&reports))
}

fn simplex() -> Result<Outcome> {
    let reports = [3, 4]
        .into_iter()
        .map(|n| check_simplex_identities(Family::DegreeNPlus1, &cfg(n, 20)))
        .collect::<Result<Vec<_>>>()?;
    Ok(all_pass(&reports))
}

fn recovery() -> Result<Outcome> {
    let mut reports = Vec::new();
    for family in [Family::Degree1, Family::DegreeNPlus1] {
        reports.push(check_recovery_round_trip(family, &cfg(3, 100))?);
    }
    let mut out = all_pass(&reports);
    let ints = |v: [i64; 4]| v.map(int);
    let tables = [
        (Operator::Id, [0, 1, -1, 1], [1, 0, 0, 0]),
        (Operator::OHull, [0, 1, 0, 1], [0, 0, 1, 0]),
        (Operator::Neg, [1, 0, 1, -1], [0, 1, 0, 0]),
    ];
    for (op, z, a) in tables {
        let got = degree1_probes(&|k: &Polytope| op.apply(k), 3)?;
        if got != ints(z) || degree1_coefficients(&got) != ints(a) {
            out.ok = false;
            out.summary.push_str(&format!(", table mismatch for {}", op.name()));
        }
    }
    let spec = ValuationSpec::new(Family::DegreeNPlus1, ints([2, -1, 3, 1]))?;
    let got = recover_np1(&|k: &Polytope| spec.apply(k), &cfg(3, 3))?;
    if got != spec {
        out.ok = false;
        out.summary.push_str(&format!(", recovered {got} instead of {spec}"));
    }
    out.summary.push_str(", probe tables match");
    Ok(out)
}

fn independence() -> Result<Outcome> {
    let report = check_independence(&cfg(3, 1))?;
    let mut out = all_pass(&[report]);
    out.summary = format!("M* outside span{{m, m_o, M, M_o}}; controls solve: {}", out.summary);
    Ok(out)
}

fn monte_carlo() -> Result<Outcome> {
    let report = check_monte_carlo(&mc_bodies(), DEFAULT_SAMPLES, DEFAULT_SEED);
    let worst = report.details["bodies"]
        .as_array()
        .into_iter()
        .flatten()
        .flat_map(|b| b["comparisons"].as_array().cloned().unwrap_or_default())
        .filter_map(|c| c["z"].as_f64())
        .fold(0.0f64, |m, z| m.max(z.abs()));
    let mut out = all_pass(&[report]);
    out.summary.push_str(&format!(", max |z| = {worst:.2}"));
    Ok(out)
}

fn busemann_petty() -> Result<Outcome> {
    let ball = BallReference::new(3, BpConfig::default())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, k) in bp_bodies(3, SEED) {
        let r = ball.check(&k, &name)?;
        ok &= r.verdict == Verdict::Pass;
        parts.push(format!("{name} {:?} (margin {:.3})", r.verdict, r.details["margin_approx"].as_f64().unwrap_or(f64::NAN)));
    }
    let nb = ball.check(&near_ball(3, 60, SEED)?, "near-ball")?;
    ok &= nb.verdict == Verdict::Inconclusive;
    parts.push(format!("near-ball {:?}", nb.verdict));
    Ok(Outcome { ok, summary: format!("{} directions: {}", ball.directions.len(), parts.join(", ")) })
}

fn vanishing() -> Result<Outcome> {
    let reports = [check_vanishing(&cfg(3, 50))?, check_mstar_consistency(&cfg(3, 50))?];
    Ok(all_pass(&reports))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>, Option<Duration>); 9] = [
        ("valuation identity", valuation_identity, Some(Duration::from_secs(300))),
        ("equivariance", equivariance, None),
        ("lower-dimensional collapse", collapse, None),
        ("simplex identities", simplex, None),
        ("coefficient recovery", recovery, None),
        ("independence demo", independence, None),
        ("monte-carlo cross-oracle", monte_carlo, None),
        ("busemann-petty sandwich", busemann_petty, Some(Duration::from_secs(600))),
        ("vanishing law", vanishing, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run().unwrap_or_else(|e| Outcome { ok: false, summary: format!("error: {e}") });
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > *b {
                out.ok = false;
                out.summary.push_str(&format!(", over the {}s budget", b.as_secs()));
            }
        }
        let verdict = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} [{:.1}s] {}", i + 1, elapsed.as_secs_f64(), out.summary);
        failures += usize::from(!out.ok);
    }
    if failures == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
