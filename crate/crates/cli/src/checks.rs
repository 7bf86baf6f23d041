//! The `check` command: named harness checks streamed as JSON lines.

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde_json::json;

use minkval_core::harness::bp::{bp_bodies, BallReference, BpConfig};
use minkval_core::harness::checks::{
    check_equivariance, check_line_projection_reduction, check_lower_dim_collapse, check_mstar_consistency,
    check_point_segment_inclusion, check_symmetry_invariance, check_valuation_identity, check_vanishing,
    cube_rotations, even_permutations,
};
use minkval_core::harness::independence::check_independence;
use minkval_core::harness::montecarlo::{check_monte_carlo, mc_bodies, DEFAULT_SAMPLES, DEFAULT_SEED};
use minkval_core::harness::recover::check_recovery_round_trip;
use minkval_core::harness::simplex::{check_simplex_identities, standard_simplex};
use minkval_core::harness::{CheckReport, Target, TrialConfig, Verdict};
use minkval_core::io::parse_directions;
use minkval_core::{Family, Operator, Polytope, RVec};

use crate::commands::{emit, parse_operator, Usage};
use crate::CheckArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    ValuationIdentity,
    CentroidNotValuation,
    Equivariance,
    Collapse,
    Simplex,
    Recovery,
    Independence,
    Vanishing,
    MstarConsistency,
    Inclusion,
    LineProjection,
    Symmetry,
    MonteCarlo,
    Bp,
}

fn ops_for(name: CheckName, only: Option<Operator>) -> Vec<Operator> {
    let all: Vec<Operator> = match name {
        CheckName::ValuationIdentity => Operator::VALUATIONS.to_vec(),
        CheckName::Equivariance => Operator::VALUATIONS.into_iter().chain([Operator::ProjBody]).collect(),
        CheckName::Collapse => Operator::DEGREE_NP1.into_iter().chain(Operator::DEGREE_ONE).collect(),
        CheckName::LineProjection => Operator::DEGREE_ONE.to_vec(),
        _ => Vec::new(),
    };
    match only {
        Some(op) => all.into_iter().filter(|&o| o == op).collect(),
        None => all,
    }
}

fn skipped(check: &str, seed: u64, reason: &str) -> CheckReport {
    let mut r = CheckReport::new(check, seed).with_details(json!({"reason": reason}));
    r.verdict = Verdict::Skipped;
    r
}

fn centroid_not_valuation(cfg: &TrialConfig) -> Result<CheckReport> {
    let inner = check_valuation_identity(&Target::from(Operator::CentroidBody), cfg)?;
    let mut r = CheckReport::new(format!("centroid-not-valuation/n{}", cfg.n), cfg.seed);
    r.trials = inner.trials;
    r.skipped = inner.skipped;
    match (&inner.verdict, &inner.witness) {
        (Verdict::Fail, Some(w)) => Ok(r.with_details(json!({"identity_witness": w}))),
        _ => {
            r.fail(json!({"reason": "the centroid body satisfied the identity on every trial"}));
            Ok(r)
        }
    }
}

fn symmetry(cfg: &TrialConfig) -> Result<Vec<CheckReport>> {
    let n = cfg.n;
    let dirs = cfg.directions();
    let cube_pts: Vec<RVec> = (0..1u32 << n)
        .map(|m| RVec::from_ints(&(0..n).map(|i| if m >> i & 1 == 1 { 1 } else { -1 }).collect::<Vec<_>>()))
        .collect();
    let cube = Polytope::hull(&cube_pts)?;
    Ok(vec![
        check_symmetry_invariance(
            &Target::from(Operator::MomentBodyStar),
            &standard_simplex(n),
            &even_permutations(n),
            &dirs,
            cfg.seed,
        )?,
        check_symmetry_invariance(&Target::from(Operator::MomentBody), &cube, &cube_rotations(n), &dirs, cfg.seed)?,
    ])
}

fn run_one(name: CheckName, cfg: &TrialConfig, only: Option<Operator>) -> Result<Vec<CheckReport>> {
    let per_op = |f: fn(&Target, &TrialConfig) -> minkval_core::Result<CheckReport>| -> Result<Vec<CheckReport>> {
        Ok(ops_for(name, only).into_iter().map(|op| f(&Target::from(op), cfg)).collect::<minkval_core::Result<_>>()?)
    };
    let n = cfg.n;
    Ok(match name {
        CheckName::ValuationIdentity => per_op(check_valuation_identity)?,
        CheckName::Equivariance => per_op(check_equivariance)?,
        CheckName::Collapse => per_op(check_lower_dim_collapse)?,
        CheckName::LineProjection => per_op(check_line_projection_reduction)?,
        CheckName::CentroidNotValuation => vec![centroid_not_valuation(cfg)?],
        CheckName::Simplex => vec![check_simplex_identities(Family::DegreeNPlus1, cfg)?],
        CheckName::Recovery => vec![
            check_recovery_round_trip(Family::Degree1, cfg)?,
            check_recovery_round_trip(Family::DegreeNPlus1, cfg)?,
        ],
        CheckName::Independence => vec![check_independence(cfg)?],
        CheckName::Vanishing => vec![check_vanishing(cfg)?],
        CheckName::MstarConsistency => vec![check_mstar_consistency(cfg)?],
        CheckName::Inclusion => vec![check_point_segment_inclusion(cfg)?],
        CheckName::Symmetry => symmetry(cfg)?,
        CheckName::MonteCarlo if n == 3 => vec![check_monte_carlo(&mc_bodies(), DEFAULT_SAMPLES, DEFAULT_SEED)],
        CheckName::MonteCarlo => vec![skipped("monte-carlo", DEFAULT_SEED, "the fixed bodies live in dimension 3")],
        CheckName::Bp if n == 3 => {
            let ball = BallReference::new(n, BpConfig::default())?;
            bp_bodies(n, cfg.seed)
                .iter()
                .map(|(label, k)| ball.check(k, label))
                .collect::<minkval_core::Result<_>>()?
        }
        CheckName::Bp => vec![skipped(&format!("bp-inequality/n{n}"), cfg.seed, "run with --n 3")],
    })
}

pub fn run(args: &CheckArgs) -> Result<ExitCode> {
    let names: Vec<CheckName> = if args.all {
        CheckName::value_variants().to_vec()
    } else if args.check.is_empty() {
        bail!(Usage("give --all or at least one --check".into()));
    } else {
        args.check.clone()
    };
    if args.n < 3 {
        bail!(Usage(format!("checks need --n >= 3, got {}", args.n)));
    }
    let only = args.op.as_deref().map(parse_operator).transpose()?;
    let mut cfg = TrialConfig::new(args.n, args.trials, args.seed);
    cfg.random_directions = args.random_directions;
    if let Some(path) = &args.dirs {
        let dirs = parse_directions(path)?;
        if dirs[0].dim() != args.n {
            return Err(minkval_core::Error::DimensionMismatch { expected: args.n, found: dirs[0].dim() }.into());
        }
        cfg.directions = Some(dirs);
    }
    let mut ok = true;
    for name in names {
        for report in run_one(name, &cfg, only)? {
            emit(&report.to_json())?;
            ok &= matches!(report.verdict, Verdict::Pass | Verdict::Skipped);
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
