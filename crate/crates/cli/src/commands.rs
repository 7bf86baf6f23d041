use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use minkval_core::harness::bp::{bp_bodies, grid_direction, near_ball, BallReference, BpConfig};
use minkval_core::harness::config::sign_directions;
use minkval_core::harness::independence::check_independence;
use minkval_core::harness::recover::{recover_degree1, recover_np1};
use minkval_core::harness::{CheckReport, TrialConfig, Verdict};
use minkval_core::io::{
    emit_polytope, emit_polytope_string, eval_json, parse_directions, parse_polytope, polytope_json, FORMAT_VERSION,
};
use minkval_core::rational::to_f64;
use minkval_core::{format_rational, Error, Operator, Polytope, RVec, SupportBody, ValuationSpec};

use crate::{checks, Command, Demo, DemoArgs, FamilyArg, OpArgs, RecoverArgs, SampleArgs};

/// A command-line mistake detected after parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// 1 for failed checks and computations, 2 for usage, 3 for I/O and parsing.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::Io(_) | Error::DimensionMismatch { .. } | Error::EmptyInput) => 3,
        Some(Error::InvalidArgument(_) | Error::InvalidSpec(_)) => 2,
        _ => 1,
    }
}

/// Writes to stdout, surfacing a closed pipe as an error instead of a panic.
pub fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn closed_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Hull { input, out } => hull(&input, out.as_deref()),
        Command::Op(args) => op(&args),
        Command::Check(args) => checks::run(&args),
        Command::Recover(args) => recover(&args),
        Command::Demo(args) => demo(&args),
        Command::Sample(args) => sample(&args),
    }
}

fn load_body(path: &Path) -> Result<Polytope> {
    Ok(parse_polytope(path)?)
}

fn hull(input: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let p = load_body(input)?;
    match out {
        Some(path) => emit_polytope(&p, path)?,
        None => emit(&emit_polytope_string(&p))?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn parse_operator(name: &str) -> Result<Operator> {
    name.parse::<Operator>().map_err(|e| Usage(e.to_string()).into())
}

/// The body named by `--name`/`--op` or `--spec`, with a label for output.
fn resolve(name: Option<&str>, spec: Option<&str>, k: &Polytope) -> Result<(String, SupportBody)> {
    match (name, spec) {
        (Some(n), None) => {
            let op = parse_operator(n)?;
            Ok((op.name().to_string(), op.apply(k)?))
        }
        (None, Some(s)) => {
            let spec: ValuationSpec = s.parse().map_err(|e: Error| Usage(e.to_string()))?;
            Ok((spec.to_string(), spec.apply(k)?))
        }
        _ => bail!(Usage("give exactly one of an operator name or a spec".into())),
    }
}

fn op(args: &OpArgs) -> Result<ExitCode> {
    let k = load_body(&args.body)?;
    let dirs = match &args.dirs {
        Some(path) => parse_directions(path).with_context(|| format!("reading {}", path.display()))?,
        None => sign_directions(k.dim()),
    };
    let (label, body) = resolve(args.name.as_deref(), args.spec.as_deref(), &k)?;
    let evals = dirs.iter().map(|u| Ok(eval_json(u, &body.eval(u)?))).collect::<Result<Vec<_>>>()?;
    let out = json!({
        "format_version": FORMAT_VERSION,
        "operator": label,
        "body": polytope_json(&k),
        "evaluations": evals,
    });
    emit(&serde_json::to_string_pretty(&out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn recover(args: &RecoverArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.via)
        .map_err(|e| Error::Io(format!("{}: {e}", args.via.display())))?;
    let raw: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { locus: format!("line {} column {}", e.line(), e.column()), msg: e.to_string() })?;
    let black_box: Box<dyn Fn(&Polytope) -> minkval_core::Result<SupportBody> + Sync> = if let Some(s) =
        raw.get("spec").and_then(Value::as_str)
    {
        let spec: ValuationSpec = s.parse()?;
        Box::new(move |k| spec.apply(k))
    } else if let Some(name) = raw.get("operator").and_then(Value::as_str) {
        let op: Operator = name.parse()?;
        Box::new(move |k| op.apply(k))
    } else if raw.get("family").is_some() {
        let spec: ValuationSpec = serde_json::from_value(raw.clone())
            .map_err(|e| Error::Parse { locus: "spec".into(), msg: e.to_string() })?;
        Box::new(move |k| spec.apply(k))
    } else {
        return Err(Error::Parse {
            locus: args.via.display().to_string(),
            msg: "expected a \"spec\", \"operator\" or \"family\" field".into(),
        }
        .into());
    };
    let mut cfg = TrialConfig::new(args.n, args.validation_trials, args.seed);
    cfg.random_directions = 8;
    let out = match args.family {
        FamilyArg::D1 => {
            let r = recover_degree1(&*black_box, &cfg)?;
            json!({
                "family": "d1",
                "spec": r.spec.to_string(),
                "coefficients": r.spec.coefficients().iter().map(format_rational).collect::<Vec<_>>(),
                "z": r.z.iter().map(format_rational).collect::<Vec<_>>(),
                "side_conditions": r.side_conditions,
            })
        }
        FamilyArg::Np1 => {
            let spec = recover_np1(&*black_box, &cfg)?;
            json!({
                "family": "np1",
                "spec": spec.to_string(),
                "coefficients": spec.coefficients().iter().map(format_rational).collect::<Vec<_>>(),
            })
        }
    };
    emit(&serde_json::to_string_pretty(&out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn print_reports(reports: &[CheckReport]) -> Result<()> {
    for r in reports {
        emit(&r.to_json())?;
    }
    Ok(())
}

fn demo(args: &DemoArgs) -> Result<ExitCode> {
    match args.which {
        Demo::Independence => {
            let report = check_independence(&TrialConfig::new(args.n, 1, args.seed))?;
            print_reports(std::slice::from_ref(&report))?;
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Demo::Corollary => {
            let config = BpConfig { directions: args.directions, ..BpConfig::default() };
            let ball = BallReference::new(args.n, config)?;
            let mut reports = Vec::new();
            for (name, k) in bp_bodies(args.n, args.seed) {
                reports.push(ball.check(&k, &name)?);
            }
            reports.push(ball.check(&near_ball(args.n, 60, args.seed)?, "near-ball")?);
            print_reports(&reports)?;
            let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn sample_directions(n: usize, grid: usize, bits: u32) -> Result<Vec<RVec>> {
    if grid == 0 {
        bail!(Usage("--grid must be positive".into()));
    }
    let targets: Vec<Vec<f64>> = match n {
        2 => (0..grid)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / grid as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let lat = (grid / 2).max(1);
            let mut out = Vec::with_capacity(grid * lat);
            for j in 0..lat {
                let polar = PI * (j as f64 + 0.5) / lat as f64;
                for k in 0..grid {
                    let az = 2.0 * PI * k as f64 / grid as f64;
                    out.push(vec![polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos()]);
                }
            }
            out
        }
        _ => bail!(Usage(format!("sampling supports bodies in dimension 2 or 3, got {n}"))),
    };
    Ok(targets.iter().map(|t| grid_direction(t, bits)).filter(|u| !u.is_zero()).collect())
}

fn sample(args: &SampleArgs) -> Result<ExitCode> {
    let k = load_body(&args.body)?;
    let (_, body) = resolve(args.op.as_deref(), args.spec.as_deref(), &k)?;
    let n = k.dim();
    let dirs = sample_directions(n, args.grid, args.bits)?;
    let mut csv = String::new();
    let ucols: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    writeln!(csv, "index,{},value,value_approx", ucols.join(","))?;
    for (i, u) in dirs.iter().enumerate() {
        let v = body.value(u)?;
        let us: Vec<String> = u.coords().iter().map(format_rational).collect();
        writeln!(csv, "{i},{},{},{:.12e}", us.join(","), format_rational(&v), to_f64(&v))?;
    }
    emit(csv.trim_end_matches('\n'))?;
    Ok(ExitCode::SUCCESS)
}
