//! JSON formats for polytopes, direction sets and evaluation records.
//!
//! Rationals are always strings (`"p/q"` or `"p"`), emitted in lowest terms.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Polytope, RVec};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::valuation::SupportPoint;

pub const FORMAT_VERSION: &str = "1";

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rvec_json(v: &RVec) -> Value {
    Value::Array(v.coords().iter().map(rational_json).collect())
}

pub fn polytope_json(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(rvec_json).collect::<Vec<_>>(),
    })
}

/// `{"direction": [...], "value": "p/q", "point": [...]}`.
pub fn eval_json(u: &RVec, sp: &SupportPoint) -> Value {
    json!({
        "direction": rvec_json(u),
        "value": rational_json(&sp.value),
        "point": rvec_json(&sp.point),
    })
}

pub fn emit_polytope_string(p: &Polytope) -> String {
    serde_json::to_string_pretty(&polytope_json(p)).expect("json")
}

pub fn emit_polytope(p: &Polytope, path: &Path) -> Result<()> {
    fs::write(path, emit_polytope_string(p) + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

fn parse_point(raw: &[String], locus: &str) -> Result<RVec> {
    raw.iter()
        .enumerate()
        .map(|(k, s)| parse_rational(s).map_err(|m| Error::parse(format!("{locus}[{k}]"), m)))
        .collect::<Result<Vec<_>>>()
        .map(RVec::new)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

pub fn parse_polytope_str(text: &str) -> Result<Polytope> {
    let raw: PolytopeFile = serde_json::from_str(text).map_err(json_error)?;
    if raw.vertices.is_empty() {
        return Err(Error::parse("vertices", "at least one vertex is required"));
    }
    let mut pts = Vec::with_capacity(raw.vertices.len());
    for (i, v) in raw.vertices.iter().enumerate() {
        if v.len() != raw.dim {
            return Err(Error::DimensionMismatch {
                expected: raw.dim,
                found: v.len(),
            });
        }
        pts.push(parse_point(v, &format!("vertices[{i}]"))?);
    }
    Polytope::hull(&pts)
}

pub fn parse_polytope(path: &Path) -> Result<Polytope> {
    parse_polytope_str(&read(path)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DirectionFile {
    Tagged { dim: usize, directions: Vec<Vec<String>> },
    Bare(Vec<Vec<String>>),
}

/// `{"dim": n, "directions": [...]}` or a bare array of vectors.
pub fn parse_directions_str(text: &str) -> Result<Vec<RVec>> {
    let raw: DirectionFile = serde_json::from_str(text).map_err(json_error)?;
    let (dim, rows) = match raw {
        DirectionFile::Tagged { dim, directions } => (Some(dim), directions),
        DirectionFile::Bare(rows) => (None, rows),
    };
    let dim = dim.or_else(|| rows.first().map(Vec::len)).ok_or(Error::EmptyInput)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
        let v = parse_point(r, &format!("directions[{i}]"))?;
        if v.is_zero() {
            return Err(Error::parse(format!("directions[{i}]"), "direction must be nonzero"));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn parse_directions(path: &Path) -> Result<Vec<RVec>> {
    parse_directions_str(&read(path)?)
}

pub fn directions_json(dirs: &[RVec]) -> Value {
    json!({
        "dim": dirs.first().map(RVec::dim).unwrap_or(0),
        "directions": dirs.iter().map(rvec_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn polytope_round_trip() {
        let text = r#"{"dim":3,"vertices":[["0","0","0"],["1","0","0"],["0","1","0"],["0","0","1"],["1/4","1/4","1/4"]]}"#;
        let p = parse_polytope_str(text).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), frac(1, 6));
        let again = parse_polytope_str(&emit_polytope_string(&p)).unwrap();
        assert_eq!(again, p);
        assert_eq!(emit_polytope_string(&again), emit_polytope_string(&p));
    }

    #[test]
    fn parse_errors_carry_locus() {
        let bad = r#"{"dim":2,"vertices":[["0","0"],["1/0","1"]]}"#;
        match parse_polytope_str(bad) {
            Err(Error::Parse { locus, .. }) => assert_eq!(locus, "vertices[1][0]"),
            other => panic!("unexpected {other:?}"),
        }
        let mismatch = r#"{"dim":2,"vertices":[["0","0","0"]]}"#;
        assert!(matches!(parse_polytope_str(mismatch), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_polytope_str("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn direction_files() {
        let d = parse_directions_str(r#"[["1","0"],["0","-1/2"]]"#).unwrap();
        assert_eq!(d.len(), 2);
        let d = parse_directions_str(r#"{"dim":2,"directions":[["1","1"]]}"#).unwrap();
        assert_eq!(d[0], RVec::from_ints(&[1, 1]));
        assert!(parse_directions_str(r#"[["0","0"]]"#).is_err());
        assert!(parse_directions_str(r#"[["1"],["1","2"]]"#).is_err());
    }
}
