//! The two classified families of GL(n) equivariant Minkowski valuations.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::operators::Operator;
use super::support::SupportBody;
use crate::error::{Error, Result};
use crate::geometry::{Polytope, RVec};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `a1 K + a2 (-K) + a3 K_o + a4 (-K_o)`, all `a_i >= 0`.
    #[serde(rename = "d1")]
    Degree1,
    /// `a1 m(K) + a2 m*(K) + a3 MK + a4 M*K`, `a3, a4 >= 0`.
    #[serde(rename = "np1")]
    DegreeNPlus1,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Degree1 => "d1",
            Family::DegreeNPlus1 => "np1",
        }
    }

    pub fn basis(self) -> [Operator; 4] {
        match self {
            Family::Degree1 => Operator::DEGREE_ONE,
            Family::DegreeNPlus1 => Operator::DEGREE_NP1,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d1" | "degree1" => Ok(Family::Degree1),
            "np1" | "degree-np1" => Ok(Family::DegreeNPlus1),
            other => Err(Error::InvalidSpec(format!("unknown family '{other}'"))),
        }
    }
}

/// A member of one of the two families, by its coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct ValuationSpec {
    family: Family,
    coefficients: [Rational; 4],
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: Family,
    coefficients: Vec<String>,
}

impl TryFrom<SpecRepr> for ValuationSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        if r.coefficients.len() != 4 {
            return Err(Error::InvalidSpec(format!(
                "expected 4 coefficients, found {}",
                r.coefficients.len()
            )));
        }
        let mut cs = Vec::with_capacity(4);
        for c in &r.coefficients {
            cs.push(parse_rational(c).map_err(Error::InvalidSpec)?);
        }
        ValuationSpec::new(r.family, cs.try_into().expect("four coefficients"))
    }
}

impl From<ValuationSpec> for SpecRepr {
    fn from(s: ValuationSpec) -> Self {
        SpecRepr {
            family: s.family,
            coefficients: s.coefficients.iter().map(format_rational).collect(),
        }
    }
}

impl ValuationSpec {
    pub fn new(family: Family, coefficients: [Rational; 4]) -> Result<Self> {
        let constrained = match family {
            Family::Degree1 => 0..4,
            Family::DegreeNPlus1 => 2..4,
        };
        for i in constrained {
            if coefficients[i].is_negative() {
                return Err(Error::InvalidSpec(format!(
                    "a{} = {} must be nonnegative in family {}",
                    i + 1,
                    format_rational(&coefficients[i]),
                    family.tag()
                )));
            }
        }
        Ok(ValuationSpec { family, coefficients })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn coefficients(&self) -> &[Rational; 4] {
        &self.coefficients
    }

    /// `ΦK` as a support oracle.
    pub fn apply(&self, k: &Polytope) -> Result<SupportBody> {
        let mut terms = Vec::with_capacity(4);
        for (c, op) in self.coefficients.iter().zip(self.family.basis()) {
            if !num_traits::Zero::is_zero(c) {
                terms.push((c.clone(), op.apply(k)?));
            }
        }
        if terms.is_empty() {
            return Ok(SupportBody::point(RVec::zeros(k.dim())));
        }
        SupportBody::combination(terms)
    }

    pub fn eval(&self, k: &Polytope, u: &RVec) -> Result<Rational> {
        self.apply(k)?.value(u)
    }
}

impl fmt::Display for ValuationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coefficients.iter().map(format_rational).collect();
        write!(f, "{}:{}", self.family.tag(), cs.join(","))
    }
}

impl FromStr for ValuationSpec {
    type Err = Error;

    /// `"np1:1,0,2,1"` or `"d1:1,0,0,0"`.
    fn from_str(s: &str) -> Result<Self> {
        let (fam, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected '<family>:a1,a2,a3,a4', got '{s}'")))?;
        let family: Family = fam.trim().parse()?;
        let cs: Vec<Rational> = rest
            .split(',')
            .map(|c| parse_rational(c).map_err(Error::InvalidSpec))
            .collect::<Result<_>>()?;
        let cs: [Rational; 4] = cs
            .try_into()
            .map_err(|v: Vec<Rational>| Error::InvalidSpec(format!("expected 4 coefficients, found {}", v.len())))?;
        ValuationSpec::new(family, cs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(c: &[i64]) -> RVec {
        RVec::from_ints(c)
    }

    #[test]
    fn parses_and_validates() {
        let s: ValuationSpec = "np1:2,-1,3,1".parse().unwrap();
        assert_eq!(s.coefficients()[1], int(-1));
        assert_eq!(s.to_string(), "np1:2,-1,3,1");
        assert!("d1:1,-1,0,0".parse::<ValuationSpec>().is_err());
        assert!("np1:0,0,-1,0".parse::<ValuationSpec>().is_err());
        assert!("np1:1,2".parse::<ValuationSpec>().is_err());
        assert!("x:1,2,3,4".parse::<ValuationSpec>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let s: ValuationSpec = "d1:1/2,0,3,0".parse().unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"family":"d1","coefficients":["1/2","0","3","0"]}"#);
        let back: ValuationSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"family":"d1","coefficients":["-1","0","0","0"]}"#;
        assert!(serde_json::from_str::<ValuationSpec>(bad).is_err());
    }

    #[test]
    fn family_members_evaluate() {
        let cube = {
            let mut pts = Vec::new();
            for m in 0..8i64 {
                pts.push(v(&[m & 1, m >> 1 & 1, m >> 2 & 1]));
            }
            Polytope::hull(&pts).unwrap()
        };
        let e1 = v(&[1, 0, 0]);
        let id: ValuationSpec = "d1:1,0,0,0".parse().unwrap();
        assert_eq!(id.eval(&cube, &e1).unwrap(), int(1));
        let mb: ValuationSpec = "np1:0,0,1,0".parse().unwrap();
        assert_eq!(mb.eval(&cube, &e1).unwrap(), frac(1, 2));
        let s = Polytope::hull(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let mix: ValuationSpec = "np1:1,1,0,0".parse().unwrap();
        assert_eq!(mix.eval(&s, &e1).unwrap(), frac(1, 24));
    }
}
