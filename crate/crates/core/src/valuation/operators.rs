//! The operator zoo: K, -K, K_o, -K_o, m, m*, M, M*, Π, difference and
//! centroid bodies.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::support::{SupportBody, SupportPoint};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, RVec};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Operator {
    Id,
    Neg,
    OHull,
    NegOHull,
    MomentVec,
    MomentVecStar,
    MomentBody,
    MomentBodyStar,
    ProjBody,
    DiffBody,
    CentroidBody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variance {
    Equivariant,
    Contravariant,
}

/// `Φ(φK) = |det φ|^q φ ΦK` (or `φ^{-t}` when contravariant), `Φ(λK) = λ^r ΦK`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDescriptor {
    pub operator: Operator,
    pub q: Rational,
    pub r: Rational,
    pub variance: Variance,
}

impl Operator {
    pub const ALL: [Operator; 11] = [
        Operator::Id,
        Operator::Neg,
        Operator::OHull,
        Operator::NegOHull,
        Operator::MomentVec,
        Operator::MomentVecStar,
        Operator::MomentBody,
        Operator::MomentBodyStar,
        Operator::ProjBody,
        Operator::DiffBody,
        Operator::CentroidBody,
    ];

    /// The valuations exercised by the split-identity suite.
    pub const VALUATIONS: [Operator; 9] = [
        Operator::Id,
        Operator::Neg,
        Operator::OHull,
        Operator::NegOHull,
        Operator::MomentVec,
        Operator::MomentVecStar,
        Operator::MomentBody,
        Operator::MomentBodyStar,
        Operator::DiffBody,
    ];

    pub const DEGREE_ONE: [Operator; 4] = [Operator::Id, Operator::Neg, Operator::OHull, Operator::NegOHull];

    pub const DEGREE_NP1: [Operator; 4] = [
        Operator::MomentVec,
        Operator::MomentVecStar,
        Operator::MomentBody,
        Operator::MomentBodyStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Id => "Id",
            Operator::Neg => "Neg",
            Operator::OHull => "OHull",
            Operator::NegOHull => "NegOHull",
            Operator::MomentVec => "m",
            Operator::MomentVecStar => "mstar",
            Operator::MomentBody => "M",
            Operator::MomentBodyStar => "Mstar",
            Operator::ProjBody => "Pi",
            Operator::DiffBody => "Diff",
            Operator::CentroidBody => "Gamma",
        }
    }

    pub fn is_valuation(self) -> bool {
        self != Operator::CentroidBody
    }

    pub fn descriptor(self, n: usize) -> OperatorDescriptor {
        let n = n as i64;
        let (q, r, variance) = match self {
            Operator::Id | Operator::Neg | Operator::OHull | Operator::NegOHull | Operator::DiffBody => {
                (0, 1, Variance::Equivariant)
            }
            Operator::MomentVec | Operator::MomentVecStar | Operator::MomentBody | Operator::MomentBodyStar => {
                (1, n + 1, Variance::Equivariant)
            }
            Operator::ProjBody => (1, n - 1, Variance::Contravariant),
            Operator::CentroidBody => (0, 1, Variance::Equivariant),
        };
        OperatorDescriptor {
            operator: self,
            q: int(q),
            r: int(r),
            variance,
        }
    }

    /// `ΦK` as a support oracle.
    pub fn apply(self, k: &Polytope) -> Result<SupportBody> {
        Ok(match self {
            Operator::Id => SupportBody::from_polytope(k.clone()),
            Operator::Neg => SupportBody::from_polytope(k.negate()),
            Operator::OHull => SupportBody::from_polytope(k.o_hull()),
            Operator::NegOHull => SupportBody::from_polytope(k.o_hull().negate()),
            Operator::MomentVec => SupportBody::point(k.moment_vector()),
            Operator::MomentVecStar => SupportBody::point(m_star(k)),
            Operator::MomentBody => SupportBody::moment_body(k),
            Operator::MomentBodyStar => SupportBody::moment_body_star(k),
            Operator::ProjBody => SupportBody::projection_body(k),
            Operator::DiffBody => SupportBody::from_polytope(difference_body(k)),
            Operator::CentroidBody => {
                let vol = k.volume();
                if vol.is_zero() {
                    return Err(Error::ZeroVolume);
                }
                SupportBody::moment_body(k).scale(vol.recip())
            }
        })
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let op = match s {
            "Id" | "id" => Operator::Id,
            "Neg" | "neg" => Operator::Neg,
            "OHull" | "ohull" => Operator::OHull,
            "NegOHull" | "negohull" => Operator::NegOHull,
            "m" | "MomentVec" => Operator::MomentVec,
            "mstar" | "m*" | "MomentVecStar" => Operator::MomentVecStar,
            "M" | "MomentBody" => Operator::MomentBody,
            "Mstar" | "M*" | "MomentBodyStar" => Operator::MomentBodyStar,
            "Pi" | "ProjBody" => Operator::ProjBody,
            "Diff" | "DiffBody" => Operator::DiffBody,
            "Gamma" | "CentroidBody" => Operator::CentroidBody,
            other => return Err(Error::InvalidArgument(format!("unknown operator '{other}'"))),
        };
        Ok(op)
    }
}

/// `m*(K) = m(K_o) - m(K)`.
pub fn m_star(k: &Polytope) -> RVec {
    let mut m = k.o_hull().moment_vector();
    m.sub_assign(&k.moment_vector());
    m
}

pub fn difference_body(k: &Polytope) -> Polytope {
    k.minkowski_sum(&k.negate()).expect("same dimension")
}

pub fn moment_body_eval(k: &Polytope, u: &RVec) -> Result<SupportPoint> {
    SupportBody::moment_body(k).eval(u)
}

pub fn moment_body_star_eval(k: &Polytope, u: &RVec) -> Result<SupportPoint> {
    SupportBody::moment_body_star(k).eval(u)
}

pub fn projection_body_eval(k: &Polytope, u: &RVec) -> Result<SupportPoint> {
    SupportBody::projection_body(k).eval(u)
}

pub fn centroid_body_eval(k: &Polytope, u: &RVec) -> Result<Rational> {
    Operator::CentroidBody.apply(k)?.value(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn v(c: &[i64]) -> RVec {
        RVec::from_ints(c)
    }

    fn simplex_s() -> Polytope {
        Polytope::hull(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap()
    }

    fn centered_cube() -> Polytope {
        let mut pts = Vec::new();
        for m in 0..8usize {
            pts.push(RVec::new(
                (0..3).map(|i| if m >> i & 1 == 1 { frac(1, 2) } else { frac(-1, 2) }).collect(),
            ));
        }
        Polytope::hull(&pts).unwrap()
    }

    #[test]
    fn descriptor_table() {
        let d = Operator::MomentBody.descriptor(3);
        assert_eq!((d.q, d.r), (int(1), int(4)));
        let d = Operator::ProjBody.descriptor(3);
        assert_eq!((d.q, d.r, d.variance), (int(1), int(2), Variance::Contravariant));
        let d = Operator::OHull.descriptor(4);
        assert_eq!((d.q, d.r), (int(0), int(1)));
    }

    #[test]
    fn names_round_trip() {
        for op in Operator::ALL {
            assert_eq!(op.name().parse::<Operator>().unwrap(), op);
        }
        assert!("nope".parse::<Operator>().is_err());
    }

    #[test]
    fn m_star_of_facet_simplex() {
        assert_eq!(m_star(&simplex_s()), RVec::new(vec![frac(1, 24); 3]));
        assert!(m_star(&centered_cube()).is_zero());
        assert!(m_star(&Polytope::point(v(&[1, 0, 0]))).is_zero());
    }

    #[test]
    fn moment_body_star_values() {
        let e1 = v(&[1, 0, 0]);
        assert_eq!(moment_body_star_eval(&simplex_s(), &e1).unwrap().value, frac(1, 24));
        assert_eq!(moment_body_star_eval(&centered_cube(), &e1).unwrap().value, int(0));
        assert_eq!(moment_body_eval(&centered_cube(), &e1).unwrap().value, frac(1, 4));
        assert_eq!(moment_body_eval(&simplex_s(), &e1).unwrap().value, int(0));
    }

    #[test]
    fn centroid_and_difference_bodies() {
        assert_eq!(centroid_body_eval(&centered_cube(), &v(&[1, 0, 0])).unwrap(), frac(1, 4));
        assert_eq!(centroid_body_eval(&simplex_s(), &v(&[1, 0, 0])), Err(Error::ZeroVolume));
        let d = difference_body(&Polytope::point(v(&[3, 1, 2])));
        assert_eq!(d.vertices(), &[v(&[0, 0, 0])]);
    }
}
