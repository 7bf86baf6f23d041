//! Convex bodies given by exact support oracles.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{integrals, Polytope, RMat, RVec};
use crate::rational::Rational;

/// Support value `h(A, u)` and a point of `A` attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPoint {
    pub value: Rational,
    pub point: RVec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BodyKind {
    Polytope,
    MomentType,
    ProjectionType,
    Combination,
}

type Oracle = dyn Fn(&RVec) -> RVec + Send + Sync;

/// A convex body known through `u -> argmax_{x in A} <u, x>`; the support value
/// is always `<u, point>`, so the point attains it by construction.
#[derive(Clone)]
pub struct SupportBody {
    dim: usize,
    kind: BodyKind,
    oracle: Arc<Oracle>,
}

impl fmt::Debug for SupportBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportBody")
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .finish()
    }
}

impl SupportBody {
    fn new(dim: usize, kind: BodyKind, oracle: impl Fn(&RVec) -> RVec + Send + Sync + 'static) -> Self {
        SupportBody {
            dim,
            kind,
            oracle: Arc::new(oracle),
        }
    }

    /// A body given by an arbitrary support-point oracle. The caller is
    /// responsible for the oracle describing a convex body.
    pub fn from_oracle(dim: usize, kind: BodyKind, oracle: impl Fn(&RVec) -> RVec + Send + Sync + 'static) -> Self {
        Self::new(dim, kind, oracle)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn eval(&self, u: &RVec) -> Result<SupportPoint> {
        check_dim(self.dim, u.dim())?;
        if u.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let point = (self.oracle)(u);
        Ok(SupportPoint {
            value: u.dot(&point),
            point,
        })
    }

    pub fn value(&self, u: &RVec) -> Result<Rational> {
        Ok(self.eval(u)?.value)
    }

    pub fn from_polytope(p: Polytope) -> Self {
        let dim = p.dim();
        Self::new(dim, BodyKind::Polytope, move |u| p.support(u).expect("dimension checked").1)
    }

    /// The one-point body `{x}`.
    pub fn point(x: RVec) -> Self {
        Self::new(x.dim(), BodyKind::Polytope, move |_| x.clone())
    }

    /// `MK`: `h(MK, u) = ∫_K |<u, y>| dy`.
    pub fn moment_body(k: &Polytope) -> Self {
        let k = k.clone();
        Self::new(k.dim(), BodyKind::MomentType, move |u| integrals::moment_body_point(&k, u))
    }

    /// `M*K`: the moment body of `K_o \ K`.
    pub fn moment_body_star(k: &Polytope) -> Self {
        let k = k.clone();
        let ko = k.o_hull();
        Self::new(k.dim(), BodyKind::MomentType, move |u| {
            if ko == k {
                return RVec::zeros(k.dim());
            }
            let mut p = integrals::moment_body_point(&ko, u);
            p.sub_assign(&integrals::moment_body_point(&k, u));
            p
        })
    }

    /// `ΠK` through facet vector areas. Bodies of intrinsic dimension below
    /// `n - 1` have zero projections and give `{0}`.
    pub fn projection_body(k: &Polytope) -> Self {
        let n = k.dim();
        let areas = if k.is_full_dimensional() {
            integrals::facet_vector_areas(k)
        } else if k.intrinsic_dim() + 1 == n {
            let a = integrals::flat_vector_area(k);
            vec![a.clone(), -&a]
        } else {
            Vec::new()
        };
        Self::new(n, BodyKind::ProjectionType, move |u| {
            let mut p = RVec::zeros(n);
            for a in &areas {
                let s = u.dot(a);
                if s.is_positive() {
                    p.add_assign(a);
                } else if s.is_negative() {
                    p.sub_assign(a);
                }
            }
            p.scale(&Rational::new(1.into(), 2.into()))
        })
    }

    /// `λ A`; negative factors reflect through the origin.
    pub fn scale(&self, lambda: Rational) -> Self {
        let inner = self.clone();
        Self::new(self.dim, self.kind, move |u| {
            if lambda.is_zero() {
                RVec::zeros(u.dim())
            } else if lambda.is_positive() {
                (inner.oracle)(u).scale(&lambda)
            } else {
                (inner.oracle)(&-u).scale(&lambda)
            }
        })
    }

    /// Minkowski sum of bodies of one ambient dimension.
    pub fn sum(parts: Vec<SupportBody>) -> Result<Self> {
        let dim = parts.first().ok_or(Error::EmptyInput)?.dim;
        for p in &parts {
            check_dim(dim, p.dim)?;
        }
        Ok(Self::new(dim, BodyKind::Combination, move |u| {
            let mut acc = RVec::zeros(dim);
            for p in &parts {
                acc.add_assign(&(p.oracle)(u));
            }
            acc
        }))
    }

    /// `Σ λ_i A_i`, dropping zero coefficients.
    pub fn combination(terms: Vec<(Rational, SupportBody)>) -> Result<Self> {
        let dim = terms.first().ok_or(Error::EmptyInput)?.1.dim;
        let parts: Vec<SupportBody> = terms
            .into_iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, b)| b.scale(c))
            .collect();
        if parts.is_empty() {
            return Ok(Self::point(RVec::zeros(dim)));
        }
        Self::sum(parts)
    }

    /// `φ A`, using `h(φA, u) = h(A, φ^t u)`.
    pub fn transform(&self, phi: &RMat) -> Result<Self> {
        check_dim(self.dim, phi.dim())?;
        if !phi.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let phi = phi.clone();
        let phit = phi.transpose();
        let inner = self.clone();
        Ok(Self::new(self.dim, self.kind, move |u| {
            phi.mul_vec(&(inner.oracle)(&phit.mul_vec(u)))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(c: &[i64]) -> RVec {
        RVec::from_ints(c)
    }

    fn unit_cube() -> Polytope {
        let mut pts = Vec::new();
        for m in 0..8i64 {
            pts.push(v(&[m & 1, m >> 1 & 1, m >> 2 & 1]));
        }
        Polytope::hull(&pts).unwrap()
    }

    #[test]
    fn moment_body_values() {
        let mk = SupportBody::moment_body(&unit_cube());
        let sp = mk.eval(&v(&[1, 0, 0])).unwrap();
        assert_eq!(sp.value, frac(1, 2));
        assert_eq!(sp.point, RVec::new(vec![frac(1, 2); 3]));
        assert_eq!(mk.eval(&v(&[0, 0, 0])), Err(Error::ZeroDirection));
        let doubled = mk.transform(&RMat::scalar(3, &int(2))).unwrap();
        assert_eq!(doubled.value(&v(&[1, 0, 0])).unwrap(), int(1));
    }

    #[test]
    fn projection_body_values() {
        let pk = SupportBody::projection_body(&unit_cube());
        assert_eq!(pk.value(&v(&[1, 0, 0])).unwrap(), int(1));
        assert_eq!(pk.value(&v(&[1, 1, 1])).unwrap(), int(3));
        let s = Polytope::hull(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(SupportBody::projection_body(&s).value(&v(&[1, 0, 0])).unwrap(), frac(1, 2));
        let seg = Polytope::hull(&[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(SupportBody::projection_body(&seg).value(&v(&[1, 0, 0])).unwrap(), int(0));
    }

    #[test]
    fn negative_scaling_reflects() {
        let seg = Polytope::hull(&[v(&[0, 0, 0]), v(&[1, 0, 0])]).unwrap();
        let body = SupportBody::from_polytope(seg).scale(int(-2));
        assert_eq!(body.value(&v(&[1, 0, 0])).unwrap(), int(0));
        assert_eq!(body.value(&v(&[-1, 0, 0])).unwrap(), int(2));
    }

    #[test]
    fn singular_transform_rejected() {
        let body = SupportBody::point(v(&[1, 2, 3]));
        let phi = RMat::diagonal(&[int(1), int(0), int(1)]);
        assert!(matches!(body.transform(&phi), Err(Error::SingularMatrix)));
    }
}
