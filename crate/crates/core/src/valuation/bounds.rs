//! Rigorous inner and outer volume bounds for support-oracle bodies.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::support::SupportBody;
use crate::error::{Error, Result};
use crate::geometry::linalg::{solve, Solution};
use crate::geometry::{Halfspace, Polytope, RMat, RVec};
use crate::rational::{round_up, Rational};

/// Inner polytope `conv{x(u)}` and outer polytope `∩ {<u,x> <= h(u)}`.
#[derive(Clone, Debug)]
pub struct VolumeBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub inner: Polytope,
    pub outer: Polytope,
}

/// True when the positive hull of `dirs` is all of `R^n`.
pub fn positively_spanning(dirs: &[RVec]) -> Result<bool> {
    let hull = Polytope::hull(dirs)?;
    if !hull.is_full_dimensional() {
        return Ok(false);
    }
    Ok(hull.facets().iter().all(|f| f.halfspace.offset().is_positive()))
}

pub fn volume_bounds(body: &SupportBody, dirs: &[RVec]) -> Result<VolumeBounds> {
    if dirs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !positively_spanning(dirs)? {
        return Err(Error::DegenerateDirections);
    }
    let evals = dirs.iter().map(|u| body.eval(u)).collect::<Result<Vec<_>>>()?;
    let points: Vec<RVec> = evals.iter().map(|e| e.point.clone()).collect();
    let inner = Polytope::hull(&points)?;
    let halfspaces = dirs
        .iter()
        .zip(&evals)
        .map(|(u, e)| Halfspace::new(u.clone(), e.value.clone()))
        .collect::<Result<Vec<_>>>()?;
    let outer = if inner.is_full_dimensional() {
        polar_outer(&halfspaces, &inner.vertex_centroid())?
    } else {
        Polytope::hull(&halfspace_vertices(&halfspaces))?
    };
    Ok(VolumeBounds {
        lower: inner.volume(),
        upper: outer.volume(),
        inner,
        outer,
    })
}

/// Bounds for an origin-symmetric body, with every point and offset moved
/// onto a dyadic grid so that the polytopes stay small.
///
/// With `x_i` the support point at `e_i`, the body contains `conv{±x_i}`,
/// which contains the cube `|z|_∞ <= 1/S` for `S = Σ |(X^{-1})_{ij}|`. A point
/// `(1-δ)p + e` with `|e|_∞ <= δ/S` is then still inside the body, so rounding
/// `(1-δ)p` to a fine enough grid keeps the inner polytope inside. Offsets are
/// rounded up, which keeps the outer polytope outside.
pub fn symmetric_volume_bounds(body: &SupportBody, dirs: &[RVec], delta_bits: u32) -> Result<VolumeBounds> {
    if dirs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !positively_spanning(dirs)? {
        return Err(Error::DegenerateDirections);
    }
    let n = body.dim();
    let axes = (0..n).map(|i| body.eval(&RVec::unit(n, i)).map(|e| e.point)).collect::<Result<Vec<_>>>()?;
    let x = RMat::from_rows((0..n).map(|r| axes.iter().map(|p| p[r].clone()).collect()).collect())?;
    let inv = x.inverse().map_err(|_| Error::DegenerateDirections)?;
    let s: Rational = inv.rows().iter().flatten().map(|v| v.abs()).sum();
    let delta = Rational::new(1.into(), BigInt::one() << delta_bits);
    // Grid step 2^-g with 2^-(g+1) <= δ/S.
    let mut g = delta_bits;
    while Rational::new(1.into(), BigInt::one() << (g + 1)) * &s > delta {
        g += 1;
    }
    let shrink = Rational::one() - &delta;
    let evals = dirs.iter().map(|u| body.eval(u)).collect::<Result<Vec<_>>>()?;
    let points: Vec<RVec> = evals
        .iter()
        .map(|e| RVec::new(e.point.coords().iter().map(|c| round_nearest(&(c * &shrink), g)).collect()))
        .collect();
    let inner = Polytope::hull(&points)?;
    let halfspaces = dirs
        .iter()
        .zip(&evals)
        .map(|(u, e)| Halfspace::new(u.clone(), round_up(&e.value, g)))
        .collect::<Result<Vec<_>>>()?;
    let outer = polar_outer(&halfspaces, &RVec::zeros(n))?;
    Ok(VolumeBounds {
        lower: inner.volume(),
        upper: outer.volume(),
        inner,
        outer,
    })
}

fn round_nearest(r: &Rational, bits: u32) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << bits);
    ((r * &scale).round()) / scale
}

/// Intersection of halfspaces with `c` strictly inside each one, via the polar
/// of `conv{u_i / (h_i - <u_i, c>)}`.
pub fn polar_outer(halfspaces: &[Halfspace], c: &RVec) -> Result<Polytope> {
    let mut polar_pts = Vec::with_capacity(halfspaces.len());
    for h in halfspaces {
        let beta = -h.slack(c);
        if !beta.is_positive() {
            return Err(Error::InvalidArgument("reference point is not strictly inside".into()));
        }
        polar_pts.push(h.normal().scale(&beta.recip()));
    }
    let q = Polytope::hull(&polar_pts)?;
    if !q.is_full_dimensional() || q.facets().iter().any(|f| !f.halfspace.offset().is_positive()) {
        return Err(Error::DegenerateDirections);
    }
    let verts: Vec<RVec> = q
        .facets()
        .iter()
        .map(|f| c.add_scaled(&f.halfspace.offset().recip(), f.halfspace.normal()))
        .collect();
    Polytope::hull(&verts)
}

/// All vertices of a bounded halfspace intersection by brute force over
/// `n`-subsets. Exponential; meant for small inputs and as a test oracle.
pub fn halfspace_vertices(halfspaces: &[Halfspace]) -> Vec<RVec> {
    let Some(first) = halfspaces.first() else {
        return Vec::new();
    };
    let n = first.normal().dim();
    let m = halfspaces.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if m < n {
        return out;
    }
    loop {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| halfspaces[i].normal().coords().to_vec()).collect();
        let rhs: Vec<Rational> = idx.iter().map(|&i| halfspaces[i].offset().clone()).collect();
        if let Solution::Unique(x) = solve(&rows, &rhs, n) {
            if halfspaces.iter().all(|h| h.contains(&x)) {
                out.push(x);
            }
        }
        // Next combination in lexicographic order.
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                out.dedup();
                return out;
            }
            k -= 1;
            if idx[k] != k + m - n {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Directions that pin a polytope exactly: its facet normals plus, for each
/// vertex, the sum of its incident facet normals.
pub fn exact_directions(p: &Polytope) -> Vec<RVec> {
    let mut dirs: Vec<RVec> = p.facets().iter().map(|f| f.halfspace.normal().clone()).collect();
    for vi in 0..p.vertices().len() {
        let mut s = RVec::zeros(p.dim());
        for f in p.facets().iter().filter(|f| f.vertices.contains(&vi)) {
            s.add_assign(f.halfspace.normal());
        }
        if !s.is_zero() {
            dirs.push(s);
        }
    }
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(c: &[i64]) -> RVec {
        RVec::from_ints(c)
    }

    fn cube(lo: i64, hi: i64) -> Polytope {
        let mut pts = Vec::new();
        for m in 0..8usize {
            pts.push(v(&[0, 1, 2].map(|i| if m >> i & 1 == 1 { hi } else { lo })));
        }
        Polytope::hull(&pts).unwrap()
    }

    #[test]
    fn polytope_bounds_collapse() {
        let p = Polytope::hull(&[v(&[0, 0, 0]), v(&[2, 0, 0]), v(&[0, 3, 0]), v(&[1, 1, 4])]).unwrap();
        let b = volume_bounds(&SupportBody::from_polytope(p.clone()), &exact_directions(&p)).unwrap();
        assert_eq!(b.lower, p.volume());
        assert_eq!(b.upper, p.volume());
        assert_eq!(b.outer, p);
    }

    #[test]
    fn brute_force_matches_polar() {
        let hs: Vec<Halfspace> = [
            (v(&[1, 0, 0]), int(1)),
            (v(&[-1, 0, 0]), int(1)),
            (v(&[0, 1, 0]), int(2)),
            (v(&[0, -1, 0]), int(1)),
            (v(&[0, 0, 1]), frac(1, 2)),
            (v(&[0, 0, -1]), int(1)),
            (v(&[1, 1, 1]), int(2)),
        ]
        .into_iter()
        .map(|(n, b)| Halfspace::new(n, b).unwrap())
        .collect();
        let brute = Polytope::hull(&halfspace_vertices(&hs)).unwrap();
        let polar = polar_outer(&hs, &RVec::zeros(3)).unwrap();
        assert_eq!(brute, polar);
        assert_eq!(cube(-1, 1).volume(), int(8));
    }

    #[test]
    fn rounded_bounds_bracket_the_volume() {
        let c = cube(-1, 1);
        let body = SupportBody::moment_body(&c);
        let mut dirs = exact_directions(&c);
        dirs.push(v(&[1, 2, 3]));
        dirs.push(v(&[-1, -2, -3]));
        let exact = volume_bounds(&body, &dirs).unwrap();
        let rounded = symmetric_volume_bounds(&body, &dirs, 20).unwrap();
        assert!(rounded.lower <= exact.lower);
        assert!(rounded.upper >= exact.upper);
        let gap = (&exact.lower - &rounded.lower) / &exact.lower;
        assert!(gap < frac(1, 10000));
        for p in rounded.inner.vertices() {
            assert!(exact.outer.contains(p).unwrap());
        }
    }

    #[test]
    fn non_spanning_directions_rejected() {
        let body = SupportBody::from_polytope(cube(0, 1));
        let dirs = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert!(matches!(volume_bounds(&body, &dirs), Err(Error::DegenerateDirections)));
    }
}
