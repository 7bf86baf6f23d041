//! Canonical polytopes: extreme points sorted lexicographically, with cached
//! facets, affine-hull equations and a fan triangulation.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hull::convex_hull_full;
use super::integrals;
use super::linalg::{nullspace, rref_in_place, RVec, RMat};
use crate::error::{check_dim, Error, Result};
use crate::rational::{int, Rational, RationalSum};

/// `{x : <normal, x> <= offset}` with a nonzero normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: RVec,
    offset: Rational,
}

impl Halfspace {
    pub fn new(normal: RVec, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroNormal);
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn normal(&self) -> &RVec {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// The opposite closed halfspace `{<normal, x> >= offset}`.
    pub fn complement(&self) -> Halfspace {
        Halfspace {
            normal: -&self.normal,
            offset: -self.offset.clone(),
        }
    }

    /// `<normal, x> - offset`; nonpositive inside.
    pub fn slack(&self, x: &RVec) -> Rational {
        self.normal.dot(x) - &self.offset
    }

    pub fn contains(&self, x: &RVec) -> bool {
        !self.slack(x).is_positive()
    }
}

/// A facet: its supporting halfspace and the indices of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub halfspace: Halfspace,
    pub vertices: Vec<usize>,
}

/// A simplex of the boundary triangulation, tagged with its facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCell {
    pub vertices: Vec<usize>,
    pub facet: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Integrals {
    pub volume: Rational,
    pub moment: RVec,
}

/// `conv{0, σ}` for a boundary simplex `σ`, counted with the sign of its facet offset.
#[derive(Clone, Debug)]
pub(crate) struct OriginCone {
    pub vertices: Vec<usize>,
    pub positive: bool,
    pub moment: RVec,
    /// `moment * denominator` as integers, for fast exact summation.
    pub scaled_moment: Vec<BigInt>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct OriginCones {
    pub cones: Vec<OriginCone>,
    /// Common denominator of all cone moments.
    pub denominator: BigInt,
}

/// A nonempty compact convex polytope in `R^n`.
#[derive(Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RVec>,
    intrinsic_dim: usize,
    facets: Vec<Facet>,
    equations: Vec<(RVec, Rational)>,
    boundary: Vec<BoundaryCell>,
    cells: Vec<Vec<usize>>,
    integrals: OnceLock<Integrals>,
    cones: OnceLock<OriginCones>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("intrinsic_dim", &self.intrinsic_dim)
            .field("vertices", &self.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

impl Polytope {
    /// Convex hull of a nonempty point list.
    pub fn hull(points: &[RVec]) -> Result<Polytope> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.dim();
        if n == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be at least 1".into()));
        }
        for p in points {
            check_dim(n, p.dim())?;
        }
        let mut pts: Vec<RVec> = points.to_vec();
        pts.sort();
        pts.dedup();

        let base = pts[0].clone();
        let mut diffs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| (p - &base).into_coords()).collect();
        let equations: Vec<(RVec, Rational)> = nullspace(&diffs, n)
            .into_iter()
            .map(|a| {
                let b = a.dot(&base);
                (a, b)
            })
            .collect();
        let (d, pivots) = rref_in_place(&mut diffs, n);

        match d {
            0 => Ok(Self::assemble(n, pts, 0, Vec::new(), equations, Vec::new(), vec![vec![0]])),
            1 => {
                let j = pivots[0];
                let lo = pts.iter().min_by(|a, b| a[j].cmp(&b[j])).unwrap().clone();
                let hi = pts.iter().max_by(|a, b| a[j].cmp(&b[j])).unwrap().clone();
                let (lo_c, hi_c) = (lo[j].clone(), hi[j].clone());
                let mut verts = vec![lo, hi];
                verts.sort();
                let e = RVec::unit(n, j);
                let facets = vec![
                    Facet { halfspace: Halfspace { normal: -&e, offset: -lo_c }, vertices: vec![] },
                    Facet { halfspace: Halfspace { normal: e, offset: hi_c }, vertices: vec![] },
                ];
                let mut poly = Self::assemble(n, verts, 1, facets, equations, Vec::new(), vec![vec![0, 1]]);
                // Attach each endpoint to the facet it attains.
                for fi in 0..2 {
                    let idx = (0..2)
                        .find(|&v| poly.facets[fi].halfspace.slack(&poly.vertices[v]).is_zero())
                        .unwrap();
                    poly.facets[fi].vertices = vec![idx];
                    poly.boundary.push(BoundaryCell { vertices: vec![idx], facet: fi });
                }
                Ok(poly)
            }
            _ => {
                let projected: Vec<Vec<Rational>> = pts
                    .iter()
                    .map(|p| pivots.iter().map(|&j| p[j].clone()).collect())
                    .collect();
                let res = convex_hull_full(&projected, d);
                let verts: Vec<RVec> = res.vertices.iter().map(|&i| pts[i].clone()).collect();
                // Input indices are sorted already, so the order stays lexicographic.
                let index_of = |i: usize| res.vertices.binary_search(&i).expect("hull vertex");
                let mut facets = Vec::with_capacity(res.facets.len());
                let mut boundary = Vec::new();
                for (fid, f) in res.facets.iter().enumerate() {
                    let mut normal = vec![Rational::zero(); n];
                    for (k, &j) in pivots.iter().enumerate() {
                        normal[j] = Rational::from_integer(f.normal[k].clone());
                    }
                    let mut fverts: Vec<usize> = Vec::new();
                    for s in &f.simplices {
                        let cell: Vec<usize> = s.iter().map(|&i| index_of(i)).collect();
                        fverts.extend(cell.iter().copied());
                        boundary.push(BoundaryCell { vertices: cell, facet: fid });
                    }
                    fverts.sort_unstable();
                    fverts.dedup();
                    facets.push(Facet {
                        halfspace: Halfspace {
                            normal: RVec::new(normal),
                            offset: Rational::from_integer(f.offset.clone()),
                        },
                        vertices: fverts,
                    });
                }
                let cells = boundary
                    .iter()
                    .filter(|b| !facets[b.facet].vertices.contains(&0))
                    .map(|b| {
                        let mut c = vec![0];
                        c.extend(b.vertices.iter().copied());
                        c
                    })
                    .collect();
                Ok(Self::assemble(n, verts, d, facets, equations, boundary, cells))
            }
        }
    }

    fn assemble(
        dim: usize,
        vertices: Vec<RVec>,
        intrinsic_dim: usize,
        facets: Vec<Facet>,
        equations: Vec<(RVec, Rational)>,
        boundary: Vec<BoundaryCell>,
        cells: Vec<Vec<usize>>,
    ) -> Polytope {
        Polytope {
            dim,
            vertices,
            intrinsic_dim,
            facets,
            equations,
            boundary,
            cells,
            integrals: OnceLock::new(),
            cones: OnceLock::new(),
        }
    }

    pub fn point(p: RVec) -> Polytope {
        Self::hull(&[p]).expect("single point")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.intrinsic_dim == self.dim
    }

    /// Facets relative to the affine hull (for full-dimensional bodies, the true facets).
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations `<a, x> = b` cutting out the affine hull.
    pub fn equations(&self) -> &[(RVec, Rational)] {
        &self.equations
    }

    pub fn boundary_cells(&self) -> &[BoundaryCell] {
        &self.boundary
    }

    /// Fan triangulation from the lexicographically smallest vertex into
    /// simplices of the intrinsic dimension.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// All vertex pairs that share a boundary simplex; a superset of the edges.
    pub(crate) fn edge_candidates(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        match self.intrinsic_dim {
            0 => {}
            1 => edges.push((0, 1)),
            _ => {
                for b in &self.boundary {
                    for (k, &i) in b.vertices.iter().enumerate() {
                        for &j in &b.vertices[k + 1..] {
                            edges.push((i.min(j), i.max(j)));
                        }
                    }
                }
                edges.sort_unstable();
                edges.dedup();
            }
        }
        edges
    }

    /// `P ∩ H`, or `None` when the intersection is empty.
    pub fn clip(&self, h: &Halfspace) -> Result<Option<Polytope>> {
        check_dim(self.dim, h.normal.dim())?;
        let slack: Vec<Rational> = self.vertices.iter().map(|v| h.slack(v)).collect();
        let mut pts: Vec<RVec> = self
            .vertices
            .iter()
            .zip(&slack)
            .filter(|(_, s)| !s.is_positive())
            .map(|(v, _)| v.clone())
            .collect();
        if pts.is_empty() {
            return Ok(None);
        }
        if pts.len() == self.vertices.len() {
            return Ok(Some(self.clone()));
        }
        pts.extend(self.crossings(&slack));
        Polytope::hull(&pts).map(Some)
    }

    /// `P ∩ {<normal, x> = offset}`, or `None` when empty.
    pub fn slice(&self, h: &Halfspace) -> Result<Option<Polytope>> {
        check_dim(self.dim, h.normal.dim())?;
        let slack: Vec<Rational> = self.vertices.iter().map(|v| h.slack(v)).collect();
        let mut pts: Vec<RVec> = self
            .vertices
            .iter()
            .zip(&slack)
            .filter(|(_, s)| s.is_zero())
            .map(|(v, _)| v.clone())
            .collect();
        pts.extend(self.crossings(&slack));
        if pts.is_empty() {
            return Ok(None);
        }
        Polytope::hull(&pts).map(Some)
    }

    fn crossings(&self, slack: &[Rational]) -> Vec<RVec> {
        let mut out = Vec::new();
        for (i, j) in self.edge_candidates() {
            let (si, sj) = (&slack[i], &slack[j]);
            if (si.is_negative() && sj.is_positive()) || (si.is_positive() && sj.is_negative()) {
                let t = si / (si - sj);
                let d = &self.vertices[j] - &self.vertices[i];
                out.push(self.vertices[i].add_scaled(&t, &d));
            }
        }
        out
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        check_dim(self.dim, other.dim)?;
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a + b);
            }
        }
        Polytope::hull(&pts)
    }

    pub fn negate(&self) -> Polytope {
        let pts: Vec<RVec> = self.vertices.iter().map(|v| -v).collect();
        Polytope::hull(&pts).expect("nonempty")
    }

    pub fn translate(&self, t: &RVec) -> Result<Polytope> {
        check_dim(self.dim, t.dim())?;
        let pts: Vec<RVec> = self.vertices.iter().map(|v| v + t).collect();
        Polytope::hull(&pts)
    }

    pub fn scale(&self, s: &Rational) -> Polytope {
        let pts: Vec<RVec> = self.vertices.iter().map(|v| v.scale(s)).collect();
        Polytope::hull(&pts).expect("nonempty")
    }

    /// Vertex-wise image `phi P`; singular maps are allowed and may merge vertices.
    pub fn apply_linear(&self, phi: &RMat) -> Result<Polytope> {
        check_dim(self.dim, phi.dim())?;
        let pts: Vec<RVec> = self.vertices.iter().map(|v| phi.mul_vec(v)).collect();
        Polytope::hull(&pts)
    }

    /// `conv(P ∪ {0})`.
    pub fn o_hull(&self) -> Polytope {
        let mut pts = self.vertices.clone();
        pts.push(RVec::zeros(self.dim));
        Polytope::hull(&pts).expect("nonempty")
    }

    /// `h(P, u) = max <u, v>` over the vertices.
    pub fn support_value(&self, u: &RVec) -> Result<Rational> {
        Ok(self.support(u)?.0)
    }

    /// Support value together with the first vertex attaining it.
    pub fn support(&self, u: &RVec) -> Result<(Rational, RVec)> {
        check_dim(self.dim, u.dim())?;
        let mut best = 0;
        let mut best_v = u.dot(&self.vertices[0]);
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            let s = u.dot(v);
            if s > best_v {
                best = i;
                best_v = s;
            }
        }
        Ok((best_v, self.vertices[best].clone()))
    }

    pub fn volume(&self) -> Rational {
        self.integrals().volume.clone()
    }

    /// `∫_P x dx`.
    pub fn moment_vector(&self) -> RVec {
        self.integrals().moment.clone()
    }

    pub(crate) fn integrals(&self) -> &Integrals {
        self.integrals.get_or_init(|| {
            if self.intrinsic_dim < self.dim {
                return Integrals {
                    volume: Rational::zero(),
                    moment: RVec::zeros(self.dim),
                };
            }
            let mut volume = RationalSum::new();
            let mut moment = vec![RationalSum::new(); self.dim];
            for c in &self.cells {
                let verts: Vec<&RVec> = c.iter().map(|&i| &self.vertices[i]).collect();
                let vol = integrals::simplex_volume(&verts);
                let m = integrals::simplex_moment(&verts, &vol);
                for (acc, x) in moment.iter_mut().zip(m.coords()) {
                    acc.add(x);
                }
                volume.add(&vol);
            }
            Integrals {
                volume: volume.finish(),
                moment: RVec::new(moment.into_iter().map(RationalSum::finish).collect()),
            }
        })
    }

    /// Signed decomposition `1_P = Σ ± 1_{conv{0, σ}}` over boundary simplices,
    /// valid almost everywhere; empty unless full-dimensional.
    pub(crate) fn origin_cones(&self) -> &OriginCones {
        self.cones.get_or_init(|| {
            if self.intrinsic_dim < self.dim {
                return OriginCones { cones: Vec::new(), denominator: BigInt::one() };
            }
            let zero = RVec::zeros(self.dim);
            let mut cones = Vec::new();
            let mut denominator = BigInt::one();
            for b in &self.boundary {
                let offset = self.facets[b.facet].halfspace.offset();
                if offset.is_zero() {
                    continue;
                }
                let mut verts: Vec<&RVec> = vec![&zero];
                verts.extend(b.vertices.iter().map(|&i| &self.vertices[i]));
                let volume = integrals::simplex_volume(&verts);
                let moment = integrals::simplex_moment(&verts, &volume);
                for c in moment.coords() {
                    denominator = denominator.lcm(c.denom());
                }
                cones.push(OriginCone {
                    vertices: b.vertices.clone(),
                    positive: offset.is_positive(),
                    moment,
                    scaled_moment: Vec::new(),
                });
            }
            for c in &mut cones {
                c.scaled_moment = c
                    .moment
                    .coords()
                    .iter()
                    .map(|x| x.numer() * (&denominator / x.denom()))
                    .collect();
            }
            OriginCones { cones, denominator }
        })
    }

    /// Orthogonal projection onto the line spanned by `u`.
    pub fn project_onto_line(&self, u: &RVec) -> Result<Polytope> {
        check_dim(self.dim, u.dim())?;
        if u.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let uu = u.dot(u);
        let ts: Vec<Rational> = self.vertices.iter().map(|v| u.dot(v) / &uu).collect();
        let lo = ts.iter().min().unwrap();
        let hi = ts.iter().max().unwrap();
        Polytope::hull(&[u.scale(lo), u.scale(hi)])
    }

    pub fn contains(&self, x: &RVec) -> Result<bool> {
        check_dim(self.dim, x.dim())?;
        if self.intrinsic_dim == 0 {
            return Ok(&self.vertices[0] == x);
        }
        if self.equations.iter().any(|(a, b)| &a.dot(x) != b) {
            return Ok(false);
        }
        Ok(self.facets.iter().all(|f| f.halfspace.contains(x)))
    }

    /// True when `x` lies in the linear span of the vertices.
    pub fn span_contains(&self, x: &RVec) -> Result<bool> {
        check_dim(self.dim, x.dim())?;
        let rows: Vec<Vec<Rational>> = self.vertices.iter().map(|v| v.coords().to_vec()).collect();
        let complement = nullspace(&rows, self.dim);
        Ok(complement.iter().all(|a| a.dot(x).is_zero()))
    }

    /// Vertex average; an interior point relative to the affine hull.
    pub fn vertex_centroid(&self) -> RVec {
        let mut c = RVec::zeros(self.dim);
        for v in &self.vertices {
            c.add_assign(v);
        }
        c.scale(&(Rational::one() / int(self.vertices.len() as i64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

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

    fn facet_simplex() -> Polytope {
        Polytope::hull(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap()
    }

    #[test]
    fn hull_drops_interior_point() {
        let p = Polytope::hull(&[
            v(&[0, 0, 0]),
            v(&[1, 0, 0]),
            v(&[0, 1, 0]),
            v(&[0, 0, 1]),
            RVec::new(vec![frac(1, 4), frac(1, 4), frac(1, 4)]),
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.volume(), frac(1, 6));
        assert_eq!(p.moment_vector(), RVec::new(vec![frac(1, 24); 3]));
    }

    #[test]
    fn collinear_and_single_points() {
        let seg = Polytope::hull(&[v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[2, 0, 0])]).unwrap();
        assert_eq!(seg.vertices(), &[v(&[0, 0, 0]), v(&[2, 0, 0])]);
        assert_eq!(seg.intrinsic_dim(), 1);
        let pt = Polytope::hull(&[v(&[1, 1, 1])]).unwrap();
        assert_eq!(pt.intrinsic_dim(), 0);
        assert_eq!(pt.volume(), int(0));
        assert!(pt.contains(&v(&[1, 1, 1])).unwrap());
    }

    #[test]
    fn hull_errors() {
        assert_eq!(Polytope::hull(&[]), Err(Error::EmptyInput));
        assert_eq!(
            Polytope::hull(&[v(&[0, 0]), v(&[0, 0, 0])]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn clip_cube_in_half() {
        let cube = unit_cube();
        let h = Halfspace::new(v(&[1, 0, 0]), frac(1, 2)).unwrap();
        let half = cube.clip(&h).unwrap().unwrap();
        assert_eq!(half.volume(), frac(1, 2));
        assert_eq!(half.vertices().len(), 8);
        let away = Halfspace::new(v(&[1, 0, 0]), int(-1)).unwrap();
        assert!(cube.clip(&away).unwrap().is_none());
        assert_eq!(Halfspace::new(v(&[0, 0, 0]), int(0)), Err(Error::ZeroNormal));
    }

    #[test]
    fn clip_lower_dimensional_simplex() {
        let s = facet_simplex();
        let h = Halfspace::new(RVec::new(vec![frac(1, 2), frac(-1, 2), int(0)]), int(0)).unwrap();
        let piece = s.clip(&h).unwrap().unwrap();
        let expected = Polytope::hull(&[
            RVec::new(vec![frac(1, 2), frac(1, 2), int(0)]),
            v(&[0, 1, 0]),
            v(&[0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(piece, expected);
        let cut = s.slice(&h).unwrap().unwrap();
        assert_eq!(cut.intrinsic_dim(), 1);
    }

    #[test]
    fn sums_and_images() {
        let cube = unit_cube();
        let diff = cube.minkowski_sum(&cube.negate()).unwrap();
        assert_eq!(diff.volume(), int(8));
        assert_eq!(diff.vertices().len(), 8);
        let a = Polytope::hull(&[v(&[0, 0, 0]), v(&[1, 0, 0])]).unwrap();
        let b = Polytope::hull(&[v(&[0, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let sq = a.minkowski_sum(&b).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.intrinsic_dim(), 2);
        assert_eq!(cube.apply_linear(&RMat::identity(3)).unwrap(), cube);
    }

    #[test]
    fn support_and_projection() {
        let cube = unit_cube();
        assert_eq!(cube.support_value(&v(&[1, 1, 1])).unwrap(), int(3));
        let s = facet_simplex();
        assert_eq!(s.support_value(&v(&[1, 1, 0])).unwrap(), int(1));
        let seg = Polytope::hull(&[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let y = v(&[-1, 1, 0]);
        let py = seg.project_onto_line(&y).unwrap();
        assert_eq!(py.vertices(), &[y.scale(&frac(1, 2)), y.scale(&frac(-1, 2))]);
        let x = v(&[1, 1, 0]);
        let px = seg.project_onto_line(&x).unwrap();
        assert_eq!(px.vertices(), &[x.scale(&frac(1, 2))]);
        let flat = s.project_onto_line(&v(&[0, 0, 1])).unwrap();
        assert_eq!(flat.vertices(), &[v(&[0, 0, 0]), v(&[0, 0, 1])]);
        assert_eq!(s.project_onto_line(&v(&[0, 0, 0])), Err(Error::ZeroDirection));
    }

    #[test]
    fn membership() {
        let cube = unit_cube();
        assert!(cube.contains(&RVec::new(vec![frac(1, 2); 3])).unwrap());
        assert!(!cube.contains(&v(&[2, 0, 0])).unwrap());
        let s = facet_simplex();
        assert!(s.contains(&RVec::new(vec![frac(1, 3); 3])).unwrap());
        assert!(!s.contains(&RVec::new(vec![frac(1, 4); 3])).unwrap());
        let permuted = Polytope::hull(&[v(&[0, 0, 1]), v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(permuted, s);
    }

    #[test]
    fn span_membership() {
        let s = Polytope::hull(&[v(&[1, 0, 0]), v(&[1, 1, 0])]).unwrap();
        assert!(s.span_contains(&v(&[0, 5, 0])).unwrap());
        assert!(!s.span_contains(&v(&[0, 0, 1])).unwrap());
    }
}
