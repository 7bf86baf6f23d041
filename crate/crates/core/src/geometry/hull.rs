//! Incremental beneath-beyond convex hull for full-dimensional point sets.
//!
//! Points are held in integer homogeneous coordinates `(X, w)` with `x = X / w`
//! and `w > 0`, so orientation predicates reduce to exact integer dot products.
//! Facets are kept as a simplicial triangulation of the boundary; coplanar
//! simplices are merged into true facets at the end.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::rank;
use crate::rational::Rational;

/// A facet of the hull: `normal . x <= offset`, with integer data.
#[derive(Clone, Debug)]
pub(crate) struct HullFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Boundary simplices (each `d` input indices) that tile this facet.
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub(crate) struct HullResult {
    /// Indices of the extreme input points, ascending.
    pub vertices: Vec<usize>,
    pub facets: Vec<HullFacet>,
}

struct Homog {
    coords: Vec<BigInt>,
    w: BigInt,
}

fn homogenize(p: &[Rational]) -> Homog {
    let mut w = BigInt::one();
    for c in p {
        w = w.lcm(c.denom());
    }
    let coords = p.iter().map(|c| c.numer() * (&w / c.denom())).collect();
    Homog { coords, w }
}

struct Facet {
    verts: Vec<usize>,
    /// `plane[..d] . X - plane[d] * w`; positive means strictly outside.
    plane: Vec<BigInt>,
    outside: Vec<usize>,
    alive: bool,
}

fn side(plane: &[BigInt], p: &Homog) -> BigInt {
    let d = p.coords.len();
    let mut s = -(&plane[d] * &p.w);
    for (a, x) in plane[..d].iter().zip(&p.coords) {
        if !a.is_zero() && !x.is_zero() {
            s += a * x;
        }
    }
    s
}

/// Determinant of a small integer matrix by Bareiss elimination.
pub(crate) fn int_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Hyperplane through `d` homogeneous points, as a primitive integer vector
/// orthogonal to every `(X_i, -w_i)`.
fn plane_through(points: &[Homog], verts: &[usize]) -> Vec<BigInt> {
    let d = points[verts[0]].coords.len();
    let rows: Vec<Vec<BigInt>> = verts
        .iter()
        .map(|&v| {
            let mut r = points[v].coords.clone();
            r.push(points[v].w.clone());
            r
        })
        .collect();
    let mut pi = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != k)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let det = int_det(minor);
        pi.push(if k % 2 == 0 { det } else { -det });
    }
    // pi . (X, w) = 0 on the facet; store the offset with the opposite sign.
    let last = pi[d].clone();
    pi[d] = -last;
    let mut g = BigInt::zero();
    for c in &pi {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in pi.iter_mut() {
            *c /= &g;
        }
    }
    pi
}

fn ridges(verts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..verts.len()).map(move |skip| {
        verts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// Convex hull of distinct points spanning `R^d` (`d >= 2`).
pub(crate) fn convex_hull_full(points: &[Vec<Rational>], d: usize) -> HullResult {
    let homog: Vec<Homog> = points.iter().map(|p| homogenize(p)).collect();
    let all: Vec<usize> = (0..points.len()).collect();
    let first = triangulate(points, &homog, &all, d);
    let extreme = extreme_points(&first, d);
    let tri = if extreme.len() == first_vertex_count(&first) {
        first
    } else {
        triangulate(points, &homog, &extreme, d)
    };
    merge_facets(tri, d)
}

fn first_vertex_count(facets: &[Facet]) -> usize {
    let mut seen: Vec<usize> = facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn initial_simplex(points: &[Vec<Rational>], subset: &[usize], d: usize) -> Vec<usize> {
    let base = subset[0];
    let mut chosen = vec![base];
    let mut diffs: Vec<Vec<Rational>> = Vec::new();
    for &i in &subset[1..] {
        let diff: Vec<Rational> = points[i]
            .iter()
            .zip(&points[base])
            .map(|(a, b)| a - b)
            .collect();
        diffs.push(diff);
        if rank(&diffs) == diffs.len() {
            chosen.push(i);
            if chosen.len() == d + 1 {
                break;
            }
        } else {
            diffs.pop();
        }
    }
    assert_eq!(chosen.len(), d + 1, "point set is not full-dimensional");
    chosen
}

fn triangulate(points: &[Vec<Rational>], homog: &[Homog], subset: &[usize], d: usize) -> Vec<Facet> {
    let simplex = initial_simplex(points, subset, d);

    // Homogeneous interior reference: the sum of the simplex vertices over d+1.
    let mut centroid = vec![Rational::zero(); d];
    for &v in &simplex {
        for (c, x) in centroid.iter_mut().zip(&points[v]) {
            *c += x;
        }
    }
    let dp1 = Rational::from_integer(BigInt::from(d as u64 + 1));
    for c in centroid.iter_mut() {
        *c /= &dp1;
    }
    let interior = homogenize(&centroid);

    let mut facets: Vec<Facet> = Vec::new();
    let mut ridge_map: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();

    let make_facet = |verts: Vec<usize>| -> Facet {
        let mut plane = plane_through(homog, &verts);
        if side(&plane, &interior).is_positive() {
            for c in plane.iter_mut() {
                *c = -c.clone();
            }
        }
        Facet {
            verts,
            plane,
            outside: Vec::new(),
            alive: true,
        }
    };

    for skip in 0..=d {
        let mut verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        verts.sort_unstable();
        facets.push(make_facet(verts));
    }
    for (id, f) in facets.iter().enumerate() {
        for r in ridges(&f.verts) {
            ridge_map.entry(r).or_default().push(id);
        }
    }

    for &p in subset {
        if simplex.contains(&p) {
            continue;
        }
        if let Some(f) = facets.iter_mut().find(|f| side(&f.plane, &homog[p]).is_positive()) {
            f.outside.push(p);
        }
    }

    let mut stack: Vec<usize> = (0..facets.len()).filter(|&i| !facets[i].outside.is_empty()).collect();
    while let Some(fid) = stack.pop() {
        if !facets[fid].alive || facets[fid].outside.is_empty() {
            continue;
        }
        let apex = furthest(homog, &facets[fid]);

        let mut visible = vec![fid];
        let mut is_visible: HashMap<usize, bool> = HashMap::from([(fid, true)]);
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for r in ridges(&facets[f].verts) {
                for &g in &ridge_map[&r] {
                    if g == f || is_visible.contains_key(&g) {
                        continue;
                    }
                    let vis = side(&facets[g].plane, &homog[apex]).is_positive();
                    is_visible.insert(g, vis);
                    if vis {
                        visible.push(g);
                    }
                }
            }
        }

        let mut horizon = Vec::new();
        for &f in &visible {
            for r in ridges(&facets[f].verts) {
                let other = ridge_map[&r].iter().copied().find(|&g| g != f);
                if let Some(g) = other {
                    if !is_visible.get(&g).copied().unwrap_or(false) {
                        horizon.push(r);
                    }
                }
            }
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
            for r in ridges(&facets[f].verts) {
                if let Some(list) = ridge_map.get_mut(&r) {
                    list.retain(|&g| g != f);
                    if list.is_empty() {
                        ridge_map.remove(&r);
                    }
                }
            }
        }

        let first_new = facets.len();
        for r in horizon {
            let mut verts = r;
            verts.push(apex);
            verts.sort_unstable();
            facets.push(make_facet(verts));
        }
        for id in first_new..facets.len() {
            for r in ridges(&facets[id].verts) {
                ridge_map.entry(r).or_default().push(id);
            }
        }
        for p in orphans {
            if p == apex {
                continue;
            }
            if let Some(f) = facets[first_new..]
                .iter_mut()
                .find(|f| side(&f.plane, &homog[p]).is_positive())
            {
                f.outside.push(p);
            }
        }
        stack.extend((first_new..facets.len()).filter(|&i| !facets[i].outside.is_empty()));
    }

    facets.retain(|f| f.alive);
    facets
}

fn furthest(homog: &[Homog], facet: &Facet) -> usize {
    let mut best = facet.outside[0];
    let mut best_s = side(&facet.plane, &homog[best]);
    for &p in &facet.outside[1..] {
        let s = side(&facet.plane, &homog[p]);
        // Compare s / w_p against best_s / w_best.
        if &s * &homog[best].w > &best_s * &homog[p].w {
            best = p;
            best_s = s;
        }
    }
    best
}

/// Triangulation vertices whose incident facet normals span `R^d`.
fn extreme_points(facets: &[Facet], d: usize) -> Vec<usize> {
    let mut incident: BTreeMap<usize, Vec<Vec<BigInt>>> = BTreeMap::new();
    for f in facets {
        for &v in &f.verts {
            let normals = incident.entry(v).or_default();
            if !normals.contains(&f.plane) {
                normals.push(f.plane.clone());
            }
        }
    }
    incident
        .into_iter()
        .filter(|(_, planes)| {
            let rows: Vec<Vec<Rational>> = planes
                .iter()
                .map(|p| p[..d].iter().map(|c| Rational::from_integer(c.clone())).collect())
                .collect();
            rank(&rows) == d
        })
        .map(|(v, _)| v)
        .collect()
}

fn merge_facets(tri: Vec<Facet>, d: usize) -> HullResult {
    let mut groups: BTreeMap<Vec<BigInt>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut vertices = Vec::new();
    for f in tri {
        vertices.extend(f.verts.iter().copied());
        groups.entry(f.plane).or_default().push(f.verts);
    }
    vertices.sort_unstable();
    vertices.dedup();
    let facets = groups
        .into_iter()
        .map(|(plane, simplices)| HullFacet {
            normal: plane[..d].to_vec(),
            offset: plane[d].clone(),
            simplices,
        })
        .collect();
    HullResult { vertices, facets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn pts(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_known_determinants() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect()
        };
        assert_eq!(int_det(m(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]])), BigInt::from(5));
        assert_eq!(int_det(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(int_det(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn square_with_edge_midpoints_and_center() {
        let p = pts(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 0], &[2, 1], &[1, 1], &[0, 1]]);
        let h = convex_hull_full(&p, 2);
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
    }

    #[test]
    fn cube_has_six_facets_and_eight_vertices() {
        let mut p = Vec::new();
        for mask in 0..8i64 {
            p.push(vec![int(mask & 1), int(mask >> 1 & 1), int(mask >> 2 & 1)]);
        }
        p.push(vec![frac(1, 2), frac(1, 2), frac(1, 2)]);
        p.push(vec![frac(1, 2), frac(1, 2), int(1)]);
        let h = convex_hull_full(&p, 3);
        assert_eq!(h.vertices, (0..8).collect::<Vec<_>>());
        assert_eq!(h.facets.len(), 6);
        for f in &h.facets {
            assert_eq!(f.simplices.len(), 2);
        }
    }

    #[test]
    fn facet_planes_are_primitive_and_outward() {
        let p = pts(&[&[0, 0, 0], &[3, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        let h = convex_hull_full(&p, 3);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            let inner = f.normal.iter().fold(BigInt::zero(), |acc, c| acc + c);
            // The centroid (3/4, 3/4, 3/4) lies strictly inside.
            assert!(inner * BigInt::from(3) < &f.offset * BigInt::from(4));
        }
        assert!(h.facets.iter().any(|f| f.normal == vec![BigInt::from(1); 3] && f.offset == BigInt::from(3)));
    }
}
