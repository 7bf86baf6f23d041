//! Exact integrals over simplices: volumes, moments, the moment-body
//! support function and facet vector areas.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use num_integer::Integer;

use super::hull::int_det;
use super::linalg::{determinant, RVec};
use super::polytope::Polytope;
use crate::rational::{int, Rational};

pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Unsigned volume of the simplex with `n + 1` vertices in `R^n`.
pub fn simplex_volume(verts: &[&RVec]) -> Rational {
    let n = verts[0].dim();
    let rows: Vec<Vec<Rational>> = verts[1..]
        .iter()
        .map(|v| (*v - verts[0]).into_coords())
        .collect();
    determinant(&rows).abs() / factorial(n)
}

/// `∫ x dx` over a simplex of known volume.
pub fn simplex_moment(verts: &[&RVec], volume: &Rational) -> RVec {
    let mut sum = RVec::zeros(verts[0].dim());
    for v in verts {
        sum.add_assign(v);
    }
    sum.scale(&(volume / int(verts.len() as i64)))
}

/// Generalized cross product `c` of `n - 1` vectors in `R^n`, characterised by
/// `<c, x> = det[v_1; ...; v_{n-1}; x]`.
pub fn cross(vectors: &[RVec]) -> RVec {
    let n = vectors.len() + 1;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let minor: Vec<Vec<Rational>> = vectors
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != k)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let det = if minor.is_empty() { Rational::one() } else { determinant(&minor) };
        out.push(if (n - 1 + k) % 2 == 0 { det } else { -det });
    }
    RVec::new(out)
}

#[derive(Clone, Copy)]
enum Vertex {
    Orig(usize),
    /// Where the edge from a positive to a negative vertex meets `<u, y> = 0`.
    Edge(usize, usize),
}

/// Splits a simplex along `<u, y> = 0` into simplices on either side and
/// collects those with a positive vertex.
fn positive_pieces(verts: Vec<Vertex>, sign: &[i8], out: &mut Vec<Vec<Vertex>>) {
    let s = |v: &Vertex| match v {
        Vertex::Orig(i) => sign[*i],
        Vertex::Edge(..) => 0,
    };
    let pos = verts.iter().position(|v| s(v) > 0);
    let neg = verts.iter().position(|v| s(v) < 0);
    match (pos, neg) {
        (None, _) => {}
        (Some(_), None) => out.push(verts),
        (Some(p), Some(q)) => {
            let (Vertex::Orig(i), Vertex::Orig(j)) = (verts[p], verts[q]) else { unreachable!() };
            let x = Vertex::Edge(i, j);
            let mut near_p = verts.clone();
            near_p[q] = x;
            let mut near_q = verts;
            near_q[p] = x;
            positive_pieces(near_p, sign, out);
            positive_pieces(near_q, sign, out);
        }
    }
}

/// Sum of fractions over denominators drawn from a small set; the common
/// denominator is kept as an lcm and nothing is reduced until the end.
struct LcmSum {
    num: Vec<BigInt>,
    den: BigInt,
}

impl LcmSum {
    fn new(dim: usize) -> Self {
        LcmSum { num: vec![BigInt::zero(); dim], den: BigInt::one() }
    }

    fn add(&mut self, num: &[BigInt], den: &BigInt) {
        let g = self.den.gcd(den);
        let grow = den / &g;
        if !grow.is_one() {
            for a in &mut self.num {
                *a *= &grow;
            }
            self.den *= &grow;
        }
        let mul = &self.den / den;
        for (a, x) in self.num.iter_mut().zip(num) {
            *a += x * &mul;
        }
    }
}

/// Adds `(n+1)! d^{n+1} ∫ y dy` over `conv{0, σ} ∩ {<u, y> >= 0}` to `acc`,
/// where `vs` are the vertices scaled by `d` to integers, `ls` the matching
/// integer values of `<u, .>`, and the last entry of both is the origin.
fn add_positive_moment(simplex: &[usize], vs: &[Vec<BigInt>], ls: &[BigInt], acc: &mut LcmSum) {
    let dim = acc.num.len();
    let sign: Vec<i8> = ls.iter().map(|l| if l.is_positive() { 1 } else if l.is_negative() { -1 } else { 0 }).collect();
    let mut pieces = Vec::new();
    positive_pieces(simplex.iter().map(|&i| Vertex::Orig(i)).collect(), &sign, &mut pieces);
    let homog = |v: &Vertex| -> (BigInt, Vec<BigInt>) {
        match *v {
            Vertex::Orig(i) => (BigInt::one(), vs[i].clone()),
            Vertex::Edge(p, q) => {
                let x = vs[q].iter().zip(&vs[p]).map(|(a, b)| &ls[p] * a - &ls[q] * b).collect();
                (&ls[p] - &ls[q], x)
            }
        }
    };
    for piece in &pieces {
        let hs: Vec<(BigInt, Vec<BigInt>)> = piece.iter().map(homog).collect();
        let rows: Vec<Vec<BigInt>> = hs
            .iter()
            .map(|(w, x)| std::iter::once(w.clone()).chain(x.iter().cloned()).collect())
            .collect();
        let det = int_det(rows).abs();
        // vol = det / (n! Π w), moment = vol / (n+1) Σ X_i / w_i.
        let wprod = hs.iter().fold(BigInt::one(), |acc, (w, _)| acc * w);
        let mut sum = vec![BigInt::zero(); dim];
        for (w, x) in &hs {
            let others = &wprod / w;
            for (s, xi) in sum.iter_mut().zip(x) {
                *s += xi * &others;
            }
        }
        for s in &mut sum {
            *s *= &det;
        }
        acc.add(&sum, &(&wprod * &wprod));
    }
}

/// `m(K ∩ {<u,y> >= 0}) - m(K ∩ {<u,y> <= 0})`, the gradient of `h(MK, .)` at `u`.
/// Zero when `K` is not full-dimensional.
pub fn moment_body_point(k: &Polytope, u: &RVec) -> RVec {
    let n = k.dim();
    let cones = k.origin_cones();
    if cones.cones.is_empty() {
        return RVec::zeros(n);
    }
    // Cones on one side contribute their precomputed moments; split cones are
    // integrated piecewise on a common integer scale.
    let verts = k.vertices();
    let lcm_of = |xs: &mut dyn Iterator<Item = &Rational>| xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let d = lcm_of(&mut verts.iter().flat_map(|p| p.coords()));
    let ud = lcm_of(&mut u.coords().iter());
    let to_int = |v: &RVec, s: &BigInt| -> Vec<BigInt> { v.coords().iter().map(|x| x.numer() * (s / x.denom())).collect() };
    let mut vs: Vec<Vec<BigInt>> = verts.iter().map(|v| to_int(v, &d)).collect();
    vs.push(vec![BigInt::zero(); n]);
    let ui = to_int(u, &ud);
    let ls: Vec<BigInt> = vs.iter().map(|v| v.iter().zip(&ui).map(|(a, b)| a * b).sum()).collect();
    let origin = verts.len();

    let mut whole = vec![BigInt::zero(); n];
    let mut split = LcmSum::new(n);
    let mut split_neg = LcmSum::new(n);
    let mut simplex = Vec::with_capacity(n + 1);
    for cone in &cones.cones {
        let any_pos = cone.vertices.iter().any(|&i| ls[i].is_positive());
        let any_neg = cone.vertices.iter().any(|&i| ls[i].is_negative());
        let upper = match (any_pos, any_neg) {
            (_, false) => Some(true),
            (false, true) => Some(false),
            (true, true) => None,
        };
        match upper {
            Some(up) => {
                for (w, c) in whole.iter_mut().zip(&cone.scaled_moment) {
                    if up == cone.positive {
                        *w += c;
                    } else {
                        *w -= c;
                    }
                }
            }
            None => {
                // 2 m(cone⁺) - m(cone)
                for (w, c) in whole.iter_mut().zip(&cone.scaled_moment) {
                    if cone.positive {
                        *w -= c;
                    } else {
                        *w += c;
                    }
                }
                simplex.clear();
                simplex.push(origin);
                simplex.extend_from_slice(&cone.vertices);
                let acc = if cone.positive { &mut split } else { &mut split_neg };
                add_positive_moment(&simplex, &vs, &ls, acc);
            }
        }
    }
    // split / ((n+1)! d^{n+1}) counted twice, plus whole / denominator.
    let scale = BigInt::from((1..=n as u64 + 1).product::<u64>()) * num_traits::pow(d, n + 1);
    let neg: Vec<BigInt> = split_neg.num.iter().map(|x| -x).collect();
    split.add(&neg, &split_neg.den);
    let split_den = &split.den * &scale;
    let g = split_den.gcd(&cones.denominator);
    let lcm = &split_den / &g * &cones.denominator;
    let (ms, mw) = (&lcm / &split_den * 2, &lcm / &cones.denominator);
    let coords = split
        .num
        .iter()
        .zip(&whole)
        .map(|(s, w)| Rational::new(s * &ms + w * &mw, lcm.clone()))
        .collect();
    RVec::new(coords)
}

/// Outward vector areas of the facets of a full-dimensional polytope.
pub fn facet_vector_areas(k: &Polytope) -> Vec<RVec> {
    let n = k.dim();
    let scale = Rational::one() / factorial(n - 1);
    let mut areas = vec![RVec::zeros(n); k.facets().len()];
    for b in k.boundary_cells() {
        let v0 = &k.vertices()[b.vertices[0]];
        let edges: Vec<RVec> = b.vertices[1..].iter().map(|&i| &k.vertices()[i] - v0).collect();
        let mut c = cross(&edges);
        if c.dot(k.facets()[b.facet].halfspace.normal()).is_negative() {
            c = -&c;
        }
        areas[b.facet].add_assign(&c.scale(&scale));
    }
    areas
}

/// Vector area of a polytope of intrinsic dimension `n - 1`, oriented along
/// the normal of its affine hull.
pub fn flat_vector_area(k: &Polytope) -> RVec {
    let n = k.dim();
    let normal = &k.equations()[0].0;
    let scale = Rational::one() / factorial(n - 1);
    let mut area = RVec::zeros(n);
    for cell in k.cells() {
        let v0 = &k.vertices()[cell[0]];
        let edges: Vec<RVec> = cell[1..].iter().map(|&i| &k.vertices()[i] - v0).collect();
        let mut c = cross(&edges);
        if c.dot(normal).is_negative() {
            c = -&c;
        }
        area.add_assign(&c.scale(&scale));
    }
    area
}
