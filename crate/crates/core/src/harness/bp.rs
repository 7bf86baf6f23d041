//! Certified sandwich check of `vol(MK) vol(B)^{n+1} >= vol(MB) vol(K)^{n+1}`.
//!
//! The ball is replaced by `B_in`, the hull of dyadic points just inside the
//! unit sphere, and `B_out = s B_in` with `s` a rational upper bound for the
//! inverse inradius of `B_in`. Volumes of moment bodies are bracketed by
//! `volume_bounds` over a symmetric direction set. The verdict is `pass` only
//! if the lower bound of the left side beats the upper bound of the right.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::report::{CheckReport, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, RMat, RVec};
use crate::rational::{pow, round_up, to_f64, Rational};
use crate::valuation::{symmetric_volume_bounds, SupportBody, VolumeBounds};

#[derive(Clone, Debug, Serialize)]
pub struct BpConfig {
    /// Total number of directions; used in `±u` pairs.
    pub directions: usize,
    /// Number of points spanning `B_in`.
    pub ball_points: usize,
    /// Ball points lie on a `2^-ball_bits` grid, directions on a `2^-bits` grid.
    pub ball_bits: u32,
    pub bits: u32,
    /// Rounding slack `2^-delta_bits` for the certified volume bounds.
    pub delta_bits: u32,
    pub seed: u64,
    /// Apply a rational near-isotropic linear map to `K` first; the tested
    /// ratio is invariant under linear maps.
    pub precondition: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            directions: 300,
            ball_points: 4000,
            ball_bits: 16,
            bits: 12,
            delta_bits: 24,
            seed: 0,
            precondition: true,
        }
    }
}

fn grid_rational(x: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    Rational::new(BigInt::from((x * scale).round() as i64), BigInt::from(1u64 << bits))
}

/// A point of the closed unit ball on the `2^-bits` grid, close to the unit
/// vector along `target`.
pub fn ball_point(target: &[f64], bits: u32) -> RVec {
    let norm = target.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut shrink = 1.0;
    loop {
        let p = RVec::new(target.iter().map(|x| grid_rational(x / norm * shrink, bits)).collect());
        if p.dot(&p) <= Rational::one() {
            return p;
        }
        shrink -= (0.5f64).powi(bits as i32 - 1);
    }
}

/// A nonzero grid vector along `target`.
pub fn grid_direction(target: &[f64], bits: u32) -> RVec {
    let norm = target.iter().map(|x| x * x).sum::<f64>().sqrt();
    RVec::new(target.iter().map(|x| grid_rational(x / norm, bits)).collect())
}

/// Quasi-uniform unit vectors: a Fibonacci lattice for `n = 3`, seeded
/// Gaussian samples otherwise.
pub fn sphere_targets(n: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    if n == 3 {
        let golden = PI * (3.0 - 5f64.sqrt());
        return (0..count)
            .map(|k| {
                let z = 1.0 - (2 * k + 1) as f64 / count as f64;
                let r = (1.0 - z * z).sqrt();
                let th = golden * k as f64;
                vec![r * th.cos(), r * th.sin(), z]
            })
            .collect();
    }
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let (a, b): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
                    (-2.0 * a.ln()).sqrt() * (2.0 * PI * b).cos()
                })
                .collect()
        })
        .collect()
}

/// `count` directions in `±u` pairs: the first half, then its negatives.
pub fn symmetric_directions(n: usize, count: usize, bits: u32, rng: &mut impl Rng) -> Vec<RVec> {
    let half = (count / 2).max(n);
    let targets = sphere_targets(n, 2 * half, rng);
    let mut first: Vec<RVec> = Vec::with_capacity(half);
    for t in targets {
        if first.len() == half {
            break;
        }
        let p = grid_direction(&t, bits);
        let neg = -&p;
        if !p.is_zero() && !first.contains(&p) && !first.contains(&neg) {
            first.push(p);
        }
    }
    let mut dirs = first.clone();
    dirs.extend(first.iter().map(|u| -u));
    dirs
}

/// Evaluates an origin-symmetric body on the first half of a symmetric
/// direction set in parallel and answers the other half by reflection.
pub fn symmetric_memo(body: &SupportBody, dirs: &[RVec]) -> Result<SupportBody> {
    let half = dirs.len() / 2;
    let points: Vec<RVec> = dirs[..half]
        .par_iter()
        .map(|u| body.eval(u).map(|sp| sp.point))
        .collect::<Result<_>>()?;
    let mut table = HashMap::with_capacity(dirs.len());
    for (u, p) in dirs[..half].iter().zip(points) {
        table.insert(-u, -&p);
        table.insert(u.clone(), p);
    }
    let table = Arc::new(table);
    let inner = body.clone();
    Ok(SupportBody::from_oracle(body.dim(), body.kind(), move |u| match table.get(u) {
        Some(p) => p.clone(),
        None => inner.eval(u).expect("direction checked").point,
    }))
}

fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// A rational approximation of `L^{-1}` where `L L^t` is the vertex second
/// moment matrix about the origin.
pub fn isotropic_map(k: &Polytope, bits: u32) -> Option<RMat> {
    let n = k.dim();
    let verts: Vec<Vec<f64>> = k.vertices().iter().map(|v| v.coords().iter().map(to_f64).collect()).collect();
    let mut s = vec![vec![0.0; n]; n];
    for v in &verts {
        for i in 0..n {
            for j in 0..n {
                s[i][j] += v[i] * v[j] / verts.len() as f64;
            }
        }
    }
    let l = cholesky(&s)?;
    // Forward substitution for the lower-triangular inverse.
    let mut inv = vec![vec![0.0; n]; n];
    for c in 0..n {
        for i in 0..n {
            let rhs = if i == c { 1.0 } else { 0.0 };
            let s: f64 = (0..i).map(|k| l[i][k] * inv[k][c]).sum();
            inv[i][c] = (rhs - s) / l[i][i];
        }
    }
    let scale = inv.iter().flatten().fold(0f64, |m, x| m.max(x.abs()));
    let rows = inv
        .iter()
        .map(|r| r.iter().map(|x| grid_rational(x / scale, bits)).collect())
        .collect();
    let m = RMat::from_rows(rows).ok()?;
    m.is_invertible().then_some(m)
}

/// The ball side of the inequality, shared by every body tested in one dimension.
pub struct BallReference {
    pub n: usize,
    pub config: BpConfig,
    pub directions: Vec<RVec>,
    pub b_in: Polytope,
    pub vol_b_in: Rational,
    /// `B_in ⊆ B ⊆ s B_in`.
    pub s: Rational,
    pub mb_in: VolumeBounds,
}

impl BallReference {
    pub fn new(n: usize, config: BpConfig) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("the ball check needs n >= 2".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let targets = sphere_targets(n, config.ball_points, &mut rng);
        let pts: Vec<RVec> = targets.iter().map(|t| ball_point(t, config.ball_bits)).collect();
        let b_in = Polytope::hull(&pts)?;
        if !b_in.is_full_dimensional() {
            return Err(Error::ZeroVolume);
        }
        let r2 = b_in
            .facets()
            .iter()
            .map(|f| {
                let a = f.halfspace.normal();
                f.halfspace.offset() * f.halfspace.offset() / a.dot(a)
            })
            .min()
            .expect("full-dimensional hull has facets");
        let target = r2.recip();
        let mut s = round_up(&grid_rational(to_f64(&target).sqrt() * (1.0 + 1e-9), 40), 40);
        let step = Rational::new(BigInt::one(), BigInt::one() << 40u32);
        while &s * &s < target {
            s += &step;
        }
        let directions = symmetric_directions(n, config.directions, config.bits, &mut rng);
        let mb = symmetric_memo(&SupportBody::moment_body(&b_in), &directions)?;
        let mb_in = symmetric_volume_bounds(&mb, &directions, config.delta_bits)?;
        Ok(BallReference {
            n,
            config,
            vol_b_in: b_in.volume(),
            directions,
            b_in,
            s,
            mb_in,
        })
    }

    /// Runs the sandwich for `k`; `label` names the body in the report.
    pub fn check(&self, k: &Polytope, label: &str) -> Result<CheckReport> {
        if k.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: k.dim() });
        }
        if k.volume().is_zero() {
            return Err(Error::ZeroVolume);
        }
        let map = if self.config.precondition { isotropic_map(k, 16) } else { None };
        let body = match &map {
            Some(phi) => k.apply_linear(phi)?,
            None => k.clone(),
        };
        let sandwich = self.sandwich(&body, &self.directions, &self.mb_in)?;
        let mut report = CheckReport::new(format!("bp-inequality/{label}/n{}", self.n), self.config.seed);
        report.trials = 1;
        let verdict = if sandwich.certified_pass() {
            Verdict::Pass
        } else if sandwich.certified_violation() {
            // Confirm on a refined direction set before reporting a violation.
            let mut fine = self.config.clone();
            fine.directions *= 2;
            let refined = BallReference::new(self.n, fine)?;
            let again = refined.sandwich(&body, &refined.directions, &refined.mb_in)?;
            if again.certified_violation() {
                report.fail(json!({"body": label, "refined_directions": refined.directions.len()}));
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        } else {
            Verdict::Inconclusive
        };
        report.verdict = verdict;
        Ok(report.with_details(json!({
            "directions": self.directions.len(),
            "ball_points": self.b_in.vertices().len(),
            "preconditioned": map.is_some(),
            "margin_approx": sandwich.margin_approx(),
            "vol_MK_lower_approx": to_f64(&sandwich.mk.lower),
            "vol_MK_upper_approx": to_f64(&sandwich.mk.upper),
            "vol_K_approx": to_f64(&sandwich.vol_k),
            "s_approx": to_f64(&self.s),
        })))
    }

    fn sandwich(&self, k: &Polytope, dirs: &[RVec], mb_in: &VolumeBounds) -> Result<Sandwich> {
        let mk_body = symmetric_memo(&SupportBody::moment_body(k), dirs)?;
        let mk = symmetric_volume_bounds(&mk_body, dirs, self.config.delta_bits)?;
        let e = self.n as u32 + 1;
        let vol_k = k.volume();
        let vk_e = pow(&vol_k, e);
        let s_ne = pow(&self.s, self.n as u32 * e);
        let ball_e = pow(&self.vol_b_in, e);
        Ok(Sandwich {
            lhs_lower: &mk.lower * &ball_e,
            rhs_upper: &s_ne * &mb_in.upper * &vk_e,
            lhs_upper: &mk.upper * &s_ne * &ball_e,
            rhs_lower: &mb_in.lower * &vk_e,
            mk,
            vol_k,
        })
    }
}

struct Sandwich {
    lhs_lower: Rational,
    rhs_upper: Rational,
    lhs_upper: Rational,
    rhs_lower: Rational,
    mk: VolumeBounds,
    vol_k: Rational,
}

impl Sandwich {
    fn certified_pass(&self) -> bool {
        self.lhs_lower >= self.rhs_upper
    }

    fn certified_violation(&self) -> bool {
        self.lhs_upper < self.rhs_lower
    }

    fn margin_approx(&self) -> f64 {
        if self.rhs_upper.is_positive() {
            to_f64(&(&self.lhs_lower / &self.rhs_upper)) - 1.0
        } else {
            f64::INFINITY
        }
    }
}

/// One-off convenience wrapper around [`BallReference`].
pub fn check_bp_inequality(k: &Polytope, config: BpConfig) -> Result<CheckReport> {
    BallReference::new(k.dim(), config)?.check(k, "body")
}

/// The fixed bodies of the acceptance run: a centered cube, a random simplex
/// and a random centrally symmetric polytope.
pub fn bp_bodies(n: usize, seed: u64) -> Vec<(String, Polytope)> {
    use super::config::random_vector;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cube: Vec<RVec> = (0..1u32 << n)
        .map(|m| RVec::from_ints(&(0..n).map(|i| if m >> i & 1 == 1 { 1 } else { -1 }).collect::<Vec<_>>()))
        .collect();
    let simplex = loop {
        let pts: Vec<RVec> = (0..=n).map(|_| random_vector(n, &mut rng, 6, 4)).collect();
        let p = Polytope::hull(&pts).expect("nonempty");
        if p.is_full_dimensional() {
            break p;
        }
    };
    let symmetric = loop {
        let pts: Vec<RVec> = (0..n + 1).map(|_| random_vector(n, &mut rng, 6, 4)).collect();
        let mut all = pts.clone();
        all.extend(pts.iter().map(|p| -p));
        let p = Polytope::hull(&all).expect("nonempty");
        if p.is_full_dimensional() {
            break p;
        }
    };
    vec![
        ("cube".to_string(), Polytope::hull(&cube).expect("nonempty")),
        ("random-simplex".to_string(), simplex),
        ("random-symmetric".to_string(), symmetric),
    ]
}

/// Hull of `points` grid points just inside the unit sphere; close enough to
/// the equality case that the sandwich cannot decide.
pub fn near_ball(n: usize, points: usize, seed: u64) -> Result<Polytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<RVec> = sphere_targets(n, points, &mut rng).iter().map(|t| ball_point(t, 16)).collect();
    Polytope::hull(&pts)
}
