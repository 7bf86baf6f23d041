//! Floating-point Monte-Carlo cross-check of the exact integrals.
//!
//! Points are drawn uniformly from the bounding box and kept when they pass
//! every facet inequality. Each estimate comes with its standard error and is
//! compared with the exact value at a tolerance of three standard errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::random_polytope;
use super::report::{CheckReport, TrialOutcome};
use crate::geometry::{Polytope, RVec};
use crate::rational::{frac, to_f64};
use crate::valuation::moment_body_eval;

pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 2;
pub const TOLERANCE_SE: f64 = 3.0;

/// An estimate with its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct McEstimates {
    pub volume: Estimate,
    pub moment: Vec<Estimate>,
    /// `h(MK, u)` for each requested direction.
    pub moment_body: Vec<Estimate>,
}

struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn new() -> Self {
        Welford { n: 0, mean: 0.0, m2: 0.0 }
    }

    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn estimate(&self, scale: f64) -> Estimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        Estimate { mean: scale * self.mean, se: scale * (var / self.n as f64).sqrt() }
    }
}

/// Rejection-sampling estimates of `vol K`, `∫_K x dx` and `∫_K |<u, x>| dx`.
pub fn monte_carlo(k: &Polytope, dirs: &[RVec], samples: usize, rng: &mut impl Rng) -> McEstimates {
    let n = k.dim();
    let f = |v: &RVec| v.coords().iter().map(to_f64).collect::<Vec<f64>>();
    let verts: Vec<Vec<f64>> = k.vertices().iter().map(f).collect();
    let lo: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let facets: Vec<(Vec<f64>, f64)> = k
        .facets()
        .iter()
        .map(|fc| (f(fc.halfspace.normal()), to_f64(fc.halfspace.offset())))
        .collect();
    let udirs: Vec<Vec<f64>> = dirs.iter().map(f).collect();

    let mut vol = Welford::new();
    let mut mom: Vec<Welford> = (0..n).map(|_| Welford::new()).collect();
    let mut mb: Vec<Welford> = udirs.iter().map(|_| Welford::new()).collect();
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for i in 0..n {
            x[i] = rng.gen_range(lo[i]..hi[i]);
        }
        let inside = k.is_full_dimensional()
            && facets.iter().all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= *b);
        let w = if inside { 1.0 } else { 0.0 };
        vol.push(w);
        for i in 0..n {
            mom[i].push(w * x[i]);
        }
        for (acc, u) in mb.iter_mut().zip(&udirs) {
            acc.push(w * u.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>().abs());
        }
    }
    McEstimates {
        volume: vol.estimate(box_vol),
        moment: mom.iter().map(|w| w.estimate(box_vol)).collect(),
        moment_body: mb.iter().map(|w| w.estimate(box_vol)).collect(),
    }
}

/// Ten fixed full-dimensional bodies in `R^3`.
pub fn mc_bodies() -> Vec<(String, Polytope)> {
    let v = |c: &[i64]| RVec::from_ints(c);
    let hull = |pts: Vec<RVec>| Polytope::hull(&pts).expect("nonempty");
    let cube = |lo: i64, hi: i64| {
        hull((0..8u32).map(|m| v(&[0, 1, 2].map(|i| if m >> i & 1 == 1 { hi } else { lo }))).collect())
    };
    let mut out = vec![
        ("corner-simplex".to_string(), hull(vec![v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])])),
        ("unit-cube".to_string(), cube(0, 1)),
        ("centered-cube".to_string(), cube(-1, 1)),
        (
            "cross-polytope".to_string(),
            hull(vec![v(&[1, 0, 0]), v(&[-1, 0, 0]), v(&[0, 1, 0]), v(&[0, -1, 0]), v(&[0, 0, 1]), v(&[0, 0, -1])]),
        ),
        (
            "shifted-simplex".to_string(),
            hull(vec![v(&[1, 1, 1]), v(&[2, 1, 1]), v(&[1, 2, 1]), v(&[1, 1, 2])]),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..5 {
        out.push((format!("random-{i}"), random_polytope(3, &mut rng)));
    }
    out
}

/// Compares volume, moment vector and `h(MK, u)` at three directions with
/// Monte-Carlo estimates for every body.
pub fn check_monte_carlo(bodies: &[(String, Polytope)], samples: usize, seed: u64) -> CheckReport {
    let dirs = vec![
        RVec::from_ints(&[1, 0, 0]),
        RVec::new(vec![frac(1, 1), frac(2, 1), frac(-1, 1)]),
        RVec::new(vec![frac(-1, 3), frac(1, 2), frac(1, 1)]),
    ];
    let outcomes: Vec<(TrialOutcome, serde_json::Value)> = bodies
        .par_iter()
        .enumerate()
        .map(|(idx, (name, k))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let est = monte_carlo(k, &dirs, samples, &mut rng);
            let mut rows = vec![("volume".to_string(), to_f64(&k.volume()), est.volume)];
            for (i, e) in est.moment.iter().enumerate() {
                rows.push((format!("moment[{i}]"), to_f64(&k.moment_vector()[i]), *e));
            }
            for (u, e) in dirs.iter().zip(&est.moment_body) {
                let exact = moment_body_eval(k, u).expect("dimension").value;
                rows.push((format!("h(MK,{u})"), to_f64(&exact), *e));
            }
            let mut failed = None;
            let table: Vec<_> = rows
                .iter()
                .map(|(q, exact, e)| {
                    let z = if e.se > 0.0 { (e.mean - exact) / e.se } else if e.mean == *exact { 0.0 } else { f64::INFINITY };
                    if z.abs() > TOLERANCE_SE && failed.is_none() {
                        failed = Some(json!({"body": name, "quantity": q, "exact_approx": exact, "estimate": e.mean, "se": e.se, "z": z}));
                    }
                    json!({"quantity": q, "exact_approx": exact, "estimate": e.mean, "se": e.se, "z": z})
                })
                .collect();
            let outcome = match failed {
                Some(w) => TrialOutcome::Failed(w),
                None => TrialOutcome::Ok,
            };
            (outcome, json!({"body": name, "comparisons": table}))
        })
        .collect();
    let mut report = CheckReport::new(format!("monte-carlo/{}-bodies", bodies.len()), seed);
    let (outs, details): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    report.absorb(outs);
    report.with_details(json!({"samples": samples, "tolerance_se": TOLERANCE_SE, "bodies": details}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_on_unit_cube() {
        let bodies = vec![mc_bodies().swap_remove(1)];
        let r = check_monte_carlo(&bodies, 20_000, 3);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn welford_matches_direct() {
        let mut w = Welford::new();
        for x in [1.0, 2.0, 4.0, 7.0] {
            w.push(x);
        }
        let e = w.estimate(2.0);
        assert!((e.mean - 7.0).abs() < 1e-12);
        assert!((e.se - 2.0 * (7.0f64 / 4.0).sqrt()).abs() < 1e-12);
    }
}
