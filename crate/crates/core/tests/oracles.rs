use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minkval_core::harness::config::random_polytope;
use minkval_core::harness::TrialConfig;
use minkval_core::io::{emit_polytope_string, parse_polytope_str};
use minkval_core::rational::to_f64;
use minkval_core::valuation::volume_bounds;
use minkval_core::{Polytope, RVec, SupportBody};

type IntVec = [i64; 3];

fn sub(a: IntVec, b: IntVec) -> IntVec {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: IntVec, b: IntVec) -> IntVec {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: IntVec, b: IntVec) -> i64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    v.into_iter().map(|x| x / &g).collect()
}

/// Every supporting plane through three affinely independent input points.
fn brute_force_facets(pts: &[IntVec]) -> BTreeSet<Vec<BigInt>> {
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let nrm = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                if nrm == [0, 0, 0] {
                    continue;
                }
                let off = dot(nrm, pts[i]);
                let side: Vec<i64> = pts.iter().map(|p| (dot(nrm, *p) - off).signum()).collect();
                let s = if side.iter().all(|&x| x <= 0) {
                    1
                } else if side.iter().all(|&x| x >= 0) {
                    -1
                } else {
                    continue;
                };
                let row = nrm.iter().chain([&off]).map(|&x| BigInt::from(s * x)).collect();
                out.insert(primitive(row));
            }
        }
    }
    out
}

fn library_facets(p: &Polytope) -> BTreeSet<Vec<BigInt>> {
    p.facets()
        .iter()
        .map(|f| {
            let a = f.halfspace.normal().coords().iter().chain([f.halfspace.offset()]);
            let den = a.clone().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
            primitive(a.map(|x| x.numer() * (&den / x.denom())).collect())
        })
        .collect()
}

/// Vertices are the input points lying on three facets with independent normals.
fn brute_force_vertices(pts: &[IntVec], facets: &BTreeSet<Vec<BigInt>>) -> BTreeSet<IntVec> {
    pts.iter()
        .copied()
        .filter(|p| {
            let on: Vec<IntVec> = facets
                .iter()
                .filter(|f| {
                    let lhs: BigInt = (0..3).map(|c| &f[c] * p[c]).sum();
                    lhs == f[3]
                })
                .map(|f| [0, 1, 2].map(|c| i64::try_from(&f[c]).unwrap()))
                .collect();
            on.iter().any(|a| on.iter().any(|b| on.iter().any(|c| dot(cross(*a, *b), *c) != 0)))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_matches_brute_force(pts in prop::collection::vec(prop::array::uniform3(-4i64..=4), 4..14)) {
        let rv: Vec<RVec> = pts.iter().map(|p| RVec::from_ints(p)).collect();
        let hull = Polytope::hull(&rv).unwrap();
        prop_assume!(hull.is_full_dimensional());
        let facets = brute_force_facets(&pts);
        prop_assert_eq!(library_facets(&hull), facets.clone());
        let verts: BTreeSet<IntVec> = hull
            .vertices()
            .iter()
            .map(|v| [0, 1, 2].map(|c| i64::try_from(v.coords()[c].to_integer()).unwrap()))
            .collect();
        prop_assert_eq!(verts, brute_force_vertices(&pts, &facets));
    }
}

#[test]
fn golden_random_polytope() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/random_polytope_n3_seed1.json");
    let cfg = TrialConfig::new(3, 1, 1);
    let p = random_polytope(3, &mut cfg.rng(0));
    let emitted = emit_polytope_string(&p) + "\n";
    if std::env::var_os("MINKVAL_BLESS").is_some() {
        std::fs::write(&path, &emitted).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("fixture present");
    assert_eq!(emitted, golden);
    assert_eq!(parse_polytope_str(&golden).unwrap(), p);
}

/// `M[-1,1]^3` at 98 directions: the Monte-Carlo volume of the body cut out
/// by a denser set of support halfspaces lies between the exact bounds.
#[test]
fn moment_body_of_cube_volume_is_bracketed() {
    let pts: Vec<RVec> = (0..8u32).map(|m| RVec::from_ints(&[0, 1, 2].map(|i| if m >> i & 1 == 1 { 1 } else { -1 }))).collect();
    let cube = Polytope::hull(&pts).unwrap();
    let body = SupportBody::moment_body(&cube);
    let mut dirs = Vec::new();
    for v in sign_vectors() {
        if v != [0, 0, 0] {
            dirs.push(RVec::from_ints(&v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(98);
    let random = |rng: &mut ChaCha8Rng| loop {
        let v = [0; 3].map(|_| rng.gen_range(-9i64..=9));
        if v != [0, 0, 0] {
            return RVec::from_ints(&v);
        }
    };
    while dirs.len() < 98 {
        dirs.push(random(&mut rng));
    }
    let bounds = volume_bounds(&body, &dirs).unwrap();
    assert!(bounds.lower < bounds.upper);

    let mut fine = dirs.clone();
    fine.extend((0..400).map(|_| random(&mut rng)));
    let cons: Vec<([f64; 3], f64)> = fine
        .iter()
        .map(|u| ([0, 1, 2].map(|c| to_f64(&u.coords()[c])), to_f64(&body.value(u).unwrap())))
        .collect();
    let r = to_f64(&body.value(&RVec::from_ints(&[1, 0, 0])).unwrap());
    let samples = 1_000_000;
    let mut hits = 0u64;
    for _ in 0..samples {
        let x = [0; 3].map(|_| rng.gen_range(-r..r));
        if cons.iter().all(|(a, h)| a[0] * x[0] + a[1] * x[1] + a[2] * x[2] <= *h) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let box_vol = 8.0 * r * r * r;
    let (est, se) = (box_vol * p, box_vol * (p * (1.0 - p) / samples as f64).sqrt());
    let (lo, hi) = (to_f64(&bounds.lower), to_f64(&bounds.upper));
    assert!(lo - 3.0 * se <= est && est <= hi + 3.0 * se, "{lo} <= {est} +- {se} <= {hi}");
    assert!(bounds.lower.is_positive());
}

/// `{-1, 0, 1}^3`: the 26 deterministic directions.
fn sign_vectors() -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                out.push([a, b, c]);
            }
        }
    }
    out
}
