//! Shared inputs for the criterion benchmarks.

use minkval_core::{frac, int, Polytope, RVec};

/// Axis-aligned box `[lo, hi]^n`.
pub fn cube(n: usize, lo: i64, hi: i64) -> Polytope {
    let mut pts = Vec::new();
    for mask in 0..(1usize << n) {
        let coords = (0..n)
            .map(|i| if mask >> i & 1 == 1 { int(hi) } else { int(lo) })
            .collect();
        pts.push(RVec::new(coords));
    }
    Polytope::hull(&pts).expect("nonempty")
}

/// A fixed irregular polytope with rational coordinates.
pub fn irregular(n: usize) -> Polytope {
    let mut pts = Vec::new();
    for k in 0..(2 * n + 4) as i64 {
        let coords = (0..n as i64)
            .map(|i| frac((k * 7 + i * 13) % 11 - 5, 1 + (k + i) % 3))
            .collect();
        pts.push(RVec::new(coords));
    }
    Polytope::hull(&pts).expect("nonempty")
}
