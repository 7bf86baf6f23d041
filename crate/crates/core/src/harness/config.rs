//! Trial configuration, seeded randomness and default direction sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Polytope, RMat, RVec};
use crate::rational::{frac, int, Rational};
use crate::valuation::{Family, ValuationSpec};

/// Parameters shared by the randomized checks.
#[derive(Clone, Debug, Serialize)]
pub struct TrialConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Seeded random directions added to the deterministic core.
    pub random_directions: usize,
    /// Dilation trials for the homogeneity checks.
    pub dilations: usize,
    /// Coefficients are drawn as `p/q` with `|p| <= coeff_num`, `1 <= q <= coeff_den`.
    pub coeff_num: i64,
    pub coeff_den: i64,
    /// Explicit direction set overriding the default one.
    #[serde(skip)]
    pub directions: Option<Vec<RVec>>,
}

impl TrialConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        TrialConfig {
            n,
            trials,
            seed,
            random_directions: 32,
            dilations: 20,
            coeff_num: 6,
            coeff_den: 4,
            directions: None,
        }
    }

    pub fn require_n_at_least(&self, min: usize) -> Result<()> {
        if self.n < min {
            return Err(Error::InvalidArgument(format!(
                "this check needs n >= {min}, got {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Independent, reproducible stream for trial `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// The direction set used by every check of this configuration.
    pub fn directions(&self) -> Vec<RVec> {
        match &self.directions {
            Some(d) => d.clone(),
            None => {
                let mut rng = self.rng(u64::MAX);
                default_directions(self.n, self.random_directions, &mut rng)
            }
        }
    }
}

/// `±e_i`, `±e_i ± e_j` and every sign vector with support `3..=n`.
pub fn sign_directions(n: usize) -> Vec<RVec> {
    let mut dirs = Vec::new();
    for support in 1..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != support {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            for signs in 0u32..(1 << support) {
                let mut v = vec![int(0); n];
                for (k, &i) in idx.iter().enumerate() {
                    v[i] = if signs >> k & 1 == 1 { int(-1) } else { int(1) };
                }
                dirs.push(RVec::new(v));
            }
        }
    }
    dirs
}

/// [`sign_directions`] followed by `extra` seeded random rational directions.
pub fn default_directions(n: usize, extra: usize, rng: &mut impl Rng) -> Vec<RVec> {
    let mut dirs = sign_directions(n);
    for _ in 0..extra {
        dirs.push(random_direction(n, rng));
    }
    dirs
}

pub fn random_rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    frac(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn random_positive_rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    frac(rng.gen_range(1..=num), rng.gen_range(1..=den))
}

pub fn random_vector(n: usize, rng: &mut impl Rng, num: i64, den: i64) -> RVec {
    RVec::new((0..n).map(|_| random_rational(rng, num, den)).collect())
}

pub fn random_direction(n: usize, rng: &mut impl Rng) -> RVec {
    loop {
        let v = random_vector(n, rng, 7, 5);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Hull of `k in [n+1, 2n+4]` random rational points, redrawn until full-dimensional.
pub fn random_polytope(n: usize, rng: &mut impl Rng) -> Polytope {
    loop {
        let k = rng.gen_range(n + 1..=2 * n + 4);
        let pts: Vec<RVec> = (0..k).map(|_| random_vector(n, rng, 6, 4)).collect();
        let p = Polytope::hull(&pts).expect("nonempty");
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Product of 3 to 8 elementary shears with small rational entries; det 1.
pub fn random_unimodular(n: usize, rng: &mut impl Rng) -> RMat {
    let count = rng.gen_range(3..=8);
    let mut m = RMat::identity(n);
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = loop {
            let c = random_rational(rng, 3, 3);
            if c != int(0) {
                break c;
            }
        };
        m = RMat::shear(n, i, j, c).mul(&m);
    }
    m
}

/// Diagonal matrix with nonzero rational entries of random sign.
pub fn random_diagonal(n: usize, rng: &mut impl Rng) -> RMat {
    let d: Vec<Rational> = (0..n)
        .map(|_| {
            let v = random_positive_rational(rng, 5, 4);
            if rng.gen_bool(0.3) {
                -v
            } else {
                v
            }
        })
        .collect();
    RMat::diagonal(&d)
}

/// A random member of `family` within its sign constraints.
pub fn random_spec(family: Family, rng: &mut impl Rng, num: i64, den: i64) -> ValuationSpec {
    let mut cs: Vec<Rational> = Vec::with_capacity(4);
    for i in 0..4 {
        let free = family == Family::DegreeNPlus1 && i < 2;
        cs.push(if free {
            random_rational(rng, num, den)
        } else {
            frac(rng.gen_range(0..=num), rng.gen_range(1..=den))
        });
    }
    ValuationSpec::new(family, cs.try_into().expect("four")).expect("sign constraints hold")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_direction_counts() {
        let cfg = TrialConfig::new(3, 1, 7);
        assert_eq!(cfg.directions().len(), 26 + 32);
        let cfg = TrialConfig::new(4, 1, 7);
        assert_eq!(cfg.directions().len(), 80 + 32);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let cfg = TrialConfig::new(3, 1, 9);
        let a: u64 = cfg.rng(3).gen();
        let b: u64 = cfg.rng(3).gen();
        let c: u64 = cfg.rng(4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_objects_respect_constraints() {
        let cfg = TrialConfig::new(3, 1, 5);
        for t in 0..20 {
            let mut rng = cfg.rng(t);
            assert_eq!(random_unimodular(3, &mut rng).det(), &int(1));
            let p = random_polytope(3, &mut rng);
            assert!(p.is_full_dimensional());
            let s = random_spec(Family::Degree1, &mut rng, 4, 3);
            assert!(s.coefficients().iter().all(|c| c >= &int(0)));
        }
        let lam = frac(3, 2);
        assert_eq!(RMat::scalar(3, &lam).det(), &frac(27, 8));
    }
}
