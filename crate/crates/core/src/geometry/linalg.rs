//! Exact vectors, square matrices and dense rational elimination.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::rational::{format_rational, int, Rational};

/// A point or direction in `R^n` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RVec(Vec<Rational>);

impl RVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        RVec(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RVec(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RVec(vec![Rational::zero(); n])
    }

    /// Standard basis vector `e_i` (zero-based index).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RVec) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn checked_dot(&self, other: &RVec) -> Result<Rational> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub fn scale(&self, s: &Rational) -> RVec {
        RVec(self.0.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: &Rational, other: &RVec) -> RVec {
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn add_assign(&mut self, other: &RVec) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &RVec) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= b;
        }
    }
}

impl Index<usize> for RVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &RVec {
    type Output = RVec;
    fn add(self, rhs: &RVec) -> RVec {
        RVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RVec {
    type Output = RVec;
    fn sub(self, rhs: &RVec) -> RVec {
        RVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RVec {
    type Output = RVec;
    fn neg(self) -> RVec {
        RVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// A square `n x n` rational matrix with its determinant cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMat {
    rows: Vec<Vec<Rational>>,
    det: Rational,
}

impl RMat {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for r in &rows {
            check_dim(n, r.len())?;
        }
        let det = determinant(&rows);
        Ok(RMat { rows, det })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Rational::one())
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        Self::diagonal(&vec![s.clone(); n])
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        let mut det = Rational::one();
        for (i, di) in d.iter().enumerate() {
            rows[i][i] = di.clone();
            det *= di;
        }
        RMat { rows, det }
    }

    /// `I + c E_ij` for `i != j`; determinant one.
    pub fn shear(n: usize, i: usize, j: usize, c: Rational) -> Self {
        assert_ne!(i, j, "shear needs distinct indices");
        let mut m = Self::identity(n);
        m.rows[i][j] = c;
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn is_invertible(&self) -> bool {
        !self.det.is_zero()
    }

    pub fn mul_vec(&self, v: &RVec) -> RVec {
        debug_assert_eq!(self.dim(), v.dim());
        RVec(self.rows.iter().map(|r| RVec::dot_slice(r, v.coords())).collect())
    }

    pub fn checked_mul_vec(&self, v: &RVec) -> Result<RVec> {
        check_dim(self.dim(), v.dim())?;
        Ok(self.mul_vec(v))
    }

    pub fn mul(&self, other: &RMat) -> RMat {
        let n = self.dim();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += &self.rows[i][k] * &other.rows[k][j];
                }
                *cell = acc;
            }
        }
        RMat {
            rows,
            det: &self.det * &other.det,
        }
    }

    pub fn transpose(&self) -> RMat {
        let n = self.dim();
        let rows = (0..n)
            .map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect())
            .collect();
        RMat {
            rows,
            det: self.det.clone(),
        }
    }

    pub fn inverse(&self) -> Result<RMat> {
        if self.det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let n = self.dim();
        let mut aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let (_, pivots) = rref_in_place(&mut aug, n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix);
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(RMat {
            rows,
            det: self.det.recip(),
        })
    }
}

impl RVec {
    fn dot_slice(a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        acc
    }
}

/// Exact determinant by Gaussian elimination.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
        }
    }
    det
}

/// Reduces the first `ncols` columns of `a` to reduced row echelon form,
/// applying the same row operations to any trailing columns.
/// Returns the rank and the pivot columns.
pub fn rref_in_place(a: &mut [Vec<Rational>], ncols: usize) -> (usize, Vec<usize>) {
    let m = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let (pr, rr) = if r < row {
                let (lo, hi) = a.split_at_mut(row);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = a.split_at_mut(r);
                (&lo[row], &mut hi[0])
            };
            for (x, y) in rr.iter_mut().zip(pr.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (pivots.len(), pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut a = rows.to_vec();
    rref_in_place(&mut a, ncols).0
}

/// Basis of `{x : A x = 0}` for an `m x k` matrix given by rows.
pub fn nullspace(rows: &[Vec<Rational>], k: usize) -> Vec<RVec> {
    let mut a = rows.to_vec();
    let (_, pivots) = rref_in_place(&mut a, k);
    let mut basis = Vec::new();
    for free in (0..k).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); k];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(RVec(v));
    }
    basis
}

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(RVec),
    /// Solutions are `particular + span(kernel)`.
    Family { particular: RVec, kernel: Vec<RVec> },
    /// `certificate^T A = 0` while `certificate^T b != 0`.
    Inconsistent { certificate: RVec },
}

/// Solves `A x = b` for an `m x k` system given by rows.
pub fn solve(rows: &[Vec<Rational>], b: &[Rational], k: usize) -> Solution {
    let m = rows.len();
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let (rank, pivots) = rref_in_place(&mut aug, k);
    if aug[rank..].iter().any(|r| !r[k].is_zero()) {
        let transposed: Vec<Vec<Rational>> = (0..k)
            .map(|c| (0..m).map(|r| rows[r][c].clone()).collect())
            .collect();
        let certificate = nullspace(&transposed, m)
            .into_iter()
            .find(|y| !RVec::dot_slice(y.coords(), b).is_zero())
            .expect("inconsistent system has a separating left null vector");
        return Solution::Inconsistent { certificate };
    }
    let mut particular = vec![Rational::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[r][k].clone();
    }
    let particular = RVec(particular);
    let kernel = nullspace(rows, k);
    if kernel.is_empty() {
        Solution::Unique(particular)
    } else {
        Solution::Family { particular, kernel }
    }
}

/// Largest absolute coordinate; handy for bounding random data.
pub fn max_abs(v: &RVec) -> Rational {
    v.coords()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let m = RMat::from_int_rows(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]).unwrap();
        assert_eq!(m.det(), &int(5));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RMat::identity(3));
        assert_eq!(inv.det(), &frac(1, 5));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = RMat::from_int_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(m.det().is_zero());
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn shear_and_diagonal_determinants() {
        assert_eq!(RMat::shear(3, 0, 2, frac(7, 3)).det(), &int(1));
        assert_eq!(RMat::scalar(3, &int(2)).det(), &int(8));
        let s = RMat::shear(3, 1, 0, int(4));
        assert_eq!(s.mul_vec(&RVec::from_ints(&[1, 1, 1])), RVec::from_ints(&[1, 5, 1]));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &a {
                assert!(RVec::dot_slice(r, v.coords()).is_zero());
            }
        }
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn solve_reports_all_three_outcomes() {
        let a = rows(&[&[1, 1], &[1, -1]]);
        assert_eq!(
            solve(&a, &[int(3), int(1)], 2),
            Solution::Unique(RVec::from_ints(&[2, 1]))
        );
        let a = rows(&[&[1, 1], &[2, 2]]);
        match solve(&a, &[int(1), int(3)], 2) {
            Solution::Inconsistent { certificate } => {
                let y = certificate.coords();
                assert!((&y[0] + &y[1] * int(2)).is_zero());
                assert!(!(&y[0] + &y[1] * int(3)).is_zero());
            }
            other => panic!("expected inconsistent, got {other:?}"),
        }
        match solve(&a, &[int(1), int(2)], 2) {
            Solution::Family { kernel, .. } => assert_eq!(kernel.len(), 1),
            other => panic!("expected family, got {other:?}"),
        }
    }

    #[test]
    fn vector_display() {
        let v = RVec::new(vec![frac(1, 2), int(-3)]);
        assert_eq!(v.to_string(), "(1/2, -3)");
    }
}
