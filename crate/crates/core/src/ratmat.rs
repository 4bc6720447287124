//! Dense rational matrices with exact elimination.
//!
//! Sizes in this crate are tiny (at most a few dozen rows), so everything is
//! plain Gaussian elimination over `BigRational` with no attempt at
//! fraction-free cleverness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Row-major dense matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Self {
        RatMat::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    *out.at_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduce to row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.at(r, c).recip();
            for j in c..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let sub = &f * self.at(r, j);
                    *self.at_mut(i, j) -= sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// One solution of `A x = b`, free variables set to zero; `None` if
    /// inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len(), "shape mismatch in solve");
        let mut aug = RatMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let mut free_cols = Vec::new();
        for c in 0..self.cols {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
            } else {
                free_cols.push(c);
            }
        }
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(r, fc).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            det *= m.at(c, c);
            let inv = m.at(c, c).recip();
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c) * &inv;
                for j in c..n {
                    let sub = &f * m.at(c, j);
                    *m.at_mut(i, j) -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = RatMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rat::one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.iter().enumerate().any(|(r, &c)| r != c) {
            return None;
        }
        let mut inv = RatMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, by
    /// congruence elimination (Sylvester's law keeps the counts invariant).
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols, "inertia of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        for k in 0..n {
            if a.at(k, k).is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a.at(j, j).is_zero()) {
                    for c in 0..n {
                        a.data.swap(k * n + c, j * n + c);
                    }
                    for r in 0..n {
                        a.data.swap(r * n + k, r * n + j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a.at(k, j).is_zero()) {
                    // All trailing diagonal entries vanish: fold row/col j
                    // into k, giving diagonal entry 2*a(k,j).
                    for c in 0..n {
                        let add = a.at(j, c).clone();
                        *a.at_mut(k, c) += add;
                    }
                    for r in 0..n {
                        let add = a.at(r, j).clone();
                        *a.at_mut(r, k) += add;
                    }
                }
            }
            let pivot = a.at(k, k).clone();
            if pivot.is_zero() {
                zero += 1;
                continue;
            }
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a.at(i, k).is_zero() {
                    continue;
                }
                let f = a.at(i, k) / &pivot;
                for j in k..n {
                    let sub = &f * a.at(k, j);
                    *a.at_mut(i, j) -= sub;
                }
                // Matching column operation; restores symmetry of the
                // trailing block without touching eliminated rows.
                for r in k..n {
                    let sub = &f * a.at(r, k);
                    *a.at_mut(r, i) -= sub;
                }
            }
        }
        (pos, neg, zero)
    }

    /// `A = L D L^T` for a symmetric positive definite matrix; unit lower
    /// triangular `L` and positive diagonal `D`. `None` if a pivot is not
    /// positive.
    pub fn ldl(&self) -> Option<(RatMat, Vec<Rat>)> {
        assert_eq!(self.rows, self.cols, "ldl of non-square matrix");
        let n = self.rows;
        let mut l = RatMat::identity(n);
        let mut d: Vec<Rat> = Vec::with_capacity(n);
        for k in 0..n {
            let mut dk = self.at(k, k).clone();
            for j in 0..k {
                dk -= l.at(k, j) * l.at(k, j) * &d[j];
            }
            if !dk.is_positive() {
                return None;
            }
            for i in k + 1..n {
                let mut v = self.at(i, k).clone();
                for j in 0..k {
                    v -= l.at(i, j) * l.at(k, j) * &d[j];
                }
                *l.at_mut(i, k) = v / &dk;
            }
            d.push(dk);
        }
        Some((l, d))
    }
}
