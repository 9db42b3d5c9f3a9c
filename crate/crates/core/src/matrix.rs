//! Small dense matrices over a [`Scalar`].
//!
//! Sizes here are tiny (tens of rows), so everything is plain row-major
//! storage with Gauss-Jordan elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch { expected: (rows, cols), found: (data.len(), 1) });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::ShapeMismatch { expected: (r, c), found: (r, bad.len()) });
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch { expected: (self.cols, rhs.cols), found: rhs.shape() });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch { expected: (self.cols, 1), found: (v.len(), 1) });
        }
        Ok(self
            .row_iter()
            .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    /// `v^T M`.
    pub fn vec_mul(&self, v: &[T]) -> Result<Vec<T>> {
        self.transpose().mul_vec(v)
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.row_iter().map(|row| row.iter().cloned().fold(T::zero(), |a, b| a + b)).collect()
    }

    pub fn column_sums(&self) -> Vec<T> {
        self.transpose().row_sums()
    }

    pub fn vstack(blocks: &[Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::ShapeMismatch { expected: (b.rows, cols), found: b.shape() });
            }
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Self { rows, cols, data })
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.max_abs();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let best = (row..m.rows)
                .filter(|&r| !m[(r, col)].is_negligible(scale))
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .abs_val()
                        .partial_cmp(&m[(b, col)].abs_val())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = T::one() / m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let delta = factor.clone() * m[(row, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per row of the result.
    pub fn nullspace(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out[(k, f)] = T::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                out[(k, pc)] = -r[(pr, f)].clone();
            }
        }
        out
    }

    /// Rows `n` with `n M = 0`.
    pub fn left_nullspace(&self) -> Self {
        self.transpose().nullspace()
    }

    /// Solves `self * X = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if self.rows != self.cols || rhs.rows != self.rows {
            return Err(Error::ShapeMismatch { expected: (self.rows, self.rows), found: self.shape() });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, n + rhs.cols);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..rhs.cols {
                aug[(r, n + c)] = rhs[(r, c)].clone();
            }
        }
        let (red, pivots) = aug.rref();
        let rank = pivots.iter().filter(|&&p| p < n).count();
        if rank < n {
            return Err(Error::SingularSystem { rank, expected: n });
        }
        let mut x = Self::zeros(n, rhs.cols);
        for r in 0..n {
            for c in 0..rhs.cols {
                x[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }

    /// Infinity-norm condition number estimate, computed in `f64`.
    pub fn condition_estimate(&self) -> f64 {
        let a = self.to_f64();
        match a.inverse() {
            Ok(inv) => a.norm_inf() * inv.norm_inf(),
            Err(_) => f64::INFINITY,
        }
    }
}

impl Matrix<f64> {
    pub fn norm_inf(&self) -> f64 {
        self.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

impl RationalMatrix {
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }
}

/// Right-aligned fraction table, one matrix row per line.
impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_strings();
        let widths: Vec<usize> =
            (0..self.cols).map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
        for row in &cells {
            let line: Vec<String> =
                row.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}", w = *w)).collect();
            writeln!(f, "  {}", line.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num_traits::Zero;

    fn m(rows: Vec<Vec<i64>>) -> RationalMatrix {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat_int).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let n = a.nullspace();
        assert_eq!(n.rows(), 1);
        let prod = a.mul(&n.transpose()).unwrap();
        assert!(prod.as_slice().iter().all(|x| x.is_zero()));
        let l = a.left_nullspace();
        assert!(l.mul(&a).unwrap().as_slice().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_exact() {
        let a = m(vec![vec![2, 1], vec![1, 3]]);
        let b = m(vec![vec![1], vec![2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(x[(0, 0)], rat(1, 5));
        assert_eq!(x[(1, 0)], rat(3, 5));
    }

    #[test]
    fn singular_solve_reports_rank() {
        let a = m(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(a.inverse().unwrap_err(), Error::SingularSystem { rank: 1, expected: 2 });
    }

    #[test]
    fn float_rank_tolerates_rounding() {
        let a = Matrix::from_rows(vec![vec![1.0, 1.0 / 3.0], vec![3.0, 1.0 + 1e-17]]).unwrap();
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn display_aligns_columns() {
        let a = Matrix::from_rows(vec![vec![rat(1, 1), rat(3, 32)], vec![rat(0, 1), rat(1, 4)]]).unwrap();
        assert_eq!(a.to_string(), "  1  3/32\n  0   1/4\n");
    }
}
