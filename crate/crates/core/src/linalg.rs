//! Dense square and rectangular matrices over a [`Scalar`] field.
//!
//! Sizes here are at most `8!`, so a flat row-major `Vec` with straightforward
//! elimination is all that is needed. Eigenvalues and pseudo-inverses are delegated
//! to `nalgebra` on the double-precision side.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use serde_json::Value;

use crate::error::{QuonError, Result};
use crate::scalar::{Scalar, ToJsonPair, C64};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(Scalar::to_c64)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let t = a.clone() * rhs[(k, c)].clone();
                    out[(r, c)] = out[(r, c)].clone() + t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip(rhs, |a, b| a.clone() - b.clone())
    }

    /// Entrywise (Schur) product.
    pub fn schur(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip(rhs, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        self.map(|a| a.clone() * s.clone())
    }

    fn zip(&self, rhs: &Matrix<S>, f: impl Fn(&S, &S) -> S) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Rows and columns picked by index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// `max |self - rhs|` over entries.
    pub fn max_abs_diff(&self, rhs: &Matrix<S>) -> f64 {
        self.sub(rhs).max_norm()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r..self.cols).all(|c| self[(r, c)] == self[(c, r)].conj()))
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if S::EXACT {
            bareiss(self)
        } else {
            lu_determinant(self)
        }
    }

    /// Threshold below which `|det|` counts as singular.
    pub fn singular_threshold(&self) -> f64 {
        if S::EXACT {
            0.0
        } else {
            1e-12 * self.max_norm().max(1.0).powi(self.rows as i32)
        }
    }

    /// Gauss-Jordan inverse with the singularity rule applied to the determinant.
    pub fn inverse(&self) -> Result<Matrix<S>> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let det = self.determinant();
        let threshold = self.singular_threshold();
        if det.is_zero() || (!S::EXACT && det.magnitude() < threshold) {
            return Err(QuonError::Singular {
                det: det.magnitude(),
                threshold,
            });
        }
        gauss_jordan(self, 0.0).ok_or(QuonError::Singular {
            det: det.magnitude(),
            threshold,
        })
    }

    /// Gauss-Jordan inverse that fails only when a pivot drops below
    /// `1e-12 * max|a_ij|`. The determinant of an `n! x n!` block at a strict
    /// point can be far below the absolute rule of [`Matrix::inverse`] while the
    /// block is perfectly conditioned.
    pub fn inverse_by_pivots(&self) -> Result<Matrix<S>> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let tol = if S::EXACT { 0.0 } else { 1e-12 * self.max_norm() };
        gauss_jordan(self, tol).ok_or(QuonError::Singular {
            det: self.determinant().magnitude(),
            threshold: tol,
        })
    }

    /// `max |self * other - I|`.
    pub fn inverse_residual(&self, other: &Matrix<S>) -> f64 {
        self.mul(other).max_abs_diff(&Matrix::identity(self.rows))
    }

    pub fn to_json(&self) -> Value
    where
        S: ToJsonPair,
    {
        Value::Array(
            (0..self.rows)
                .map(|r| Value::Array(self.row(r).iter().map(ToJsonPair::to_json_pair).collect()))
                .collect(),
        )
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: std::fmt::Debug> std::fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Index of the pivot for column `col` at or below row `from`: the largest modulus
/// in floating point, the first nonzero entry in exact arithmetic.
fn pivot_row<S: Scalar>(m: &Matrix<S>, col: usize, from: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.rows).find(|&r| !m[(r, col)].is_zero())
    } else {
        let (best, mag) = (from..m.rows)
            .map(|r| (r, m[(r, col)].magnitude()))
            .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > 0.0).then_some(best)
    }
}

fn swap_rows<S>(m: &mut Matrix<S>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        m.data.swap(a * m.cols + c, b * m.cols + c);
    }
}

fn lu_determinant<S: Scalar>(a: &Matrix<S>) -> S {
    let n = a.rows;
    let mut m = a.clone();
    let mut det = S::one();
    for col in 0..n {
        let Some(p) = pivot_row(&m, col, col) else {
            return S::zero();
        };
        if p != col {
            swap_rows(&mut m, p, col);
            det = -det;
        }
        let pivot = m[(col, col)].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            let f = m[(r, col)].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let t = f.clone() * m[(col, c)].clone();
                m[(r, c)] = m[(r, c)].clone() - t;
            }
        }
    }
    det
}

/// Fraction-free elimination; every division is exact.
fn bareiss<S: Scalar>(a: &Matrix<S>) -> S {
    let n = a.rows;
    if n == 0 {
        return S::one();
    }
    let mut m = a.clone();
    let mut sign = S::one();
    let mut prev = S::one();
    for k in 0..n - 1 {
        let Some(p) = pivot_row(&m, k, k) else {
            return S::zero();
        };
        if p != k {
            swap_rows(&mut m, p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                m[(i, j)] = v / prev.clone();
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}

fn gauss_jordan<S: Scalar>(a: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = Matrix::<S>::identity(n);
    for col in 0..n {
        let p = pivot_row(&m, col, col)?;
        if !S::EXACT && m[(p, col)].magnitude() <= tol {
            return None;
        }
        swap_rows(&mut m, p, col);
        swap_rows(&mut inv, p, col);
        let pivot = m[(col, col)].clone();
        for c in 0..n {
            m[(col, c)] = m[(col, c)].clone() / pivot.clone();
            inv[(col, c)] = inv[(col, c)].clone() / pivot.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[(r, col)].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = f.clone() * m[(col, c)].clone();
                m[(r, c)] = m[(r, c)].clone() - t;
                let t = f.clone() * inv[(col, c)].clone();
                inv[(r, c)] = inv[(r, c)].clone() - t;
            }
        }
    }
    Some(inv)
}

fn to_nalgebra(m: &Matrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows, m.cols, |r, c| m[(r, c)])
}

fn from_nalgebra(m: &DMatrix<C64>) -> Matrix<C64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Smallest eigenvalue of a hermitian matrix.
pub fn min_eigenvalue(m: &Matrix<C64>) -> f64 {
    let eig = nalgebra::SymmetricEigen::new(to_nalgebra(m));
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Moore-Penrose pseudo-inverse.
pub fn pseudo_inverse(m: &Matrix<C64>) -> Result<Matrix<C64>> {
    let svd = to_nalgebra(m).svd(true, true);
    svd.pseudo_inverse(1e-13)
        .map(|p| from_nalgebra(&p))
        .map_err(|e| QuonError::Invalid(e.to_string()))
}

/// Numerical rank by singular values relative to the largest one.
pub fn rank(m: &Matrix<C64>, rel_tol: f64) -> usize {
    let sv = to_nalgebra(m).singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}
