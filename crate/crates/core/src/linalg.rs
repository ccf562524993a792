//! Dense complex square matrices, induced norms and inversion.
//!
//! Every bound formula in this crate is a ratio of induced (subordinate)
//! norms of coefficient matrices and their inverses, so this module only
//! carries what those formulas need: products, differences, scaling, the
//! three classical induced norms and a pivoted Gauss-Jordan inverse.
//!
//! Matrices are immutable values. All operations return fresh matrices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Relative pivot threshold below which a matrix is declared singular.
pub const PIVOT_EPS: f64 = 1e-13;

/// Relative accuracy promised by [`Matrix::inverse`].
pub const INVERSE_EPS: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },
    #[error("expected {expected} entries for a {n}x{n} matrix, got {got}")]
    Shape { n: usize, expected: usize, got: usize },
    #[error("matrix dimension must be at least 1")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

/// Which subordinate matrix norm instantiates `‖·‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NormKind {
    /// Maximum absolute column sum.
    InducedOne,
    /// Largest singular value.
    InducedTwo,
    /// Maximum absolute row sum.
    InducedInf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::InducedOne, NormKind::InducedTwo, NormKind::InducedInf];

    /// Short label used in tables and command-line flags.
    pub fn label(self) -> &'static str {
        match self {
            NormKind::InducedOne => "1",
            NormKind::InducedTwo => "2",
            NormKind::InducedInf => "inf",
        }
    }

    pub fn parse(s: &str) -> Option<NormKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "one" => Some(NormKind::InducedOne),
            "2" | "two" | "spectral" => Some(NormKind::InducedTwo),
            "inf" | "infinity" | "max" => Some(NormKind::InducedInf),
            _ => None,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex>,
}

impl Matrix {
    /// Builds an `n×n` matrix from row-major entries, rejecting non-finite values.
    pub fn new(n: usize, data: Vec<Complex>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != n * n {
            return Err(LinalgError::Shape { n, expected: n * n, got: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite { row: k / n, col: k % n });
        }
        Ok(Matrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::Shape { n, expected: n * n, got: n * row.len() });
            }
            data.extend_from_slice(row);
        }
        Matrix::new(n, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        Matrix { n, data: vec![Complex::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::scalar(n, Complex::new(1.0, 0.0))
    }

    /// `c·I`.
    pub fn scalar(n: usize, c: Complex) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diagonal(diag: &[Complex]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.n + col]
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex]> {
        self.data.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    fn check_dims(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_dims(other)?;
        let n = self.n;
        let mut out = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix { n, data: out })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_dims(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { n: self.n, data })
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_dims(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { n: self.n, data })
    }

    pub fn scale(&self, c: Complex) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn conj_transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Matrix { n, data }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.n);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Induced matrix norm of the selected kind.
    pub fn norm(&self, kind: NormKind) -> f64 {
        let n = self.n;
        match kind {
            NormKind::InducedOne => (0..n)
                .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::InducedInf => self
                .rows()
                .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::InducedTwo => self.singular_values().into_iter().fold(0.0, f64::max),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// All singular values, computed by one-sided (Hestenes) Jacobi
    /// orthogonalisation of the columns. Unordered.
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n;
        // column-major working copy
        let mut cols: Vec<Vec<Complex>> = (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j]).collect())
            .collect();
        if n > 1 {
            for _ in 0..JACOBI_MAX_SWEEPS {
                let mut rotated = false;
                for i in 0..n - 1 {
                    for j in i + 1..n {
                        rotated |= jacobi_rotate(&mut cols, i, j);
                    }
                }
                if !rotated {
                    break;
                }
            }
        }
        cols.iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// Smallest singular value.
    pub fn min_singular_value(&self) -> f64 {
        self.singular_values().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Gauss-Jordan inverse with partial pivoting.
    ///
    /// Fails with [`LinalgError::Singular`] when a pivot falls below
    /// `PIVOT_EPS · ‖A‖_∞`.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        let n = self.n;
        let scale = self.norm(NormKind::InducedInf);
        let threshold = PIVOT_EPS * scale;
        if scale == 0.0 {
            return Err(LinalgError::Singular { pivot: 0.0, threshold });
        }
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(n).data;
        for col in 0..n {
            let (piv_row, piv_abs) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs < threshold || piv_abs == 0.0 {
                return Err(LinalgError::Singular { pivot: piv_abs, threshold });
            }
            if piv_row != col {
                for k in 0..n {
                    a.swap(col * n + k, piv_row * n + k);
                    inv.swap(col * n + k, piv_row * n + k);
                }
            }
            let p = a[col * n + col].inv();
            for k in 0..n {
                a[col * n + k] *= p;
                inv[col * n + k] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let (ak, ik) = (a[col * n + k], inv[col * n + k]);
                    a[r * n + k] -= f * ak;
                    inv[r * n + k] -= f * ik;
                }
            }
        }
        Ok(Matrix { n, data: inv })
    }

    /// `1 / ‖A⁻¹‖`, the lower bound `‖Au‖ ≥ ‖A⁻¹‖⁻¹‖u‖`.
    pub fn inv_norm_recip(&self, kind: NormKind) -> Result<f64, LinalgError> {
        Ok(1.0 / self.inverse()?.norm(kind))
    }
}

/// Orthogonalises columns `i` and `j`. Returns whether a rotation was applied.
fn jacobi_rotate(cols: &mut [Vec<Complex>], i: usize, j: usize) -> bool {
    let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
    let gamma: Complex = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
    let g = gamma.norm();
    if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
        return false;
    }
    // rotate the phase of column j so that <a_i, a_j> is real and positive
    let phase = gamma.conj() / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    let (left, right) = cols.split_at_mut(j);
    for (a, b) in left[i].iter_mut().zip(right[0].iter_mut()) {
        let bj = *b * phase;
        let ai = *a;
        *a = ai * c - bj * s;
        *b = ai * s + bj * c;
    }
    true
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;

    /// Panics on dimension mismatch; use [`Matrix::checked_mul`] otherwise.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix dimensions must agree")
    }
}
