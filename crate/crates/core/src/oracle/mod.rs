//! Reference spectrum of a matrix polynomial.
//!
//! With `A_m` nonsingular, the `nm` eigenvalues of `P` are those of the block
//! companion matrix of `A_m⁻¹A_{m−1}, …, A_m⁻¹A_0`. Each computed eigenvalue is
//! certified a posteriori by the smallest singular value of `P(λ)`.

pub mod schur;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Complex, LinalgError, Matrix, NormKind};
use crate::poly::MatrixPolynomial;

/// Relative certification level: `σ_min(P(λ)) ≤ CERT_EPS · Σ_j ‖A_j‖₂ max(1, |λ|)^j`.
pub const CERT_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("degree {0} polynomial has no eigenvalues")]
    InvalidDegree(usize),
    #[error("leading coefficient A_m is singular: {0}")]
    SingularLeading(LinalgError),
    #[error("QR iteration did not converge after {steps} steps ({} of {expected} eigenvalues found)", partial.len())]
    NoConvergence { partial: Vec<Complex>, expected: usize, steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionForm {
    pub dimension: usize,
    pub matrix: Matrix,
}

/// Block companion matrix: first block row `−A_m⁻¹A_{m−1}, …, −A_m⁻¹A_0`,
/// identity blocks on the block subdiagonal.
pub fn linearize(p: &MatrixPolynomial) -> Result<CompanionForm, OracleError> {
    let (n, m) = (p.dim(), p.degree());
    if m == 0 {
        return Err(OracleError::InvalidDegree(0));
    }
    let inv = p.leading().inverse().map_err(OracleError::SingularLeading)?;
    let dim = n * m;
    let mut data = vec![Complex::new(0.0, 0.0); dim * dim];
    for block in 0..m {
        let b = (&inv * &p.coeffs()[m - 1 - block]).scale(Complex::new(-1.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                data[i * dim + block * n + j] = b.get(i, j);
            }
        }
    }
    for i in n..dim {
        data[i * dim + i - n] = Complex::new(1.0, 0.0);
    }
    let matrix = Matrix::new(dim, data).map_err(OracleError::SingularLeading)?;
    Ok(CompanionForm { dimension: dim, matrix })
}

/// Eigenvalues with their residual certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex>,
    /// `σ_min(P(λ))` per eigenvalue.
    pub residuals: Vec<f64>,
    /// Certification threshold per eigenvalue.
    pub limits: Vec<f64>,
    pub max_modulus: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn certified(&self, k: usize) -> bool {
        self.residuals[k] <= self.limits[k]
    }

    pub fn all_certified(&self) -> bool {
        (0..self.len()).all(|k| self.certified(k))
    }

    pub fn min_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues sorted by increasing modulus.
    pub fn sorted_by_modulus(&self) -> Vec<Complex> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        v
    }
}

/// QR step budget for an `N×N` companion matrix.
pub fn step_cap(dim: usize) -> usize {
    30 * dim * dim
}

/// All `nm` eigenvalues of `P`.
pub fn eigenvalues(p: &MatrixPolynomial) -> Result<Spectrum, OracleError> {
    let companion = linearize(p)?;
    let dim = companion.dimension;
    let eig = schur::eigenvalues(dim, companion.matrix.as_slice(), step_cap(dim)).map_err(|e| {
        OracleError::NoConvergence { partial: e.found, expected: dim, steps: e.steps }
    })?;
    let norms: Vec<f64> = p.coeffs().iter().map(|a| a.norm(NormKind::InducedTwo)).collect();
    let residuals = eig.iter().map(|&lam| residual(p, lam)).collect();
    let limits = eig.iter().map(|&lam| certification_limit(&norms, lam)).collect();
    let max_modulus = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Spectrum { eigenvalues: eig, residuals, limits, max_modulus })
}

/// `σ_min(P(λ))`; zero exactly at eigenvalues.
pub fn residual(p: &MatrixPolynomial, lam: Complex) -> f64 {
    p.evaluate(lam).min_singular_value()
}

fn certification_limit(norms: &[f64], lam: Complex) -> f64 {
    let r = lam.norm().max(1.0);
    let mut pow = 1.0;
    let mut sum = 0.0;
    for a in norms {
        sum += a * pow;
        pow *= r;
    }
    CERT_EPS * sum
}
