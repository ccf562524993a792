//! Matrix polynomials `P(z) = Σ_{j=0}^m A_j z^j`.

use thiserror::Error;

use crate::linalg::{Complex, LinalgError, Matrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("a matrix polynomial needs at least one coefficient")]
    NoCoefficients,
    #[error("coefficient A_{index} is {got}x{got}, expected {expected}x{expected}")]
    MixedDimensions { index: usize, expected: usize, got: usize },
    #[error("leading coefficient A_{0} is the zero matrix")]
    ZeroLeading(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Coefficients `A_0, …, A_m` of a square matrix polynomial of degree `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<Matrix>,
    zero: Matrix,
}

impl MatrixPolynomial {
    /// `coeffs[j]` is `A_j`. The last coefficient must be nonzero.
    pub fn new(coeffs: Vec<Matrix>) -> Result<Self, PolyError> {
        let first = coeffs.first().ok_or(PolyError::NoCoefficients)?;
        let n = first.dim();
        for (index, a) in coeffs.iter().enumerate() {
            if a.dim() != n {
                return Err(PolyError::MixedDimensions { index, expected: n, got: a.dim() });
            }
        }
        let m = coeffs.len() - 1;
        if coeffs[m].is_zero() {
            return Err(PolyError::ZeroLeading(m));
        }
        Ok(MatrixPolynomial { coeffs, zero: Matrix::zeros(n) })
    }

    /// Scalar polynomial `Σ a_j z^j` as a 1×1 matrix polynomial.
    pub fn scalar(coeffs: &[Complex]) -> Result<Self, PolyError> {
        let mats = coeffs
            .iter()
            .map(|&a| Matrix::new(1, vec![a]))
            .collect::<Result<Vec<_>, _>>()?;
        MatrixPolynomial::new(mats)
    }

    pub fn scalar_real(coeffs: &[f64]) -> Result<Self, PolyError> {
        let c: Vec<Complex> = coeffs.iter().map(|&x| Complex::new(x, 0.0)).collect();
        MatrixPolynomial::scalar(&c)
    }

    /// `Σ_j c_j I z^j`: every coefficient a multiple of the identity.
    pub fn identity_multiples(n: usize, coeffs: &[f64]) -> Result<Self, PolyError> {
        let mats = coeffs.iter().map(|&x| Matrix::scalar(n, Complex::new(x, 0.0))).collect();
        MatrixPolynomial::new(mats)
    }

    pub fn dim(&self) -> usize {
        self.zero.dim()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Matrix {
        &self.coeffs[self.degree()]
    }

    /// `A_j`, with `A_j = 0` outside `0..=m` (in particular `A_{−1} = 0`).
    pub fn coefficient(&self, j: isize) -> &Matrix {
        if j < 0 || j as usize > self.degree() {
            &self.zero
        } else {
            &self.coeffs[j as usize]
        }
    }

    /// `P(z)` by Horner's rule.
    pub fn evaluate(&self, z: Complex) -> Matrix {
        let mut acc = self.leading().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(z) + a;
        }
        acc
    }

    /// `c·P`.
    pub fn scale(&self, c: Complex) -> MatrixPolynomial {
        MatrixPolynomial {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
            zero: self.zero.clone(),
        }
    }

    /// Whether every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_real)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_convention() {
        let p = MatrixPolynomial::identity_multiples(2, &[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.dim(), 2);
        assert!(p.coefficient(-1).is_zero());
        assert!(p.coefficient(3).is_zero());
        assert_eq!(p.coefficient(1), &Matrix::scalar(2, Complex::new(2.0, 0.0)));
    }

    #[test]
    fn evaluate_scalar() {
        // z^2 + 3z + 2 at z = i: -1 + 3i + 2
        let p = MatrixPolynomial::scalar_real(&[2.0, 3.0, 1.0]).unwrap();
        let v = p.evaluate(Complex::new(0.0, 1.0));
        assert_eq!(v.get(0, 0), Complex::new(1.0, 3.0));
    }

    #[test]
    fn validation() {
        assert_eq!(MatrixPolynomial::new(vec![]), Err(PolyError::NoCoefficients));
        let err = MatrixPolynomial::new(vec![Matrix::identity(2), Matrix::identity(3)]).unwrap_err();
        assert_eq!(err, PolyError::MixedDimensions { index: 1, expected: 2, got: 3 });
        let err = MatrixPolynomial::new(vec![Matrix::identity(2), Matrix::zeros(2)]).unwrap_err();
        assert_eq!(err, PolyError::ZeroLeading(1));
    }
}
