//! Zero-inclusion radii for scalar polynomials `p(z) = Σ a_j z^j`.
//!
//! These are coded directly on the complex coefficients, independently of the
//! matrix path, so that `n = 1` matrix polynomials can be checked against them.

use crate::bounds::{BoundError, EigenvalueBound, HolderPair, Theorem};
use crate::linalg::Complex;
use crate::roots;

fn leading(coeffs: &[Complex]) -> Result<(usize, Complex), BoundError> {
    let m = coeffs.len().saturating_sub(1);
    if m == 0 {
        return Err(BoundError::InvalidDegree(0));
    }
    let lead = coeffs[m];
    if lead.norm() == 0.0 {
        return Err(BoundError::Degenerate("leading coefficient is zero".into()));
    }
    Ok((m, lead))
}

fn bound(theorem: Theorem, radius: f64, strict: bool) -> EigenvalueBound {
    EigenvalueBound {
        radius,
        strict,
        theorem,
        norm: None,
        holder: None,
        variant: None,
        detail: Default::default(),
    }
}

/// Unique positive root `s` of `|a_m|z^m − |a_{m−1}|z^{m−1} − ⋯ − |a_0|`.
pub fn cauchy_radius(coeffs: &[Complex]) -> Result<EigenvalueBound, BoundError> {
    let (m, lead) = leading(coeffs)?;
    let tail: Vec<f64> = coeffs[..m].iter().rev().map(|a| a.norm()).collect();
    let r = roots::cauchy_positive_root(lead.norm(), &tail)?;
    let mut b = bound(Theorem::A, r.root, true);
    b.detail.insert("s".into(), r.root);
    b.detail.insert("root_residual".into(), r.residual);
    Ok(b)
}

/// `1 + max_{0≤j<m} |a_j / a_m|`.
pub fn cauchy_simple(coeffs: &[Complex]) -> Result<EigenvalueBound, BoundError> {
    let (m, lead) = leading(coeffs)?;
    let big_m = coeffs[..m].iter().map(|a| (a / lead).norm()).fold(0.0, f64::max);
    let mut b = bound(Theorem::A, 1.0 + big_m, true);
    b.detail.insert("M".into(), big_m);
    Ok(b)
}

/// `[½(1 + (1 + 4α^q)^{1/2})]^{1/q}` with
/// `α = (Σ_{r=1}^m (|a_{m−1}a_{m−r} − a_m a_{m−r−1}| / |a_m|²)^p)^{1/p}`.
pub fn mohammad_bound(coeffs: &[Complex], h: HolderPair) -> Result<EigenvalueBound, BoundError> {
    let (m, lead) = leading(coeffs)?;
    if h.is_infinite() {
        return Err(BoundError::InvalidHolder(h.p()));
    }
    let a = |j: isize| if j < 0 { Complex::new(0.0, 0.0) } else { coeffs[j as usize] };
    let mi = m as isize;
    let lead_sq = lead.norm_sqr();
    let sum: f64 = (1..=mi)
        .map(|r| ((a(mi - 1) * a(mi - r) - lead * a(mi - r - 1)).norm() / lead_sq).powf(h.p()))
        .sum();
    let alpha = sum.powf(1.0 / h.p());
    let radius = (0.5 * (1.0 + (1.0 + 4.0 * alpha.powf(h.q())).sqrt())).powf(1.0 / h.q());
    let mut b = bound(Theorem::Mohammad, radius, true);
    b.holder = Some(h);
    b.detail.insert("alpha_p".into(), alpha);
    Ok(b)
}

/// `(1 + (Σ_{j<m} |a_j/a_m|^p)^{q/p})^{1/q}`.
pub fn montel_bound(coeffs: &[Complex], h: HolderPair) -> Result<EigenvalueBound, BoundError> {
    let (m, lead) = leading(coeffs)?;
    let radius = if h.is_infinite() {
        1.0 + coeffs[..m].iter().map(|a| (a / lead).norm()).fold(0.0, f64::max)
    } else {
        let sum: f64 = coeffs[..m].iter().map(|a| (a / lead).norm().powf(h.p())).sum();
        (1.0 + sum.powf(h.q() / h.p())).powf(1.0 / h.q())
    };
    let mut b = bound(Theorem::Montel, radius, true);
    b.holder = Some(h);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(xs: &[f64]) -> Vec<Complex> {
        xs.iter().map(|&x| Complex::new(x, 0.0)).collect()
    }

    #[test]
    fn cauchy_contains_roots_of_quadratic() {
        // z^2 + 3z + 2 = (z + 1)(z + 2)
        let c = re(&[2.0, 3.0, 1.0]);
        let s = cauchy_radius(&c).unwrap().radius;
        assert!((s - (3.0 + 17f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(s > 2.0 && s < cauchy_simple(&c).unwrap().radius);
        assert_eq!(cauchy_simple(&c).unwrap().radius, 4.0);
    }

    #[test]
    fn constant_term_counts_in_simple_bound() {
        // z^2 − 100 has roots ±10; excluding a_0 from M would give radius 1
        let c = re(&[-100.0, 0.0, 1.0]);
        assert_eq!(cauchy_simple(&c).unwrap().radius, 101.0);
    }

    #[test]
    fn montel_and_mohammad_examples() {
        let h2 = HolderPair::new(2.0).unwrap();
        let c = re(&[1.0, 1.0, 1.0]);
        assert!((montel_bound(&c, h2).unwrap().radius - 3f64.sqrt()).abs() < 1e-15);
        let c = re(&[1.0, 2.0, 1.0]);
        let expected = (0.5 * (1.0 + 53f64.sqrt())).sqrt();
        assert!((mohammad_bound(&c, h2).unwrap().radius - expected).abs() < 1e-15);
        assert!(matches!(leading(&re(&[1.0])), Err(BoundError::InvalidDegree(0))));
    }
}
