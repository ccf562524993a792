//! Unique positive roots of Cauchy-type polynomials.
//!
//! Both solvers bisect a guaranteed bracket down to width `BISECT_WIDTH`,
//! then polish with Newton steps, dropping back to bisection whenever a
//! Newton step leaves the current bracket.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bracket width at which bisection hands over to Newton.
pub const BISECT_WIDTH: f64 = 1e-8;

/// Relative residual target: `|f(root)| ≤ RESIDUAL_TOL · lead · max(1, root)^degree`.
pub const RESIDUAL_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("all tail coefficients are zero; the only root is 0")]
    AllZeroTail,
    #[error("non-finite or negative input")]
    NonFiniteInput,
    #[error("leading coefficient must be positive, got {0}")]
    NonPositiveLead(f64),
    #[error("invalid degree {0}")]
    InvalidDegree(i64),
    #[error("trinomial constant must be positive, got {0}")]
    NonPositiveM(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: f64,
    /// `|f(root)|`.
    pub residual: f64,
    /// The residual bound this root was solved to.
    pub tolerance: f64,
    pub iterations: usize,
}

impl RootResult {
    pub fn within_tolerance(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Coefficients of `lead·z^m − c_{m−1} z^{m−1} − … − c_0`.
#[derive(Debug, Clone)]
pub struct CauchyPolynomial<'a> {
    lead: f64,
    /// `(c_{m−1}, …, c_0)`, highest degree first.
    tail: &'a [f64],
}

impl<'a> CauchyPolynomial<'a> {
    pub fn new(lead: f64, tail: &'a [f64]) -> Self {
        CauchyPolynomial { lead, tail }
    }

    pub fn degree(&self) -> usize {
        self.tail.len()
    }

    /// Value and derivative by Horner's rule.
    pub fn eval(&self, z: f64) -> (f64, f64) {
        let mut f = self.lead;
        let mut df = 0.0;
        for &c in self.tail {
            df = df * z + f;
            f = f * z - c;
        }
        (f, df)
    }
}

/// Unique positive root of `lead·z^m − c_{m−1}z^{m−1} − ⋯ − c_1 z − c_0`.
///
/// `tail` holds `(c_{m−1}, …, c_0)`. The root lies in `(0, 1 + max_j c_j/lead)`.
pub fn cauchy_positive_root(lead: f64, tail: &[f64]) -> Result<RootResult, RootError> {
    if !lead.is_finite() || tail.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(RootError::NonFiniteInput);
    }
    if lead <= 0.0 {
        return Err(RootError::NonPositiveLead(lead));
    }
    if tail.is_empty() {
        return Err(RootError::InvalidDegree(0));
    }
    if tail.iter().all(|&c| c == 0.0) {
        return Err(RootError::AllZeroTail);
    }
    let poly = CauchyPolynomial::new(lead, tail);
    let m = poly.degree() as i32;
    let hi = 1.0 + tail.iter().fold(0.0_f64, |a, &c| a.max(c / lead));
    let tol = |z: f64| RESIDUAL_TOL * lead * z.max(1.0).powi(m);
    Ok(solve_bracketed(|z| poly.eval(z), 0.0, hi, tol))
}

/// Unique root `k > 1` of `x^d − x^{d−1} − M`; exactly `1 + M` when `d = 1`.
pub fn trinomial_positive_root(d: i64, m_const: f64) -> Result<RootResult, RootError> {
    if d < 1 {
        return Err(RootError::InvalidDegree(d));
    }
    if !m_const.is_finite() {
        return Err(RootError::NonFiniteInput);
    }
    if m_const <= 0.0 {
        return Err(RootError::NonPositiveM(m_const));
    }
    if d == 1 {
        return Ok(RootResult { root: 1.0 + m_const, residual: 0.0, tolerance: 0.0, iterations: 0 });
    }
    let d = d as i32;
    let f = |x: f64| {
        let lower = x.powi(d - 1);
        let value = lower * (x - 1.0) - m_const;
        let deriv = lower * (d as f64) - (d - 1) as f64 * x.powi(d - 2);
        (value, deriv)
    };
    let tol = |x: f64| RESIDUAL_TOL * x.max(1.0).powi(d);
    Ok(solve_bracketed(f, 1.0, 1.0 + m_const, tol))
}

/// Root of `f` on `[lo, hi]` with `f(lo) ≤ 0 ≤ f(hi)` and a single sign change.
fn solve_bracketed<F, T>(f: F, mut lo: f64, mut hi: f64, tol: T) -> RootResult
where
    F: Fn(f64) -> (f64, f64),
    T: Fn(f64) -> f64,
{
    let mut iterations = 0;
    let finish = |x: f64, iterations: usize| {
        let (v, _) = f(x);
        RootResult { root: x, residual: v.abs(), tolerance: tol(x), iterations }
    };
    let (f_hi, _) = f(hi);
    if f_hi == 0.0 {
        return finish(hi, 0);
    }

    while hi - lo > BISECT_WIDTH * hi.max(1.0) && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (v, _) = f(mid);
        if v == 0.0 {
            return finish(mid, iterations);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton polish from the upper end, guarded by the bracket
    let mut x = hi;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (v, dv) = f(x);
        if v.abs() <= tol(x) {
            return finish(x, iterations);
        }
        if v < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let step = if dv != 0.0 { x - v / dv } else { f64::NAN };
        let next = if step.is_finite() && step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if next == x || hi <= lo || next <= lo || next >= hi {
            // bracket exhausted at machine precision
            return finish(x, iterations);
        }
        x = next;
    }
    finish(x, iterations)
}

/// Root of a strictly increasing function `g` on `(lo, hi]` with `g(hi) > 0`.
///
/// Returns the upper end of the final bracket so the result never undershoots
/// the true root.
pub(crate) fn increasing_root<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
