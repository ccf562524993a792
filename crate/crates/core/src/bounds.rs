//! Eigenvalue inclusion radii for matrix polynomials.
//!
//! Every bound has the shape `|λ| < R` (or `≤` for the Cauchy radius) and is
//! built from induced norms of the coefficients, normalised by the lower
//! bound `‖A_m⁻¹‖⁻¹` on the leading coefficient, or by `‖(A_m²)⁻¹‖⁻¹` for the
//! bounds that multiply `P(z)` by `A_{m−1} − A_m z`.
//!
//! The latter product also produces the commutator `A_{m−1}A_m − A_mA_{m−1}`
//! at `z^m`, which vanishes only when those two coefficients commute. The
//! [`Variant::AsStated`] radii ignore it; the [`Variant::CommutatorCorrected`]
//! radii account for it and reduce to the same closed forms when it is zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, NormKind};
use crate::poly::MatrixPolynomial;
use crate::roots::{self, RootError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("degree {0} polynomial has no eigenvalues to bound")]
    InvalidDegree(usize),
    #[error("leading coefficient A_m is singular: {0}")]
    SingularLeading(LinalgError),
    #[error("Hölder exponent must satisfy p > 1, got {0}")]
    InvalidHolder(f64),
    #[error("gap index {gap} out of range for degree {degree}")]
    InvalidGap { gap: usize, degree: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Which inclusion result produced a radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Scalar Cauchy bound (unique positive root, and its `1 + M` relaxation).
    A,
    /// Matrix Cauchy radius: unique positive root with norm coefficients.
    B,
    /// `1 + ‖A_m⁻¹‖ max_j ‖A_j‖`.
    C,
    /// Hölder bound on the coefficients of `(A_{m−1} − A_m z)P(z)`.
    T1,
    /// Hölder bound on the normalised coefficient norms.
    T2,
    /// Lacunary trinomial bound.
    T3,
    /// Quadratic bound on the coefficients of `(A_{m−1} − A_m z)P(z)`.
    T4,
    /// Scalar bound obtained from T1 with `n = 1`.
    Mohammad,
    /// Scalar bound obtained from T2 with `n = 1`.
    Montel,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::A => "A",
            Theorem::B => "B",
            Theorem::C => "C",
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
            Theorem::Mohammad => "Mohammad",
            Theorem::Montel => "Montel",
        }
    }

    pub fn parse(s: &str) -> Option<Theorem> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Some(Theorem::A),
            "b" => Some(Theorem::B),
            "c" => Some(Theorem::C),
            "t1" | "1" => Some(Theorem::T1),
            "t2" | "2" => Some(Theorem::T2),
            "t3" | "3" => Some(Theorem::T3),
            "t4" | "4" => Some(Theorem::T4),
            "mohammad" => Some(Theorem::Mohammad),
            "montel" => Some(Theorem::Montel),
            _ => None,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Index-range reading of T1 and T4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Sum/maximum over `r = 1..m` only, closed-form radius. Not a valid
    /// bound when `A_{m−1}` and `A_m` do not commute.
    AsStated,
    /// Includes the commutator term; always a valid bound.
    CommutatorCorrected,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::AsStated => "as-stated",
            Variant::CommutatorCorrected => "corrected",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Conjugate exponents `1/p + 1/q = 1`, `p ∈ (1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HolderRepr", into = "HolderRepr")]
pub struct HolderPair {
    p: f64,
    q: f64,
}

impl HolderPair {
    pub fn new(p: f64) -> Result<Self, BoundError> {
        if p.is_nan() || p <= 1.0 {
            return Err(BoundError::InvalidHolder(p));
        }
        if p == f64::INFINITY {
            return Ok(HolderPair::infinite());
        }
        Ok(HolderPair { p, q: p / (p - 1.0) })
    }

    /// `p = ∞`, `q = 1`.
    pub fn infinite() -> Self {
        HolderPair { p: f64::INFINITY, q: 1.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.p.is_infinite()
    }
}

impl fmt::Display for HolderPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HolderRepr {
    p: PValue,
    q: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PValue {
    Finite(f64),
    Named(String),
}

impl From<HolderPair> for HolderRepr {
    fn from(h: HolderPair) -> Self {
        let p = if h.is_infinite() { PValue::Named("inf".into()) } else { PValue::Finite(h.p) };
        HolderRepr { p, q: h.q }
    }
}

impl TryFrom<HolderRepr> for HolderPair {
    type Error = String;

    fn try_from(r: HolderRepr) -> Result<Self, String> {
        let p = match r.p {
            PValue::Finite(p) => p,
            PValue::Named(s) if s == "inf" => f64::INFINITY,
            PValue::Named(s) => return Err(format!("invalid Hölder exponent {s:?}")),
        };
        HolderPair::new(p).map_err(|e| e.to_string())
    }
}

/// An inclusion disk `|z| < radius` (or `≤` when not strict) centred at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueBound {
    pub radius: f64,
    pub strict: bool,
    pub theorem: Theorem,
    /// `None` for the scalar specialisations, where every induced norm is `|·|`.
    pub norm: Option<NormKind>,
    pub holder: Option<HolderPair>,
    pub variant: Option<Variant>,
    /// Intermediate quantities (`M`, `alpha_p`, `A_p`, `rho`, `k`, …).
    pub detail: BTreeMap<String, f64>,
}

impl EigenvalueBound {
    fn new(theorem: Theorem, norm: Option<NormKind>, radius: f64, strict: bool) -> Self {
        EigenvalueBound {
            radius,
            strict,
            theorem,
            norm,
            holder: None,
            variant: None,
            detail: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    /// Whether this bound is a valid inclusion claim (everything except the
    /// as-stated readings of T1 and T4).
    pub fn is_certified_form(&self) -> bool {
        self.variant != Some(Variant::AsStated)
    }

    /// Display label such as `T2(p=4)` or `T4[as-stated]`.
    pub fn label(&self) -> String {
        let mut s = self.theorem.label().to_string();
        if let Some(h) = &self.holder {
            s.push_str(&format!("(p={h})"));
        }
        if self.variant == Some(Variant::AsStated) {
            s.push_str("[as-stated]");
        }
        s
    }

    /// Whether `modulus` lies in the disk, up to `rel_tol · radius`.
    pub fn contains(&self, modulus: f64, rel_tol: f64) -> bool {
        self.radius - modulus >= -rel_tol * self.radius
    }
}

/// `A_{m−1}A_{m−r} − A_m A_{m−r−1}` for one `r ∈ 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProductTerm {
    pub r: usize,
    pub value: Matrix,
}

/// Coefficients of `(A_{m−1} − A_m z)P(z)` below the leading `−A_m² z^{m+1}`:
/// term `r` multiplies `z^{m−r}`. Term 0 is the commutator `[A_{m−1}, A_m]`.
pub fn product_terms(p: &MatrixPolynomial) -> Vec<CoefficientProductTerm> {
    let m = p.degree() as isize;
    let a_m = p.leading();
    let a_m1 = p.coefficient(m - 1);
    (0..=m)
        .map(|r| {
            let value = &(a_m1 * p.coefficient(m - r)) - &(a_m * p.coefficient(m - r - 1));
            CoefficientProductTerm { r: r as usize, value }
        })
        .collect()
}

/// Largest `p ≤ m−1` with `‖A_j‖_∞ ≤ zero_tol` for every `p < j < m`.
pub fn detect_gap(p: &MatrixPolynomial, zero_tol: f64) -> usize {
    let m = p.degree();
    if m == 0 {
        return 0;
    }
    let mut gap = m - 1;
    while gap > 0 && p.coeffs()[gap].norm(NormKind::InducedInf) <= zero_tol {
        gap -= 1;
    }
    gap
}

/// Norm data shared by all bounds for one `(P, ‖·‖)` pair.
#[derive(Debug, Clone)]
pub struct NormProfile {
    pub norm: NormKind,
    /// `‖A_j‖` for `j = 0..=m`.
    pub coeff_norms: Vec<f64>,
    /// `‖A_m⁻¹‖`.
    pub inv_leading: f64,
    /// `‖(A_m²)⁻¹‖`.
    pub inv_leading_sq: f64,
    /// `‖A_{m−1}A_{m−r} − A_m A_{m−r−1}‖ · ‖(A_m²)⁻¹‖`, `r = 0..=m`.
    pub product_ratios: Vec<f64>,
}

impl NormProfile {
    pub fn new(p: &MatrixPolynomial, norm: NormKind) -> Result<Self, BoundError> {
        let m = p.degree();
        if m == 0 {
            return Err(BoundError::InvalidDegree(0));
        }
        let a_m = p.leading();
        let inv_leading = a_m.inverse().map_err(BoundError::SingularLeading)?.norm(norm);
        let inv_leading_sq = (a_m * a_m).inverse().map_err(BoundError::SingularLeading)?.norm(norm);
        let product_ratios = product_terms(p)
            .iter()
            .map(|t| t.value.norm(norm) * inv_leading_sq)
            .collect();
        Ok(NormProfile {
            norm,
            coeff_norms: p.coeffs().iter().map(|a| a.norm(norm)).collect(),
            inv_leading,
            inv_leading_sq,
            product_ratios,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeff_norms.len() - 1
    }

    /// `‖A_m⁻¹‖⁻¹`.
    pub fn leading_lower(&self) -> f64 {
        1.0 / self.inv_leading
    }

    /// `‖A_j‖ / ‖A_m⁻¹‖⁻¹` for `j = 0..m−1`.
    pub fn normalized_lower(&self) -> Vec<f64> {
        let m = self.degree();
        self.coeff_norms[..m].iter().map(|a| a * self.inv_leading).collect()
    }

    pub fn theorem_b(&self) -> Result<EigenvalueBound, BoundError> {
        let lead = self.leading_lower();
        let tail: Vec<f64> = self.coeff_norms[..self.degree()].iter().rev().copied().collect();
        let root = roots::cauchy_positive_root(lead, &tail).map_err(|e| match e {
            RootError::AllZeroTail => {
                BoundError::Degenerate("all lower coefficients vanish; every eigenvalue is 0".into())
            }
            other => BoundError::Root(other),
        })?;
        Ok(EigenvalueBound::new(Theorem::B, Some(self.norm), root.root, false)
            .with("rho", root.root)
            .with("lead", lead)
            .with("root_residual", root.residual)
            .with("root_tolerance", root.tolerance))
    }

    pub fn theorem_c(&self) -> EigenvalueBound {
        let m_const = max_of(&self.normalized_lower());
        EigenvalueBound::new(Theorem::C, Some(self.norm), 1.0 + m_const, true).with("M", m_const)
    }

    pub fn theorem_1(&self, h: HolderPair, variant: Variant) -> Result<EigenvalueBound, BoundError> {
        if h.is_infinite() {
            return Err(BoundError::InvalidHolder(h.p()));
        }
        let (p, q) = (h.p(), h.q());
        let commutator = self.product_ratios[0];
        let alpha = lp_norm(&self.product_ratios[1..], p);
        let alpha_full = lp_norm(&self.product_ratios, p);
        let radius = match variant {
            Variant::AsStated => holder_quadratic_radius(alpha, q),
            Variant::CommutatorCorrected if commutator == 0.0 => holder_quadratic_radius(alpha, q),
            Variant::CommutatorCorrected => corrected_t1_radius(commutator, alpha, q),
        };
        let mut b = EigenvalueBound::new(Theorem::T1, Some(self.norm), radius, true)
            .with("alpha_p", alpha)
            .with("alpha_p_with_commutator", alpha_full)
            .with("commutator", commutator);
        b.holder = Some(h);
        b.variant = Some(variant);
        Ok(b)
    }

    pub fn theorem_2(&self, h: HolderPair) -> EigenvalueBound {
        let x = self.normalized_lower();
        let (radius, a_p) = if h.is_infinite() {
            let m_const = max_of(&x);
            (1.0 + m_const, m_const)
        } else {
            let a_p = lp_norm(&x, h.p());
            (lq_pair(a_p, h.q()), a_p)
        };
        let mut b = EigenvalueBound::new(Theorem::T2, Some(self.norm), radius, true).with("A_p", a_p);
        b.holder = Some(h);
        b
    }

    pub fn theorem_3(&self, gap: usize) -> Result<EigenvalueBound, BoundError> {
        let m = self.degree();
        if gap >= m {
            return Err(BoundError::InvalidGap { gap, degree: m });
        }
        let x = self.normalized_lower();
        let m_const = max_of(&x[..=gap]);
        let dropped = max_of(&self.coeff_norms[gap + 1..m]);
        let d = (m - gap) as i64;
        let base = |radius: f64| {
            EigenvalueBound::new(Theorem::T3, Some(self.norm), radius, true)
                .with("M", m_const)
                .with("gap_p", gap as f64)
                .with("d", d as f64)
                .with("dropped_norm", dropped)
        };
        if m_const == 0.0 {
            return Ok(base(1.0).with("k", 1.0).with("degenerate", 1.0));
        }
        let root = roots::trinomial_positive_root(d, m_const)?;
        Ok(base(root.root)
            .with("k", root.root)
            .with("root_residual", root.residual)
            .with("root_tolerance", root.tolerance))
    }

    pub fn theorem_4(&self, variant: Variant) -> EigenvalueBound {
        let commutator = self.product_ratios[0];
        let m_const = max_of(&self.product_ratios[1..]);
        let radius = match variant {
            Variant::AsStated => 0.5 * (1.0 + (1.0 + 4.0 * m_const).sqrt()),
            // (|z| − 1)(|z| − c) > M, which is the closed form above when c = 0
            Variant::CommutatorCorrected => {
                let c = commutator;
                0.5 * ((1.0 + c) + ((1.0 - c) * (1.0 - c) + 4.0 * m_const).sqrt())
            }
        };
        let mut b = EigenvalueBound::new(Theorem::T4, Some(self.norm), radius, true)
            .with("M", m_const)
            .with("M_with_commutator", m_const.max(commutator))
            .with("commutator", commutator);
        b.variant = Some(variant);
        b
    }
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

/// `(Σ x_i^p)^{1/p}`, evaluated relative to the largest entry so that neither
/// large ratios nor large `p` overflow.
pub(crate) fn lp_norm(xs: &[f64], p: f64) -> f64 {
    let mx = max_of(xs);
    if mx == 0.0 || !mx.is_finite() {
        return mx;
    }
    let s: f64 = xs.iter().map(|&x| (p * (x / mx).ln()).exp()).sum();
    mx * (s.ln() / p).exp()
}

/// `(1 + a^q)^{1/q}` without overflow.
fn lq_pair(a: f64, q: f64) -> f64 {
    if a <= 1.0 {
        (1.0 + a.powf(q)).powf(1.0 / q)
    } else {
        a * (1.0 + a.powf(-q)).powf(1.0 / q)
    }
}

/// `[½(1 + (1 + 4α^q)^{1/2})]^{1/q}`.
fn holder_quadratic_radius(alpha: f64, q: f64) -> f64 {
    let log_beta = q * alpha.ln();
    if log_beta < 600.0 {
        let beta = log_beta.exp();
        (0.5 * (1.0 + (1.0 + 4.0 * beta).sqrt())).powf(1.0 / q)
    } else {
        // ½(1 + √(1 + 4β)) = √β (1 + O(β^{-1/2}))
        (0.5 * log_beta / q).exp() * (1.0 + 0.5 * (-0.5 * log_beta).exp()).powf(1.0 / q)
    }
}

/// Smallest `s ≥ 1` with `s − c − α (s^q − 1)^{−1/q} ≥ 0`, where `c` is the
/// normalised commutator norm. For `c = 0` this is the closed-form radius.
fn corrected_t1_radius(commutator: f64, alpha: f64, q: f64) -> f64 {
    if alpha == 0.0 {
        return commutator.max(1.0);
    }
    let g = |s: f64| s - commutator - alpha * (-(q * s.ln()).exp_m1().ln() / q).exp();
    let hi = (1.0 + commutator + alpha).max(2.0);
    roots::increasing_root(g, 1.0, hi)
}

/// Which bounds [`evaluate_all`] computes.
#[derive(Debug, Clone)]
pub struct BoundOptions {
    pub p_grid: Vec<HolderPair>,
    pub variants: Vec<Variant>,
    /// Tolerance for lacunary gap detection in T3.
    pub zero_tol: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            p_grid: [2.0, 4.0, 16.0].iter().map(|&p| HolderPair::new(p).unwrap()).collect(),
            variants: vec![Variant::CommutatorCorrected],
            zero_tol: 0.0,
        }
    }
}

/// All bounds evaluated for one `(P, ‖·‖)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub norm: NormKind,
    pub bounds: Vec<EigenvalueBound>,
    /// Bounds that could not be formed, with the reason.
    pub skipped: Vec<SkippedBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedBound {
    pub theorem: Theorem,
    pub reason: String,
}

/// Bound tables for one polynomial under several norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub tables: Vec<BoundTable>,
}

impl BoundTable {
    /// Smallest certified radius (as-stated readings excluded).
    pub fn best(&self) -> Option<&EigenvalueBound> {
        self.bounds
            .iter()
            .filter(|b| b.is_certified_form())
            .min_by(|a, b| a.radius.total_cmp(&b.radius))
    }
}

/// Evaluates B, C, T1 and T2 over the Hölder grid, T3 at the detected gap and T4.
pub fn evaluate_all(
    p: &MatrixPolynomial,
    norm: NormKind,
    opts: &BoundOptions,
) -> Result<BoundTable, BoundError> {
    let profile = NormProfile::new(p, norm)?;
    let mut bounds = Vec::new();
    let mut skipped = Vec::new();
    match profile.theorem_b() {
        Ok(b) => bounds.push(b),
        Err(e) => skipped.push(SkippedBound { theorem: Theorem::B, reason: e.to_string() }),
    }
    bounds.push(profile.theorem_c());
    for &h in &opts.p_grid {
        if h.is_infinite() {
            continue;
        }
        for &v in &opts.variants {
            bounds.push(profile.theorem_1(h, v)?);
        }
    }
    for &h in &opts.p_grid {
        bounds.push(profile.theorem_2(h));
    }
    bounds.push(profile.theorem_3(detect_gap(p, opts.zero_tol))?);
    for &v in &opts.variants {
        bounds.push(profile.theorem_4(v));
    }
    Ok(BoundTable { norm, bounds, skipped })
}

/// Smallest certified radius over the default bound set and `p_grid`, with the full table.
pub fn best_bound(
    p: &MatrixPolynomial,
    norm: NormKind,
    p_grid: &[f64],
) -> Result<(EigenvalueBound, BoundTable), BoundError> {
    let p_grid = p_grid.iter().map(|&x| HolderPair::new(x)).collect::<Result<Vec<_>, _>>()?;
    let opts = BoundOptions { p_grid, ..BoundOptions::default() };
    let table = evaluate_all(p, norm, &opts)?;
    let best = table.best().cloned().expect("theorem C is always available");
    Ok((best, table))
}

pub fn bound_theorem_b(p: &MatrixPolynomial, norm: NormKind) -> Result<EigenvalueBound, BoundError> {
    NormProfile::new(p, norm)?.theorem_b()
}

pub fn bound_theorem_c(p: &MatrixPolynomial, norm: NormKind) -> Result<EigenvalueBound, BoundError> {
    Ok(NormProfile::new(p, norm)?.theorem_c())
}

pub fn bound_theorem_1(
    p: &MatrixPolynomial,
    norm: NormKind,
    h: HolderPair,
    variant: Variant,
) -> Result<EigenvalueBound, BoundError> {
    NormProfile::new(p, norm)?.theorem_1(h, variant)
}

pub fn bound_theorem_2(
    p: &MatrixPolynomial,
    norm: NormKind,
    h: HolderPair,
) -> Result<EigenvalueBound, BoundError> {
    Ok(NormProfile::new(p, norm)?.theorem_2(h))
}

/// Lacunary bound for `P(z) = A_m z^m + A_gap z^gap + ⋯ + A_0`.
///
/// Coefficients strictly between `gap` and `m` are assumed zero; their
/// largest norm is reported as `dropped_norm` in the detail map.
pub fn bound_theorem_3(
    p: &MatrixPolynomial,
    norm: NormKind,
    gap: usize,
) -> Result<EigenvalueBound, BoundError> {
    NormProfile::new(p, norm)?.theorem_3(gap)
}

pub fn bound_theorem_4(
    p: &MatrixPolynomial,
    norm: NormKind,
    variant: Variant,
) -> Result<EigenvalueBound, BoundError> {
    Ok(NormProfile::new(p, norm)?.theorem_4(variant))
}
