//! Seeded random ensembles and the inclusion driver.
//!
//! Sample `i` of an ensemble is drawn from its own ChaCha stream (`seed`,
//! stream `i`), so samples can be generated and checked in any order, or in
//! parallel, and the report is still assembled in sample-index order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, BoundOptions, EigenvalueBound, HolderPair, Theorem, Variant};
use crate::linalg::{Complex, Matrix, NormKind};
use crate::oracle;
use crate::poly::{MatrixPolynomial, PolyError};
use crate::polyfile::PolynomialFile;

/// Default relative slack for the inclusion check.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

const RESAMPLE_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("sample {sample}: coefficient A_{coefficient} stayed singular after {RESAMPLE_CAP} draws")]
    GenerationExhausted { sample: usize, coefficient: usize },
    #[error("invalid ensemble configuration: {0}")]
    InvalidConfig(String),
    #[error("report has no evaluated bounds")]
    EmptyReport,
    #[error(transparent)]
    Polynomial(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Unit-variance circular complex Gaussian entries.
    ComplexGaussian,
    /// Entries uniform on the closed unit disk.
    UniformDisk,
    /// Real integers in `-3..=3`.
    IntegerSmall,
}

impl Distribution {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "complex-gaussian" | "gaussian" => Some(Distribution::ComplexGaussian),
            "uniform-disk" | "disk" => Some(Distribution::UniformDisk),
            "integer-small" | "integer" => Some(Distribution::IntegerSmall),
            _ => None,
        }
    }
}

/// Coupling between the coefficients of each sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    /// Independent coefficients.
    General,
    /// Every `A_j` is `c_0 I + c_1 B + c_2 B²` for one shared random `B`,
    /// so all coefficients commute.
    Commuting,
    /// Diagonal coefficients.
    Diagonal,
}

impl Structure {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "general" => Some(Structure::General),
            "commuting" => Some(Structure::Commuting),
            "diagonal" => Some(Structure::Diagonal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Inclusive range of matrix dimensions.
    pub n_range: (usize, usize),
    /// Inclusive range of degrees.
    pub m_range: (usize, usize),
    pub coefficient_scale: f64,
    pub distribution: Distribution,
    pub structure: Structure,
    /// Zero a random run `A_{p+1}, …, A_{m−1}` in each sample with `m ≥ 2`.
    pub lacunary: bool,
    pub enforce_nonsingular: bool,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            seed: 42,
            samples: 500,
            n_range: (1, 4),
            m_range: (1, 5),
            coefficient_scale: 1.0,
            distribution: Distribution::ComplexGaussian,
            structure: Structure::General,
            lacunary: false,
            enforce_nonsingular: true,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::InvalidConfig(msg.into()));
        if self.samples == 0 {
            return bad("samples must be at least 1");
        }
        if self.n_range.0 == 0 || self.n_range.0 > self.n_range.1 {
            return bad("n range must be nonempty and start at 1 or more");
        }
        if self.m_range.0 == 0 || self.m_range.0 > self.m_range.1 {
            return bad("m range must be nonempty and start at 1 or more");
        }
        if !(self.coefficient_scale.is_finite() && self.coefficient_scale > 0.0) {
            return bad("coefficient scale must be positive and finite");
        }
        Ok(())
    }
}

/// Deterministic, randomly addressable stream of sample polynomials.
#[derive(Debug, Clone)]
pub struct Ensemble {
    config: EnsembleConfig,
    next: usize,
}

/// The ensemble described by `config`.
pub fn generate(config: &EnsembleConfig) -> Result<Ensemble, HarnessError> {
    config.validate()?;
    Ok(Ensemble { config: config.clone(), next: 0 })
}

impl Ensemble {
    pub fn config(&self) -> &EnsembleConfig {
        &self.config
    }

    /// Sample `index`, independent of every other sample.
    pub fn sample(&self, index: usize) -> Result<MatrixPolynomial, HarnessError> {
        let cfg = &self.config;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index as u64);
        let n = rng.random_range(cfg.n_range.0..=cfg.n_range.1);
        let m = rng.random_range(cfg.m_range.0..=cfg.m_range.1);
        let shared = Matrix::new(n, (0..n * n).map(|_| self.entry(&mut rng)).collect())
            .expect("finite entries");
        let mut coeffs: Vec<Matrix> = (0..=m).map(|_| self.coefficient(&mut rng, n, &shared)).collect();
        if cfg.lacunary && m >= 2 {
            let gap = rng.random_range(0..=m - 2);
            for a in &mut coeffs[gap + 1..m] {
                *a = Matrix::zeros(n);
            }
        }
        if cfg.enforce_nonsingular {
            for j in [0, m] {
                let mut draws = 0;
                while coeffs[j].inverse().is_err() {
                    draws += 1;
                    if draws > RESAMPLE_CAP {
                        return Err(HarnessError::GenerationExhausted { sample: index, coefficient: j });
                    }
                    coeffs[j] = self.coefficient(&mut rng, n, &shared);
                }
            }
        }
        Ok(MatrixPolynomial::new(coeffs)?)
    }

    fn entry(&self, rng: &mut ChaCha8Rng) -> Complex {
        match self.config.distribution {
            Distribution::ComplexGaussian => {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
            Distribution::UniformDisk => {
                let r = rng.random::<f64>().sqrt();
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                Complex::from_polar(r, theta)
            }
            Distribution::IntegerSmall => Complex::new(rng.random_range(-3i32..=3) as f64, 0.0),
        }
    }

    fn coefficient(&self, rng: &mut ChaCha8Rng, n: usize, shared: &Matrix) -> Matrix {
        let scale = Complex::new(self.config.coefficient_scale, 0.0);
        let a = match self.config.structure {
            Structure::General => {
                Matrix::new(n, (0..n * n).map(|_| self.entry(rng)).collect()).expect("finite entries")
            }
            Structure::Diagonal => {
                Matrix::diagonal(&(0..n).map(|_| self.entry(rng)).collect::<Vec<_>>())
            }
            Structure::Commuting => {
                let (c0, c1, c2) = (self.entry(rng), self.entry(rng), self.entry(rng));
                let sq = shared * shared;
                &(&Matrix::scalar(n, c0) + &shared.scale(c1)) + &sq.scale(c2)
            }
        };
        a.scale(scale)
    }
}

impl Iterator for Ensemble {
    type Item = Result<MatrixPolynomial, HarnessError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.config.samples {
            return None;
        }
        let item = self.sample(self.next);
        self.next += 1;
        Some(item)
    }
}

/// How samples are scheduled. `Parallel` falls back to sequential execution
/// when the crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

fn map_indices<T, F>(count: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOptions {
    /// Relative slack: a bound passes when `radius − max|λ| ≥ −tolerance · radius`.
    pub tolerance: f64,
    pub variants: Vec<Variant>,
    /// Gap detection tolerance for T3.
    pub zero_tol: f64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tolerance: DEFAULT_TOLERANCE,
            variants: vec![Variant::CommutatorCorrected, Variant::AsStated],
            zero_tol: 0.0,
            execution: Execution::default(),
        }
    }
}

/// One evaluated bound against one sample's spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub sample: usize,
    pub theorem: Theorem,
    pub variant: Option<Variant>,
    pub norm: NormKind,
    pub holder: Option<HolderPair>,
    pub radius: f64,
    pub max_modulus: f64,
    /// `radius − max|λ|`.
    pub margin: f64,
    pub pass: bool,
    /// Whether this record counts toward the pass/fail aggregate
    /// (as-stated readings of T1/T4 do not).
    pub gated: bool,
    /// Root-solver residual and its bound, for B and T3.
    pub root_residual: Option<[f64; 2]>,
}

impl BoundRecord {
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

    pub fn tightness(&self) -> f64 {
        self.max_modulus / self.radius
    }

    fn key_cmp(&self, other: &BoundRecord) -> Ordering {
        self.norm
            .cmp(&other.norm)
            .then(self.theorem.cmp(&other.theorem))
            .then(self.variant.cmp(&other.variant))
            .then_with(|| {
                let p = |r: &BoundRecord| r.holder.map(|h| h.p()).unwrap_or(0.0);
                p(self).total_cmp(&p(other))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub eigenvalue_count: usize,
    pub max_modulus: f64,
    pub min_modulus: f64,
    /// Worst `σ_min(P(λ)) / limit` over the sample's eigenvalues.
    pub worst_certificate: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub sample: usize,
    pub stage: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub record: BoundRecord,
    pub polynomial: PolynomialFile,
}

/// Aggregate over all records with the same (norm, theorem, variant, p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub label: String,
    pub norm: NormKind,
    pub gated: bool,
    pub evaluated: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub mean_tightness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub config: EnsembleConfig,
    pub norms: Vec<NormKind>,
    pub p_grid: Vec<HolderPair>,
    pub tolerance: f64,
    pub samples: Vec<SampleSummary>,
    pub records: Vec<BoundRecord>,
    pub skips: Vec<SkipRecord>,
    pub violations: Vec<Violation>,
    pub summary: Vec<BoundSummary>,
}

impl InclusionReport {
    /// Violations among gated bounds.
    pub fn gated_violations(&self) -> usize {
        self.violations.iter().filter(|v| v.record.gated).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialise")
    }
}

struct SampleOutcome {
    summary: Option<SampleSummary>,
    records: Vec<BoundRecord>,
    skips: Vec<SkipRecord>,
    polynomial: Option<MatrixPolynomial>,
}

/// Checks every bound against the oracle spectrum of every sample.
pub fn run_inclusion(
    config: &EnsembleConfig,
    norms: &[NormKind],
    p_grid: &[HolderPair],
) -> Result<InclusionReport, HarnessError> {
    run_inclusion_with(config, norms, p_grid, &RunOptions::default())
}

pub fn run_inclusion_with(
    config: &EnsembleConfig,
    norms: &[NormKind],
    p_grid: &[HolderPair],
    opts: &RunOptions,
) -> Result<InclusionReport, HarnessError> {
    let ensemble = generate(config)?;
    let bound_opts = BoundOptions {
        p_grid: p_grid.to_vec(),
        variants: opts.variants.clone(),
        zero_tol: opts.zero_tol,
    };
    let outcomes = map_indices(config.samples, opts.execution, |i| {
        evaluate_sample(&ensemble, i, norms, &bound_opts, opts.tolerance)
    });

    let mut report = InclusionReport {
        config: config.clone(),
        norms: norms.to_vec(),
        p_grid: p_grid.to_vec(),
        tolerance: opts.tolerance,
        samples: Vec::new(),
        records: Vec::new(),
        skips: Vec::new(),
        violations: Vec::new(),
        summary: Vec::new(),
    };
    for outcome in outcomes {
        if let Some(p) = &outcome.polynomial {
            for r in outcome.records.iter().filter(|r| !r.pass) {
                report.violations.push(Violation {
                    record: r.clone(),
                    polynomial: PolynomialFile::from_polynomial(p),
                });
            }
        }
        report.samples.extend(outcome.summary);
        report.records.extend(outcome.records);
        report.skips.extend(outcome.skips);
    }
    report.summary = summarize(&report.records);
    Ok(report)
}

fn evaluate_sample(
    ensemble: &Ensemble,
    index: usize,
    norms: &[NormKind],
    opts: &BoundOptions,
    tolerance: f64,
) -> SampleOutcome {
    let mut out = SampleOutcome { summary: None, records: Vec::new(), skips: Vec::new(), polynomial: None };
    let skip = |stage: &str, reason: String| SkipRecord { sample: index, stage: stage.into(), reason };
    let p = match ensemble.sample(index) {
        Ok(p) => p,
        Err(e) => {
            out.skips.push(skip("generate", e.to_string()));
            return out;
        }
    };
    let spectrum = match oracle::eigenvalues(&p) {
        Ok(s) => s,
        Err(e) => {
            out.skips.push(skip("oracle", e.to_string()));
            return out;
        }
    };
    let worst_certificate = spectrum
        .residuals
        .iter()
        .zip(&spectrum.limits)
        .map(|(r, l)| r / l)
        .fold(0.0, f64::max);
    out.summary = Some(SampleSummary {
        index,
        n: p.dim(),
        m: p.degree(),
        eigenvalue_count: spectrum.len(),
        max_modulus: spectrum.max_modulus,
        min_modulus: spectrum.min_modulus(),
        worst_certificate,
        certified: spectrum.all_certified(),
    });
    for &norm in norms {
        let table = match bounds::evaluate_all(&p, norm, opts) {
            Ok(t) => t,
            Err(e) => {
                out.skips.push(skip("bounds", format!("norm {norm}: {e}")));
                continue;
            }
        };
        for b in &table.bounds {
            out.records.push(record(index, norm, b, spectrum.max_modulus, tolerance));
        }
    }
    out.polynomial = Some(p);
    out
}

fn record(sample: usize, norm: NormKind, b: &EigenvalueBound, max_modulus: f64, tol: f64) -> BoundRecord {
    let root_residual = match (b.detail.get("root_residual"), b.detail.get("root_tolerance")) {
        (Some(&r), Some(&t)) => Some([r, t]),
        _ => None,
    };
    BoundRecord {
        sample,
        theorem: b.theorem,
        variant: b.variant,
        norm,
        holder: b.holder,
        radius: b.radius,
        max_modulus,
        margin: b.radius - max_modulus,
        pass: b.contains(max_modulus, tol),
        gated: b.is_certified_form(),
        root_residual,
    }
}

fn sorted_refs(records: &[BoundRecord]) -> Vec<&BoundRecord> {
    let mut refs: Vec<&BoundRecord> = records.iter().collect();
    refs.sort_by(|a, b| a.key_cmp(b).then(a.sample.cmp(&b.sample)));
    refs
}

fn group_by_key<'a>(refs: &[&'a BoundRecord]) -> Vec<Vec<&'a BoundRecord>> {
    let mut groups: Vec<Vec<&BoundRecord>> = Vec::new();
    for &r in refs {
        match groups.last_mut() {
            Some(g) if g[0].key_cmp(r) == Ordering::Equal => g.push(r),
            _ => groups.push(vec![r]),
        }
    }
    groups
}

fn summarize(records: &[BoundRecord]) -> Vec<BoundSummary> {
    group_by_key(&sorted_refs(records))
        .into_iter()
        .map(|g| BoundSummary {
            label: g[0].label(),
            norm: g[0].norm,
            gated: g[0].gated,
            evaluated: g.len(),
            violations: g.iter().filter(|r| !r.pass).count(),
            min_margin: g.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
            mean_tightness: g.iter().map(|r| r.tightness()).sum::<f64>() / g.len() as f64,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessRow {
    pub label: String,
    pub norm: NormKind,
    pub gated: bool,
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Samples on which this bound attained the smallest gated radius (ties all count).
    pub wins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessTable {
    pub rows: Vec<TightnessRow>,
}

/// Tightness ratios `max|λ| / radius` and win counts per bound.
pub fn tightness_table(report: &InclusionReport) -> Result<TightnessTable, HarnessError> {
    if report.records.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    // smallest gated radius per (sample, norm)
    let mut best: BTreeMap<(usize, NormKind), f64> = BTreeMap::new();
    for r in report.records.iter().filter(|r| r.gated) {
        best.entry((r.sample, r.norm))
            .and_modify(|v| *v = v.min(r.radius))
            .or_insert(r.radius);
    }
    let best_of = |r: &BoundRecord| best.get(&(r.sample, r.norm)).copied();
    let rows = group_by_key(&sorted_refs(&report.records))
        .into_iter()
        .map(|g| {
            let ratios: Vec<f64> = g.iter().map(|r| r.tightness()).collect();
            let wins = g
                .iter()
                .filter(|r| r.gated)
                .filter(|r| best_of(r).is_some_and(|b| r.radius <= b * (1.0 + 1e-12)))
                .count();
            TightnessRow {
                label: g[0].label(),
                norm: g[0].norm,
                gated: g[0].gated,
                count: g.len(),
                mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
                min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                max: ratios.iter().copied().fold(0.0, f64::max),
                wins,
            }
        })
        .collect();
    Ok(TightnessTable { rows })
}

impl fmt::Display for TightnessTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<5} {:<22} {:>7} {:>10} {:>10} {:>10} {:>6}",
            "norm", "bound", "count", "mean", "min", "max", "wins"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<5} {:<22} {:>7} {:>10.6} {:>10.6} {:>10.6} {:>6}",
                r.norm.label(),
                r.label,
                r.count,
                r.mean,
                r.min,
                r.max,
                r.wins
            )?;
        }
        Ok(())
    }
}
