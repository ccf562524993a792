//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed even
//! when the criteria pass. Exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use eigenbound::bounds::{self, NormProfile};
use eigenbound::harness::{self, EnsembleConfig, Execution, InclusionReport, RunOptions, Structure};
use eigenbound::{oracle, roots, scalar};
use eigenbound::{Complex, HolderPair, Matrix, MatrixPolynomial, NormKind, Theorem, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances, fixed before any run.
const INCLUSION_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-12;
const LIMIT_TOL: f64 = 1e-2;
const MONOTONE_SLACK: f64 = 1e-12;
const ROOT_RESIDUAL: f64 = 1e-12;
const ZERO_EIGENVALUE: f64 = 1e-8;

// One seed per criterion, fixed before any run.
const SEED_INCLUSION: u64 = 1001;
const SEED_SCALAR: u64 = 1002;
const SEED_LIMIT: u64 = 1003;
const SEED_LACUNARY_IDENTITY: u64 = 1004;
const SEED_CONTAINMENT: u64 = 1005;
const SEED_ROOTS: u64 = 1006;
const SEED_ORACLE: u64 = 1007;
const SEED_DETERMINISM: u64 = 1008;

const SAMPLES_PER_CONFIG: usize = 500;
const SMALL_SUITE: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn grid() -> Vec<HolderPair> {
    [2.0, 4.0, 16.0].iter().map(|&p| HolderPair::new(p).unwrap()).collect()
}

fn ensemble(seed: u64, samples: usize, n: (usize, usize), m: (usize, usize)) -> EnsembleConfig {
    EnsembleConfig { seed, samples, n_range: n, m_range: m, ..EnsembleConfig::default() }
}

fn samples(cfg: &EnsembleConfig) -> Vec<MatrixPolynomial> {
    harness::generate(cfg).unwrap().map(Result::unwrap).collect()
}

fn inclusion_configs() -> Vec<(String, EnsembleConfig)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for m in 1..=5 {
            out.push((format!("n={n},m={m}"), ensemble(SEED_INCLUSION, SAMPLES_PER_CONFIG, (n, n), (m, m))));
        }
    }
    let lacunary = EnsembleConfig { lacunary: true, ..ensemble(SEED_INCLUSION, SAMPLES_PER_CONFIG, (1, 4), (2, 5)) };
    out.push(("lacunary".into(), lacunary));
    out
}

fn inclusion_reports() -> &'static [(String, InclusionReport)] {
    static REPORTS: OnceLock<Vec<(String, InclusionReport)>> = OnceLock::new();
    REPORTS.get_or_init(|| {
        let opts = RunOptions { tolerance: INCLUSION_TOL, ..RunOptions::default() };
        inclusion_configs()
            .into_iter()
            .map(|(label, cfg)| {
                let report = harness::run_inclusion_with(&cfg, &NormKind::ALL, &grid(), &opts).unwrap();
                (label, report)
            })
            .collect()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn scalar_coeffs(p: &MatrixPolynomial) -> Vec<Complex> {
    p.coeffs().iter().map(|a| a.get(0, 0)).collect()
}

fn inclusion_suite() -> Outcome {
    let reports = inclusion_reports();
    let mut gated = 0;
    let mut records = 0;
    let mut as_stated = 0;
    let mut skips = 0;
    let mut theorems = std::collections::BTreeSet::new();
    for (_, r) in reports {
        gated += r.gated_violations();
        as_stated += r.violations.len() - r.gated_violations();
        records += r.records.len();
        skips += r.skips.len();
        theorems.extend(r.records.iter().filter(|x| x.gated).map(|x| x.theorem));
    }
    let all_present = [Theorem::B, Theorem::C, Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4]
        .iter()
        .all(|t| theorems.contains(t));
    outcome(
        gated == 0 && skips == 0 && all_present,
        format!(
            "{} configs x {SAMPLES_PER_CONFIG} samples x 3 norms, {records} records, {gated} gated violations, \
             {skips} skipped samples ({as_stated} as-stated misses, not gated)",
            reports.len()
        ),
    )
}

fn scalar_reduction() -> Outcome {
    let cfg = ensemble(SEED_SCALAR, SMALL_SUITE, (1, 1), (1, 5));
    let mut worst_t1: f64 = 0.0;
    let mut worst_t2: f64 = 0.0;
    for p in samples(&cfg) {
        let c = scalar_coeffs(&p);
        for norm in NormKind::ALL {
            for h in grid() {
                for v in [Variant::AsStated, Variant::CommutatorCorrected] {
                    let t1 = bounds::bound_theorem_1(&p, norm, h, v).unwrap();
                    worst_t1 = worst_t1.max(rel(t1.radius, scalar::mohammad_bound(&c, h).unwrap().radius));
                }
            }
            for h in grid().into_iter().chain([HolderPair::infinite()]) {
                let t2 = bounds::bound_theorem_2(&p, norm, h).unwrap();
                worst_t2 = worst_t2.max(rel(t2.radius, scalar::montel_bound(&c, h).unwrap().radius));
            }
        }
    }
    outcome(
        worst_t1 <= IDENTITY_TOL && worst_t2 <= IDENTITY_TOL,
        format!("{SMALL_SUITE} scalar samples, max rel diff T1 vs Mohammad {worst_t1:.2e}, T2 vs Montel {worst_t2:.2e}"),
    )
}

fn limit_samples() -> Vec<MatrixPolynomial> {
    samples(&ensemble(SEED_LIMIT, SMALL_SUITE, (1, 4), (1, 5)))
}

fn t2_radius(p: &MatrixPolynomial, h: HolderPair) -> f64 {
    bounds::bound_theorem_2(p, NormKind::InducedInf, h).unwrap().radius
}

fn limit_to_c() -> Outcome {
    let mut worst_limit: f64 = 0.0;
    let mut exact = true;
    for p in limit_samples() {
        let c = bounds::bound_theorem_c(&p, NormKind::InducedInf).unwrap().radius;
        worst_limit = worst_limit.max((t2_radius(&p, HolderPair::new(1024.0).unwrap()) - c).abs() / c);
        exact &= t2_radius(&p, HolderPair::infinite()) == c;
    }
    outcome(
        worst_limit <= LIMIT_TOL && exact,
        format!("{SMALL_SUITE} samples, max |T2(p=1024) - C|/C = {worst_limit:.3e}, T2(p=inf) == C bitwise: {exact}"),
    )
}

fn limit_monotone() -> Outcome {
    let ps: Vec<HolderPair> = (1..=10).map(|k| HolderPair::new(2f64.powi(k)).unwrap()).collect();
    let mut offenders = 0;
    let mut worst_excess: f64 = 0.0;
    for p in limit_samples() {
        let c = bounds::bound_theorem_c(&p, NormKind::InducedInf).unwrap().radius;
        let gaps: Vec<f64> = ps.iter().map(|&h| (t2_radius(&p, h) - c).abs()).collect();
        let excess = gaps.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        if excess > MONOTONE_SLACK {
            offenders += 1;
            worst_excess = worst_excess.max(excess);
        }
    }
    outcome(
        offenders == 0,
        format!(
            "|T2(p) - C| non-increasing over p = 2,4,...,1024: {offenders}/{SMALL_SUITE} samples break it \
             (largest step increase {worst_excess:.3e})"
        ),
    )
}

fn lacunary_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in samples(&ensemble(SEED_LACUNARY_IDENTITY, SMALL_SUITE, (1, 4), (1, 5))) {
        for norm in NormKind::ALL {
            let t3 = bounds::bound_theorem_3(&p, norm, p.degree() - 1).unwrap().radius;
            let c = bounds::bound_theorem_c(&p, norm).unwrap().radius;
            worst = worst.max(rel(t3, c));
        }
    }
    outcome(worst <= IDENTITY_TOL, format!("{SMALL_SUITE} samples x 3 norms, max rel diff T3(gap=m-1) vs C {worst:.2e}"))
}

fn scalar_containment() -> Outcome {
    let mut strict = true;
    let mut closest = f64::INFINITY;
    for p in samples(&ensemble(SEED_CONTAINMENT, SMALL_SUITE, (1, 1), (1, 5))) {
        let c = scalar_coeffs(&p);
        let s = scalar::cauchy_radius(&c).unwrap().radius;
        let one_plus_m = scalar::cauchy_simple(&c).unwrap().radius;
        let b = bounds::bound_theorem_b(&p, NormKind::InducedInf).unwrap().radius;
        let cc = bounds::bound_theorem_c(&p, NormKind::InducedInf).unwrap().radius;
        strict &= s < one_plus_m && b < cc;
        closest = closest.min(one_plus_m - s);
    }
    outcome(strict, format!("{SMALL_SUITE} scalar polynomials, rho < 1 + M strictly; smallest gap {closest:.3e}"))
}

/// Residual of the Cauchy polynomial at `root`, evaluated here from the norms.
fn cauchy_residual(lead: f64, norms: &[f64], root: f64) -> f64 {
    let m = norms.len();
    let tail: f64 = norms.iter().enumerate().map(|(j, a)| a * root.powi(j as i32)).sum();
    (lead * root.powi(m as i32) - tail).abs() / (lead * root.max(1.0).powi(m as i32))
}

fn trinomial_residual(d: i32, m: f64, root: f64) -> f64 {
    (root.powi(d) - root.powi(d - 1) - m).abs() / root.max(1.0).powi(d)
}

fn root_solvers() -> Outcome {
    let mut polys: Vec<MatrixPolynomial> = Vec::new();
    for (_, cfg) in inclusion_configs() {
        polys.extend(samples(&cfg));
    }
    for (seed, n) in [(SEED_SCALAR, (1, 1)), (SEED_LIMIT, (1, 4)), (SEED_LACUNARY_IDENTITY, (1, 4)), (SEED_CONTAINMENT, (1, 1))] {
        polys.extend(samples(&ensemble(seed, SMALL_SUITE, n, (1, 5))));
    }
    let mut calls = 0usize;
    let mut worst: f64 = 0.0;
    let mut bracket_ok = true;
    let mut trinomial_check = |d: i32, m_const: f64, root: f64, worst: &mut f64| {
        *worst = worst.max(trinomial_residual(d, m_const, root));
        if m_const > 0.0 {
            bracket_ok &= root > 1.0 && root <= 1.0 + m_const;
        }
    };
    for p in &polys {
        let m = p.degree();
        for norm in NormKind::ALL {
            let prof = NormProfile::new(p, norm).unwrap();
            let b = prof.theorem_b().unwrap().radius;
            worst = worst.max(cauchy_residual(prof.leading_lower(), &prof.coeff_norms[..m], b));
            calls += 1;
            for gap in [bounds::detect_gap(p, 0.0), m - 1] {
                let t3 = prof.theorem_3(gap).unwrap();
                let m_const = t3.detail["M"];
                trinomial_check((m - gap) as i32, m_const, t3.radius, &mut worst);
                calls += 1;
            }
        }
        if p.dim() == 1 {
            let c = scalar_coeffs(p);
            let s = scalar::cauchy_radius(&c).unwrap().radius;
            let norms: Vec<f64> = c[..m].iter().map(|a| a.norm()).collect();
            worst = worst.max(cauchy_residual(c[m].norm(), &norms, s));
            calls += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_ROOTS);
    for _ in 0..2000 {
        let d = rng.random_range(1..=12);
        let m_const = 10f64.powf(rng.random_range(-8.0..8.0));
        let r = roots::trinomial_positive_root(d, m_const).unwrap();
        trinomial_check(d as i32, m_const, r.root, &mut worst);
        calls += 1;
    }
    outcome(
        worst <= ROOT_RESIDUAL && bracket_ok,
        format!("{calls} solver calls, max scaled residual {worst:.2e}, trinomial root in (1, 1+M]: {bracket_ok}"),
    )
}

fn oracle_certification() -> Outcome {
    let mut count_ok = true;
    let mut certified = true;
    let mut checked = 0;
    for (_, r) in inclusion_reports() {
        for s in &r.samples {
            count_ok &= s.eigenvalue_count == s.n * s.m;
            certified &= s.certified;
            checked += 1;
        }
    }
    let mut worst_zero: f64 = 0.0;
    for p in samples(&ensemble(SEED_ORACLE, SMALL_SUITE, (1, 4), (1, 5))) {
        let n = p.dim();
        let mut coeffs = p.coeffs().to_vec();
        // duplicate the first column into the last, or zero a scalar A_0
        let a0 = &coeffs[0];
        let data = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| if n == 1 { Complex::new(0.0, 0.0) } else if j == n - 1 { a0.get(i, 0) } else { a0.get(i, j) })
            .collect();
        coeffs[0] = Matrix::new(n, data).unwrap();
        let q = MatrixPolynomial::new(coeffs).unwrap();
        let s = oracle::eigenvalues(&q).unwrap();
        count_ok &= s.len() == n * q.degree();
        certified &= s.all_certified();
        worst_zero = worst_zero.max(s.min_modulus());
        checked += 1;
    }
    outcome(
        count_ok && certified && worst_zero <= ZERO_EIGENVALUE,
        format!(
            "{checked} spectra, all certified: {certified}, count nm: {count_ok}, \
             singular A_0 gives min |lambda| <= {worst_zero:.2e}"
        ),
    )
}

fn determinism() -> Outcome {
    let cfg = EnsembleConfig { structure: Structure::General, ..ensemble(SEED_DETERMINISM, 200, (1, 4), (1, 5)) };
    let run = |execution| {
        let opts = RunOptions { execution, ..RunOptions::default() };
        harness::run_inclusion_with(&cfg, &NormKind::ALL, &grid(), &opts).unwrap().to_json()
    };
    let a = run(Execution::Parallel);
    let b = run(Execution::Parallel);
    let c = run(Execution::Sequential);
    outcome(a == b && a == c, format!("200-sample report, {} bytes, identical across 2 parallel runs and 1 sequential run", a.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 inclusion suite", inclusion_suite),
        ("2 scalar reduction", scalar_reduction),
        ("3a limit p -> inf equals C", limit_to_c),
        ("3b monotone approach to C", limit_monotone),
        ("4 lacunary bound at gap m-1 equals C", lacunary_identity),
        ("5 scalar Cauchy containment", scalar_containment),
        ("6 root solver residuals", root_solvers),
        ("7 oracle certification", oracle_certification),
        ("8 report determinism", determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
