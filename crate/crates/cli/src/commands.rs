use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use eigenbound::bounds::{self, BoundOptions, BoundTable, BoundsReport};
use eigenbound::harness::{
    self, BoundRecord, Distribution, EnsembleConfig, Execution, RunOptions, Structure,
};
use eigenbound::{oracle, MatrixPolynomial, PolynomialFile, Spectrum, Theorem};
use serde::{Deserialize, Serialize};

use crate::{parse_range, BoundSettings, CliError, EnsembleFlags};

fn load(path: &Path) -> Result<MatrixPolynomial, CliError> {
    let src = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file = PolynomialFile::parse(&src).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    file.to_polynomial().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn tables(p: &MatrixPolynomial, s: &BoundSettings) -> Result<Vec<BoundTable>, CliError> {
    let opts = BoundOptions { p_grid: s.p_grid.clone(), variants: s.variants.clone(), zero_tol: s.zero_tol };
    s.norms
        .iter()
        .map(|&norm| bounds::evaluate_all(p, norm, &opts).map_err(CliError::from))
        .collect()
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Internal(e.to_string())),
        _ => Ok(()),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))
}

fn fmt_detail(detail: &std::collections::BTreeMap<String, f64>) -> String {
    detail.iter().map(|(k, v)| format!("{k}={v:.6e}")).collect::<Vec<_>>().join(" ")
}

pub fn bounds(path: &Path, s: &BoundSettings, json: bool) -> Result<(), CliError> {
    let p = load(path)?;
    let report = BoundsReport { n: p.dim(), m: p.degree(), tables: tables(&p, s)? };
    if json {
        emit(&(to_json(&report)? + "\n"))?;
        return Ok(());
    }
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, m = {}", report.n, report.m);
    for t in &report.tables {
        let _ = writeln!(out, "\nnorm {}", t.norm);
        for b in &t.bounds {
            let rel = if b.strict { "<" } else { "<=" };
            let _ = writeln!(out, "  {:<20} |z| {rel:<2} {:.4}   {}", b.label(), b.radius, fmt_detail(&b.detail));
        }
        for sk in &t.skipped {
            let _ = writeln!(out, "  {:<20} skipped: {}", sk.theorem.label(), sk.reason);
        }
        if let Some(best) = t.best() {
            let _ = writeln!(out, "  best: {} = {:.4}", best.label(), best.radius);
        }
    }
    emit(&out)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct EigenvalueEntry {
    re: f64,
    im: f64,
    modulus: f64,
    residual: f64,
    limit: f64,
    certified: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct EigsReport {
    n: usize,
    m: usize,
    max_modulus: f64,
    eigenvalues: Vec<EigenvalueEntry>,
}

fn eigen_entries(s: &Spectrum) -> Vec<EigenvalueEntry> {
    (0..s.len())
        .map(|k| {
            let z = s.eigenvalues[k];
            EigenvalueEntry {
                re: z.re,
                im: z.im,
                modulus: z.norm(),
                residual: s.residuals[k],
                limit: s.limits[k],
                certified: s.certified(k),
            }
        })
        .collect()
}

pub fn eigs(path: &Path, json: bool) -> Result<(), CliError> {
    let p = load(path)?;
    let spectrum = oracle::eigenvalues(&p)?;
    let report = EigsReport {
        n: p.dim(),
        m: p.degree(),
        max_modulus: spectrum.max_modulus,
        eigenvalues: eigen_entries(&spectrum),
    };
    let uncertified = report.eigenvalues.iter().filter(|e| !e.certified).count();
    if uncertified > 0 {
        eprintln!("warning: {uncertified} eigenvalue(s) failed the residual certificate");
    }
    if json {
        emit(&(to_json(&report)? + "\n"))?;
        return Ok(());
    }
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, m = {}, {} eigenvalues", report.n, report.m, report.eigenvalues.len());
    let _ = writeln!(out, "{:>24} {:>24} {:>14} {:>11} {:>11}  ok", "re", "im", "|lambda|", "sigma_min", "limit");
    for e in &report.eigenvalues {
        let _ = writeln!(
            out,
            "{:>24.16e} {:>24.16e} {:>14.10} {:>11.3e} {:>11.3e}  {}",
            e.re,
            e.im,
            e.modulus,
            e.residual,
            e.limit,
            if e.certified { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(out, "max modulus: {:.10}", report.max_modulus);
    emit(&out)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckReport {
    tolerance: f64,
    max_modulus: f64,
    eigenvalues: Vec<EigenvalueEntry>,
    records: Vec<BoundRecord>,
    /// Failing records counted against the exit code.
    violations: Vec<BoundRecord>,
    /// Present when `violations` is nonempty.
    polynomial: Option<PolynomialFile>,
}

pub fn check(
    path: &Path,
    s: &BoundSettings,
    strict_as_stated: bool,
    tolerance: f64,
    json: bool,
) -> Result<(), CliError> {
    let p = load(path)?;
    let spectrum = oracle::eigenvalues(&p)?;
    let max_modulus = spectrum.max_modulus;
    let mut records = Vec::new();
    for t in tables(&p, s)? {
        for b in &t.bounds {
            records.push(BoundRecord {
                sample: 0,
                theorem: b.theorem,
                variant: b.variant,
                norm: t.norm,
                holder: b.holder,
                radius: b.radius,
                max_modulus,
                margin: b.radius - max_modulus,
                pass: b.contains(max_modulus, tolerance),
                gated: b.is_certified_form(),
                root_residual: None,
            });
        }
    }
    let violations: Vec<BoundRecord> =
        records.iter().filter(|r| !r.pass && (r.gated || strict_as_stated)).cloned().collect();
    let report = CheckReport {
        tolerance,
        max_modulus,
        eigenvalues: eigen_entries(&spectrum),
        polynomial: (!violations.is_empty()).then(|| PolynomialFile::from_polynomial(&p)),
        records,
        violations,
    };

    if json {
        emit(&(to_json(&report)? + "\n"))?;
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "max |lambda| = {max_modulus:.10} over {} eigenvalues", spectrum.len());
        let _ = writeln!(out, "{:<5} {:<22} {:>14} {:>14}  status", "norm", "bound", "radius", "margin");
        for r in &report.records {
            let status = match (r.pass, r.gated) {
                (true, _) => "ok",
                (false, true) => "VIOLATION",
                (false, false) if strict_as_stated => "VIOLATION (as-stated)",
                (false, false) => "miss (as-stated, not gated)",
            };
            let _ = writeln!(out, "{:<5} {:<22} {:>14.10} {:>14.6e}  {status}", r.norm.label(), r.label(), r.radius, r.margin);
        }
        if !report.violations.is_empty() {
            let evidence = serde_json::json!({
                "violations": report.violations,
                "polynomial": report.polynomial,
            });
            let _ = writeln!(out, "evidence:\n{}", to_json(&evidence)?);
        }
        emit(&out)?;
    }
    if report.violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation)
    }
}

pub fn random(
    flags: &EnsembleFlags,
    s: &BoundSettings,
    out_dir: &Path,
    strict_as_stated: bool,
    sequential: bool,
    tolerance: f64,
) -> Result<(), CliError> {
    let distribution = Distribution::parse(&flags.distribution)
        .ok_or_else(|| CliError::Input(format!("unknown distribution `{}`", flags.distribution)))?;
    let structure = Structure::parse(&flags.structure)
        .ok_or_else(|| CliError::Input(format!("unknown structure `{}`", flags.structure)))?;
    let config = EnsembleConfig {
        seed: flags.seed,
        samples: flags.samples,
        n_range: parse_range("n", &flags.n)?,
        m_range: parse_range("m", &flags.m)?,
        coefficient_scale: flags.scale,
        distribution,
        structure,
        lacunary: flags.lacunary,
        enforce_nonsingular: true,
    };
    let opts = RunOptions {
        tolerance,
        variants: s.variants.clone(),
        zero_tol: s.zero_tol,
        execution: if sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let report = harness::run_inclusion_with(&config, &s.norms, &s.p_grid, &opts)?;

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let write = |name: &str, body: &str| {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
    };
    write("report.json", &report.to_json())?;
    let mut written = Vec::new();
    for v in &report.violations {
        if written.last() != Some(&v.record.sample) {
            written.push(v.record.sample);
            write(&format!("violation-{:06}.json", v.record.sample), &v.polynomial.to_json())?;
        }
    }

    let gated = report.gated_violations();
    let as_stated = report.violations.len() - gated;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} samples evaluated, {} skipped, {} records",
        report.samples.len(),
        report.skips.len(),
        report.records.len()
    );
    let _ = writeln!(out, "gated violations: {gated}, as-stated misses: {as_stated}");
    if let Ok(table) = harness::tightness_table(&report) {
        let _ = write!(out, "{table}");
    }
    let _ = writeln!(out, "report written to {}", out_dir.join("report.json").display());
    emit(&out)?;
    if gated > 0 || (strict_as_stated && as_stated > 0) {
        Err(CliError::Violation)
    } else {
        Ok(())
    }
}

pub const PLOT_HEADER: &str = "record,tag,norm,strict,x,y,r";

pub fn plotdata(path: &Path, s: &BoundSettings, theorem: Option<Theorem>) -> Result<(), CliError> {
    let p = load(path)?;
    let spectrum = oracle::eigenvalues(&p)?;
    let mut out = String::new();
    let _ = writeln!(out, "{PLOT_HEADER}");
    for t in tables(&p, s)? {
        for b in t.bounds.iter().filter(|b| theorem.is_none_or(|th| b.theorem == th)) {
            let _ = writeln!(out, "disk,{},{},{},0,0,{}", b.label(), t.norm, b.strict, b.radius);
        }
    }
    for z in &spectrum.eigenvalues {
        let _ = writeln!(out, "point,eigenvalue,,,{},{},{}", z.re, z.im, z.norm());
    }
    emit(&out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use eigenbound::Variant;

    #[test]
    fn bounds_report_round_trips() {
        let p = MatrixPolynomial::identity_multiples(2, &[1.0, 1.0, 1.0]).unwrap();
        let s = BoundSettings {
            norms: eigenbound::NormKind::ALL.to_vec(),
            p_grid: vec![eigenbound::HolderPair::new(2.0).unwrap(), eigenbound::HolderPair::infinite()],
            variants: vec![Variant::CommutatorCorrected, Variant::AsStated],
            zero_tol: 0.0,
        };
        let report = BoundsReport { n: 2, m: 2, tables: tables(&p, &s).unwrap() };
        let text = to_json(&report).unwrap();
        let back: BoundsReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}
