//! On-disk matrix polynomial documents.
//!
//! Two encodings of the same schema are accepted:
//!
//! * JSON: `{"n": 2, "m": 1, "coefficients": [A_0, A_1]}` where each `A_j` is a
//!   list of rows and each entry an `[re, im]` pair.
//! * Text: a key-value header followed by one block per coefficient,
//!
//!   ```text
//!   # comments start with '#'
//!   n: 2
//!   m: 1
//!   A0:
//!     1 0,-2
//!     0 1
//!   A1:
//!     1 0
//!     0 1
//!   ```
//!
//!   Entries are `re` or `re,im` tokens separated by whitespace.
//!
//! Writers emit 17 significant digits so that documents parse back bit-exactly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Complex, Matrix};
use crate::poly::{MatrixPolynomial, PolyError};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("coefficient A_{index} entry ({row}, {col}) is not finite")]
    NonFinite { index: usize, row: usize, col: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Polynomial(#[from] PolyError),
}

/// Serialised form of a [`MatrixPolynomial`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub n: usize,
    pub m: usize,
    /// `coefficients[j][row][col] = [re, im]`.
    pub coefficients: Vec<Vec<Vec<[f64; 2]>>>,
}

impl PolynomialFile {
    pub fn from_polynomial(p: &MatrixPolynomial) -> Self {
        let coefficients = p
            .coeffs()
            .iter()
            .map(|a| a.rows().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect())
            .collect();
        PolynomialFile { n: p.dim(), m: p.degree(), coefficients }
    }

    /// Validates the document and builds the polynomial.
    pub fn to_polynomial(&self) -> Result<MatrixPolynomial, FileError> {
        let (n, m) = (self.n, self.m);
        if n == 0 {
            return Err(FileError::Shape("n must be at least 1".into()));
        }
        if m == 0 {
            return Err(FileError::ZeroDegree);
        }
        if self.coefficients.len() != m + 1 {
            return Err(FileError::Shape(format!(
                "expected {} coefficient matrices for m = {m}, found {}",
                m + 1,
                self.coefficients.len()
            )));
        }
        let mut mats = Vec::with_capacity(m + 1);
        for (index, grid) in self.coefficients.iter().enumerate() {
            if grid.len() != n || grid.iter().any(|row| row.len() != n) {
                return Err(FileError::Shape(format!("coefficient A_{index} is not {n}x{n}")));
            }
            let mut data = Vec::with_capacity(n * n);
            for (row, entries) in grid.iter().enumerate() {
                for (col, &[re, im]) in entries.iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(FileError::NonFinite { index, row, col });
                    }
                    data.push(Complex::new(re, im));
                }
            }
            mats.push(Matrix::new(n, data).map_err(PolyError::from)?);
        }
        Ok(MatrixPolynomial::new(mats)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomial documents always serialise")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "m: {}", self.m);
        for (j, grid) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "A{j}:");
            for row in grid {
                let cells: Vec<String> =
                    row.iter().map(|[re, im]| format!("{re:.16e},{im:.16e}")).collect();
                let _ = writeln!(out, "  {}", cells.join(" "));
            }
        }
        out
    }

    /// Parses either encoding; JSON is recognised by a leading `{`.
    pub fn parse(src: &str) -> Result<Self, FileError> {
        if src.trim_start().starts_with('{') {
            Ok(serde_json::from_str(src)?)
        } else {
            parse_text(src)
        }
    }
}

type Grid = Vec<Vec<[f64; 2]>>;

fn parse_text(src: &str) -> Result<PolynomialFile, FileError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut blocks: Vec<(usize, usize, Grid)> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| FileError::Syntax { line: line_no, message };
        if let Some(head) = line.strip_suffix(':') {
            let j = head
                .strip_prefix('A')
                .and_then(|s| s.trim_start_matches('_').parse::<usize>().ok())
                .ok_or_else(|| syntax(format!("expected a block header like `A0:`, got `{line}`")))?;
            blocks.push((j, line_no, Vec::new()));
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| syntax(format!("`{}` is not a non-negative integer", value.trim())))?;
            match key.trim() {
                "n" => n = Some(value),
                "m" => m = Some(value),
                other => return Err(syntax(format!("unknown key `{other}`"))),
            }
            continue;
        }
        let (_, _, rows) = blocks
            .last_mut()
            .ok_or_else(|| syntax("matrix row outside a coefficient block".into()))?;
        let row = line
            .split_whitespace()
            .map(|tok| parse_entry(tok).ok_or_else(|| syntax(format!("bad entry `{tok}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }

    let n = n.ok_or_else(|| FileError::Shape("missing `n:`".into()))?;
    let m = m.ok_or_else(|| FileError::Shape("missing `m:`".into()))?;
    let mut coefficients = vec![None; m + 1];
    for (j, line, rows) in blocks {
        if j > m {
            return Err(FileError::Syntax { line, message: format!("A{j} exceeds degree m = {m}") });
        }
        if coefficients[j].replace(rows).is_some() {
            return Err(FileError::Syntax { line, message: format!("duplicate block A{j}") });
        }
    }
    let coefficients = coefficients
        .into_iter()
        .enumerate()
        .map(|(j, c)| c.ok_or_else(|| FileError::Shape(format!("missing block A{j}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolynomialFile { n, m, coefficients })
}

fn parse_entry(tok: &str) -> Option<[f64; 2]> {
    match tok.split_once(',') {
        Some((re, im)) => Some([re.parse().ok()?, im.parse().ok()?]),
        None => Some([tok.parse().ok()?, 0.0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE: &str = "\
# z I + A
n: 2
m: 1
A0:
  1 0,-2
  0 1
A1:
  1 0
  0 1
";

    #[test]
    fn parses_text() {
        let f = PolynomialFile::parse(SAMPLE).unwrap();
        assert_eq!((f.n, f.m), (2, 1));
        assert_eq!(f.coefficients[0][0][1], [0.0, -2.0]);
        let p = f.to_polynomial().unwrap();
        assert_eq!(p.leading(), &Matrix::identity(2));
    }

    #[test]
    fn rejects_malformed() {
        let missing = SAMPLE.replace("A1:\n  1 0\n  0 1\n", "");
        assert!(matches!(PolynomialFile::parse(&missing), Err(FileError::Shape(_))));
        let bad_tok = SAMPLE.replace("0,-2", "0,x");
        assert!(matches!(PolynomialFile::parse(&bad_tok), Err(FileError::Syntax { line: 5, .. })));
        let zero_lead = SAMPLE.replace("A1:\n  1 0\n  0 1", "A1:\n  0 0\n  0 0");
        let f = PolynomialFile::parse(&zero_lead).unwrap();
        assert!(matches!(f.to_polynomial(), Err(FileError::Polynomial(PolyError::ZeroLeading(1)))));
        let ragged = SAMPLE.replace("  0 1\nA1", "  0\nA1");
        assert!(matches!(PolynomialFile::parse(&ragged).unwrap().to_polynomial(), Err(FileError::Shape(_))));
        let constant = "n: 1\nm: 0\nA0:\n  1\n";
        assert!(matches!(PolynomialFile::parse(constant).unwrap().to_polynomial(), Err(FileError::ZeroDegree)));
        assert!(matches!(PolynomialFile::parse("{\"n\": 1"), Err(FileError::Json(_))));
    }

    #[test]
    fn json_rejects_non_finite_after_parse() {
        let f = PolynomialFile { n: 1, m: 1, coefficients: vec![vec![vec![[f64::NAN, 0.0]]], vec![vec![[1.0, 0.0]]]] };
        assert!(matches!(f.to_polynomial(), Err(FileError::NonFinite { index: 0, .. })));
    }

    fn entry() -> impl Strategy<Value = [f64; 2]> {
        (proptest::num::f64::NORMAL | proptest::num::f64::ZERO, proptest::num::f64::NORMAL)
            .prop_map(|(a, b)| [a, b])
    }

    proptest! {
        #[test]
        fn both_encodings_round_trip_bit_exactly(
            n in 1usize..4,
            m in 1usize..4,
            seed in proptest::collection::vec(entry(), 64),
        ) {
            let mut it = seed.iter().cycle();
            let mut coefficients: Vec<Vec<Vec<[f64; 2]>>> = (0..=m)
                .map(|_| (0..n).map(|_| (0..n).map(|_| *it.next().unwrap()).collect()).collect())
                .collect();
            coefficients[m][0][0] = [1.0, 0.0];
            let f = PolynomialFile { n, m, coefficients };
            let from_json = PolynomialFile::parse(&f.to_json()).unwrap();
            let from_text = PolynomialFile::parse(&f.to_text()).unwrap();
            for g in [&from_json, &from_text] {
                for (a, b) in f.coefficients.iter().flatten().flatten().zip(g.coefficients.iter().flatten().flatten()) {
                    prop_assert_eq!(a[0].to_bits(), b[0].to_bits());
                    prop_assert_eq!(a[1].to_bits(), b[1].to_bits());
                }
            }
            prop_assert_eq!(from_json.to_polynomial().unwrap(), f.to_polynomial().unwrap());
        }
    }
}
