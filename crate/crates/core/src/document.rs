//! Input documents.
//!
//! Files carry a full matrix:
//!
//! ```json
//! { "labels": ["a", "b", "c"],
//!   "matrix": [[1, 2, 4], [0.5, 1, 2], [0.25, 0.5, 1]],
//!   "known": { "c": 1.0 } }
//! ```
//!
//! `known` keys form the reference set; every other label is unknown, in
//! label order. CSV files hold the labels in the first row and the matrix in
//! the body, with known values supplied separately as a JSON object.
//!
//! API bodies may instead send `judgments`, the strict upper triangle row by
//! row (`judgments[i]` = `m_{i,i+1} .. m_{i,n-1}`), from which the reciprocal
//! lower triangle is derived. Cells may be `null` while the grid is being
//! filled in.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pc::{ConceptPartition, PcMatrix, DEFAULT_RECIPROCITY_TOLERANCE};

/// Known reference values keyed by label.
pub type KnownValues = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub judgments: Option<Vec<Vec<Option<f64>>>>,
    #[serde(default)]
    pub known: KnownValues,
}

/// A validated matrix with its partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub matrix: PcMatrix,
    pub partition: ConceptPartition,
}

impl Problem {
    pub fn labels(&self) -> &[String] {
        self.partition.labels()
    }
}

/// One validation finding, with zero-based cell coordinates when it concerns
/// a specific entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

impl From<&Error> for Diagnostic {
    fn from(e: &Error) -> Self {
        let (row, col) = match *e {
            Error::NonPositiveEntry { row, col, .. } | Error::ReciprocityViolation { row, col, .. } => {
                (Some(row), Some(col))
            }
            Error::NonUnitDiagonal { index, .. } => (Some(index), Some(index)),
            _ => (None, None),
        };
        Self {
            message: e.to_string(),
            row,
            col,
        }
    }
}

impl MatrixDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Full matrix rows, derived from `judgments` when no `matrix` is given.
    /// Missing judgments become NaN so they surface as invalid entries.
    fn full_rows(&self) -> Result<Vec<Vec<f64>>> {
        match (&self.matrix, &self.judgments) {
            (Some(m), None) => Ok(m.clone()),
            (None, Some(upper)) => {
                let n = self.labels.len();
                if upper.len() + 1 != n && !(n == 0 && upper.is_empty()) {
                    return Err(Error::Input(format!(
                        "{} judgment rows for {n} labels, expected {}",
                        upper.len(),
                        n.saturating_sub(1)
                    )));
                }
                let mut rows = vec![vec![1.0; n]; n];
                for (i, row) in upper.iter().enumerate() {
                    if row.len() != n - 1 - i {
                        return Err(Error::Input(format!(
                            "judgment row {} has {} cells, expected {}",
                            i + 1,
                            row.len(),
                            n - 1 - i
                        )));
                    }
                    for (offset, cell) in row.iter().enumerate() {
                        let j = i + 1 + offset;
                        let v = cell.unwrap_or(f64::NAN);
                        rows[i][j] = v;
                        rows[j][i] = if v > 0.0 { 1.0 / v } else { v };
                    }
                }
                Ok(rows)
            }
            (Some(_), Some(_)) => Err(Error::Input(
                "document has both `matrix` and `judgments`".into(),
            )),
            (None, None) => Err(Error::Input(
                "document needs either `matrix` or `judgments`".into(),
            )),
        }
    }

    /// Every problem with the document; empty when [`MatrixDocument::to_problem`]
    /// would succeed.
    pub fn diagnostics(&self, reciprocity_tolerance: f64) -> Vec<Diagnostic> {
        let rows = match self.full_rows() {
            Ok(rows) => rows,
            Err(e) => return vec![Diagnostic::from(&e)],
        };
        let mut out: Vec<Diagnostic> = PcMatrix::validation_errors(&rows, reciprocity_tolerance)
            .iter()
            .map(Diagnostic::from)
            .collect();
        if let Err(e) = self.check_labels(rows.len()).and_then(|_| self.partition()) {
            out.push(Diagnostic::from(&e));
        }
        out
    }

    fn check_labels(&self, n: usize) -> Result<()> {
        if self.labels.len() != n {
            return Err(Error::LabelMismatch(format!(
                "{} labels for a {n}x{n} matrix",
                self.labels.len()
            )));
        }
        Ok(())
    }

    fn partition(&self) -> Result<ConceptPartition> {
        ConceptPartition::from_known_labels(
            self.labels.clone(),
            self.known.iter().map(|(l, v)| (l.as_str(), *v)),
        )
    }

    pub fn to_problem(&self, reciprocity_tolerance: f64) -> Result<Problem> {
        let rows = self.full_rows()?;
        let matrix = PcMatrix::validate(&rows, reciprocity_tolerance)?;
        self.check_labels(matrix.size())?;
        Ok(Problem {
            matrix,
            partition: self.partition()?,
        })
    }
}

/// Parses CSV: header row of labels, then one row per matrix row.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .map(|(col, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    Error::Input(format!(
                        "row {}, column {}: {cell:?} is not a number",
                        line + 1,
                        col + 1
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((labels, rows))
}

pub fn parse_known(text: &str) -> Result<KnownValues> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Json,
        }
    }
}

/// Builds a document from file contents. `known_override` replaces any
/// known values in the file; CSV input requires it.
pub fn load_document(
    text: &str,
    format: InputFormat,
    known_override: Option<KnownValues>,
) -> Result<MatrixDocument> {
    let mut doc = match format {
        InputFormat::Json => {
            let doc = MatrixDocument::from_json(text)?;
            if doc.matrix.is_none() {
                return Err(Error::Input("matrix files must contain a full `matrix`".into()));
            }
            doc
        }
        InputFormat::Csv => {
            let (labels, rows) = parse_csv(text)?;
            MatrixDocument {
                labels,
                matrix: Some(rows),
                judgments: None,
                known: KnownValues::new(),
            }
        }
    };
    if let Some(known) = known_override {
        doc.known = known;
    }
    Ok(doc)
}

/// Convenience for callers that only need the default tolerance.
pub fn load_problem(text: &str, format: InputFormat, known: Option<KnownValues>) -> Result<Problem> {
    load_document(text, format, known)?.to_problem(DEFAULT_RECIPROCITY_TOLERANCE)
}
