//! Report records shared by the CLI and the HTTP service, and their
//! canonical JSON rendering.
//!
//! Reports copy engine outputs verbatim. Rounding to 12 significant digits
//! happens only when rendering, so re-rendering a parsed report is
//! byte-identical.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::document::Problem;
use crate::eigen::{compare_rankings, principal_eigenvector, EigenRanking, RankingComparison};
use crate::error::{Error, ErrorKind, Result};
use crate::hre::{rank_hre, ConceptValue, Ranking, SolverDiagnostics};
use crate::pc::TriadInconsistency;
use crate::solvability::{check_solvability, SolvabilityCertificate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_NOT_GUARANTEED: i32 = 4;

/// Numerical failures (non-convergence, checker disagreement) share the
/// singular code: all mean no trustworthy unique solution was produced.
pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Infeasible => EXIT_INFEASIBLE,
        ErrorKind::Singular | ErrorKind::Numerical => EXIT_SINGULAR,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: ErrorKind,
    pub message: String,
    /// Solved unknowns for an infeasible system, in unknown order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<f64>>,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        Self {
            kind: e.kind(),
            message: e.to_string(),
            solution: match e {
                Error::InfeasibleSolution { solution, .. } => Some(solution.clone()),
                _ => None,
            },
        }
    }
}

/// A triad with both zero-based indices and labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadReport {
    pub indices: [usize; 3],
    pub labels: [String; 3],
    pub kappa: f64,
}

impl TriadReport {
    fn new(t: TriadInconsistency, labels: &[String]) -> Self {
        let (i, j, k) = t.indices;
        Self {
            indices: [i, j, k],
            labels: [labels[i].clone(), labels[j].clone(), labels[k].clone()],
            kappa: t.kappa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub labels: Vec<String>,
    pub unknown: Vec<String>,
    pub kappa_full: f64,
    pub kappa_minor: f64,
    pub bound: Option<f64>,
    pub guaranteed: bool,
    pub scalar_case: bool,
    pub worst_triad: Option<TriadReport>,
    pub worst_minor_triad: Option<TriadReport>,
    pub ranking: Option<Vec<ConceptValue>>,
    pub diagnostics: Option<SolverDiagnostics>,
    pub error: Option<ErrorReport>,
}

impl RankReport {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(EXIT_OK, |e| exit_code(e.kind))
    }
}

/// Runs the certificate and the HRE pipeline. Ranking failures are recorded
/// in the report; only a failing certificate aborts.
pub fn rank_report(problem: &Problem) -> Result<RankReport> {
    let cert = check_solvability(&problem.matrix, &problem.partition)?;
    let labels = problem.labels();
    let ranking = rank_hre(&problem.matrix, &problem.partition);
    let (ranking, diagnostics, error) = match ranking {
        Ok(r) => (Some(r.values), Some(r.diagnostics), None),
        Err(e) => (None, None, Some(ErrorReport::from(&e))),
    };
    Ok(RankReport {
        n: cert.n,
        k: cert.k,
        r: cert.r,
        labels: labels.to_vec(),
        unknown: problem
            .partition
            .unknown_indices()
            .iter()
            .map(|&i| labels[i].clone())
            .collect(),
        kappa_full: cert.kappa_full,
        kappa_minor: cert.kappa_minor,
        bound: cert.bound,
        guaranteed: cert.guaranteed,
        scalar_case: cert.scalar_case,
        worst_triad: cert.worst_triad.map(|t| TriadReport::new(t, labels)),
        worst_minor_triad: cert.worst_minor_triad.map(|t| TriadReport::new(t, labels)),
        ranking,
        diagnostics,
        error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub labels: Vec<String>,
    pub worst_triad: Option<TriadReport>,
    pub worst_minor_triad: Option<TriadReport>,
    pub certificate: SolvabilityCertificate,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.certificate.guaranteed {
            EXIT_OK
        } else {
            EXIT_NOT_GUARANTEED
        }
    }
}

pub fn check_report(problem: &Problem) -> Result<CheckReport> {
    let certificate = check_solvability(&problem.matrix, &problem.partition)?;
    let labels = problem.labels();
    Ok(CheckReport {
        labels: labels.to_vec(),
        worst_triad: certificate.worst_triad.map(|t| TriadReport::new(t, labels)),
        worst_minor_triad: certificate
            .worst_minor_triad
            .map(|t| TriadReport::new(t, labels)),
        certificate,
    })
}

/// Result of one method, or why it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSlot<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

impl<T> From<Result<T>> for MethodSlot<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Self {
                result: Some(v),
                error: None,
            },
            Err(e) => Self {
                result: None,
                error: Some(ErrorReport::from(&e)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub labels: Vec<String>,
    pub hre: MethodSlot<Ranking>,
    pub eigenvector: MethodSlot<EigenRanking>,
    /// Present when both methods succeeded.
    pub comparison: Option<RankingComparison>,
}

impl CompareReport {
    pub fn exit_code(&self) -> i32 {
        [&self.hre.error, &self.eigenvector.error]
            .into_iter()
            .flatten()
            .map(|e| exit_code(e.kind))
            .next()
            .unwrap_or(EXIT_OK)
    }
}

/// Runs both methods independently; one failing does not hide the other.
pub fn compare_report(problem: &Problem) -> CompareReport {
    let hre = rank_hre(&problem.matrix, &problem.partition);
    let ev = principal_eigenvector(&problem.matrix, problem.labels(), Default::default());
    let comparison = match (&hre, &ev) {
        (Ok(h), Ok(e)) => compare_rankings(h, e).ok(),
        _ => None,
    };
    CompareReport {
        labels: problem.labels().to_vec(),
        hre: hre.into(),
        eigenvector: ev.into(),
        comparison,
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(x) = num.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig12(x)) {
                    *num = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with fields in declaration order and floats rounded to 12
/// significant digits, newline-terminated.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_floats(&mut v);
    let mut out = serde_json::to_string_pretty(&v).expect("value serializes");
    out.push('\n');
    out
}
