//! Principal-eigenvector priorities, the classical baseline HRE is compared
//! against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hre::{Ranking, RankingMethod};
use crate::pc::PcMatrix;

#[derive(Debug, Clone, Copy)]
pub struct PowerIterationOptions {
    /// Stop when successive normalized iterates differ by less than this in
    /// max-norm.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PowerIterationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iters: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledValue {
    pub label: String,
    pub value: f64,
}

/// Perron vector of `M` scaled to sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRanking {
    pub method: RankingMethod,
    pub values: Vec<LabeledValue>,
    pub dominant_eigenvalue: f64,
    pub iterations: usize,
}

impl EigenRanking {
    pub fn values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.value).collect()
    }
}

pub fn principal_eigenvector(
    matrix: &PcMatrix,
    labels: &[String],
    options: PowerIterationOptions,
) -> Result<EigenRanking> {
    let n = matrix.size();
    if labels.len() != n {
        return Err(Error::LabelMismatch(format!(
            "{} labels for a {n}x{n} matrix",
            labels.len()
        )));
    }
    let m = matrix.as_matrix();
    let mut v = vec![1.0 / n as f64; n];
    for iter in 1..=options.max_iters {
        let mut w = m.mul_vec(&v);
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= sum);
        let change = w
            .iter()
            .zip(&v)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        v = w;
        if change < options.tol {
            let mv = m.mul_vec(&v);
            let lambda = mv.iter().zip(&v).map(|(a, b)| a / b).sum::<f64>() / n as f64;
            return Ok(EigenRanking {
                method: RankingMethod::Eigenvector,
                values: labels
                    .iter()
                    .zip(v)
                    .map(|(label, value)| LabeledValue {
                        label: label.clone(),
                        value,
                    })
                    .collect(),
                dominant_eigenvalue: lambda,
                iterations: iter,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "principal eigenvector power iteration",
        iterations: options.max_iters,
    })
}

/// Side-by-side view of an HRE ranking and the eigenvector ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingComparison {
    pub labels: Vec<String>,
    /// HRE values rescaled to sum to one.
    pub hre_normalized: Vec<f64>,
    pub eigenvector: Vec<f64>,
    /// Labels from best to worst.
    pub hre_order: Vec<String>,
    pub eigenvector_order: Vec<String>,
    pub kendall_tau: f64,
    /// `hre_normalized[i] / eigenvector[i]`.
    pub value_ratios: Vec<f64>,
}

pub fn compare_rankings(hre: &Ranking, ev: &EigenRanking) -> Result<RankingComparison> {
    let labels: Vec<String> = hre.values.iter().map(|v| v.label.clone()).collect();
    let ev_labels: Vec<&String> = ev.values.iter().map(|v| &v.label).collect();
    if labels.len() != ev_labels.len() || labels.iter().zip(&ev_labels).any(|(a, b)| a != *b) {
        return Err(Error::LabelMismatch(
            "rankings are over different concept lists".into(),
        ));
    }
    let total: f64 = hre.values.iter().map(|v| v.value).sum();
    let hre_normalized: Vec<f64> = hre.values.iter().map(|v| v.value / total).collect();
    let eigenvector = ev.values();
    let value_ratios = hre_normalized
        .iter()
        .zip(&eigenvector)
        .map(|(h, e)| h / e)
        .collect();
    Ok(RankingComparison {
        hre_order: order_labels(&labels, &hre_normalized),
        eigenvector_order: order_labels(&labels, &eigenvector),
        kendall_tau: kendall_tau(&hre_normalized, &eigenvector),
        labels,
        hre_normalized,
        eigenvector,
        value_ratios,
    })
}

fn order_labels(labels: &[String], values: &[f64]) -> Vec<String> {
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.into_iter().map(|i| labels[i].clone()).collect()
}

const TIE_RTOL: f64 = 1e-9;

fn sign_with_ties(a: f64, b: f64) -> i32 {
    if (a - b).abs() <= TIE_RTOL * a.abs().max(b.abs()) {
        0
    } else if a > b {
        1
    } else {
        -1
    }
}

/// Kendall's tau-b. Values within a relative `1e-9` count as tied. When one
/// side has no untied pairs the coefficient is undefined; it is reported as
/// 1 if both sides are fully tied and 0 otherwise.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (mut concordant, mut discordant, mut tied_x, mut tied_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let sx = sign_with_ties(x[i], x[j]);
            let sy = sign_with_ties(y[i], y[j]);
            match (sx, sy) {
                (0, 0) => {}
                (0, _) => tied_x += 1,
                (_, 0) => tied_y += 1,
                _ if sx == sy => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let untied_x = (concordant + discordant + tied_y) as f64;
    let untied_y = (concordant + discordant + tied_x) as f64;
    if untied_x == 0.0 || untied_y == 0.0 {
        return if untied_x == untied_y { 1.0 } else { 0.0 };
    }
    ((concordant - discordant) as f64 / (untied_x * untied_y).sqrt()).clamp(-1.0, 1.0)
}
