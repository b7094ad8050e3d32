//! Heuristic rating estimation: each unknown utility is the mean of all other
//! utilities weighted by the judgments, which yields the linear system
//! `A mu = b` over the unknown concepts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm_inf, SquareMatrix};
use crate::pc::{ConceptPartition, PcMatrix};

/// Solved values at or below this are rejected as non-positive.
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

/// `A mu = b` restricted to the unknown concepts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HreSystem {
    pub a: SquareMatrix,
    pub b: Vec<f64>,
    /// Concept indices of the unknowns, one per row of `a`.
    pub unknown_order: Vec<usize>,
}

/// Builds `A` and `b`.
///
/// Row `j` encodes `mu(u_j) - 1/(n-1) * sum_{i != j} m[u_j][u_i] mu(u_i) = b_j`
/// with `b_j = 1/(n-1) * sum_{c in C_K} m[u_j][c] mu(c)`. The divisor is the
/// total concept count minus one, not `k - 1`.
pub fn build_system(matrix: &PcMatrix, partition: &ConceptPartition) -> Result<HreSystem> {
    partition.check_matches(matrix)?;
    let scale = 1.0 / (partition.n() - 1) as f64;
    let unknown = partition.unknown_indices();
    let a = SquareMatrix::from_fn(unknown.len(), |row, col| {
        if row == col {
            1.0
        } else {
            -scale * matrix.get(unknown[row], unknown[col])
        }
    });
    let b = unknown
        .iter()
        .map(|&u| {
            scale
                * partition
                    .known_values()
                    .iter()
                    .map(|&(c, value)| matrix.get(u, c) * value)
                    .sum::<f64>()
        })
        .collect();
    Ok(HreSystem {
        a,
        b,
        unknown_order: unknown.to_vec(),
    })
}

/// Direct solve with partial pivoting.
pub fn solve_system(system: &HreSystem) -> Result<Vec<f64>> {
    system.a.solve(&system.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMethod {
    Hre,
    Eigenvector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptValue {
    pub label: String,
    pub value: f64,
    pub known: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    /// `||A mu - b||_inf`.
    pub residual: f64,
    /// `||A||_inf * ||A^-1||_inf`.
    pub condition_estimate: f64,
}

/// Strictly positive utilities over all concepts, in label order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub method: RankingMethod,
    pub values: Vec<ConceptValue>,
    pub diagnostics: SolverDiagnostics,
}

impl Ranking {
    pub fn value_of(&self, label: &str) -> Option<f64> {
        self.values.iter().find(|v| v.label == label).map(|v| v.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.value).collect()
    }
}

/// Builds and solves the system, then merges the solved unknowns with the
/// untouched reference values. No normalization is applied.
pub fn rank_hre(matrix: &PcMatrix, partition: &ConceptPartition) -> Result<Ranking> {
    let system = build_system(matrix, partition)?;
    let lu = system.a.lu()?;
    let solution = lu.solve(&system.b);

    if let Some((pos, &value)) = solution
        .iter()
        .enumerate()
        .find(|(_, v)| v.is_nan() || **v <= POSITIVITY_TOLERANCE)
    {
        return Err(Error::InfeasibleSolution {
            label: partition.labels()[system.unknown_order[pos]].clone(),
            value,
            solution,
        });
    }

    let ax = system.a.mul_vec(&solution);
    let residual = norm_inf(
        &ax.iter()
            .zip(&system.b)
            .map(|(l, r)| l - r)
            .collect::<Vec<_>>(),
    );
    let condition_estimate = system.a.norm_inf() * lu.inverse().norm_inf();

    let mut values: Vec<ConceptValue> = partition
        .labels()
        .iter()
        .enumerate()
        .map(|(i, label)| ConceptValue {
            label: label.clone(),
            value: partition.known_value(i).unwrap_or(f64::NAN),
            known: partition.known_value(i).is_some(),
        })
        .collect();
    for (&idx, &v) in system.unknown_order.iter().zip(&solution) {
        values[idx].value = v;
    }

    Ok(Ranking {
        method: RankingMethod::Hre,
        values,
        diagnostics: SolverDiagnostics {
            residual,
            condition_estimate,
        },
    })
}

/// Settings for [`fixed_point_oracle`].
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            tol: 1e-12,
        }
    }
}

/// Cross-check for [`solve_system`] that never forms `A`: repeatedly applies
/// the weighted-mean update to the unknowns (Jacobi sweep) until the max-norm
/// change drops below `tol`. Returns the unknowns in partition order.
///
/// Converges exactly when `A` is a nonsingular M-matrix.
pub fn fixed_point_oracle(
    matrix: &PcMatrix,
    partition: &ConceptPartition,
    initial: &[f64],
    options: FixedPointOptions,
) -> Result<Vec<f64>> {
    partition.check_matches(matrix)?;
    let unknown = partition.unknown_indices();
    if initial.len() != unknown.len() {
        return Err(Error::Input(format!(
            "initial vector has {} entries, expected {}",
            initial.len(),
            unknown.len()
        )));
    }
    let n = partition.n();
    let mut mu: Vec<f64> = (0..n).map(|i| partition.known_value(i).unwrap_or(0.0)).collect();
    for (&u, &v) in unknown.iter().zip(initial) {
        mu[u] = v;
    }

    let mut next = mu.clone();
    for _ in 0..options.max_iters {
        let mut change = 0.0_f64;
        for &j in unknown {
            let sum: f64 = (0..n)
                .filter(|&i| i != j)
                .map(|i| matrix.get(j, i) * mu[i])
                .sum();
            next[j] = sum / (n - 1) as f64;
            change = change.max((next[j] - mu[j]).abs());
        }
        std::mem::swap(&mut mu, &mut next);
        if !change.is_finite() {
            break;
        }
        if change < options.tol {
            return Ok(unknown.iter().map(|&u| mu[u]).collect());
        }
    }
    Err(Error::NonConvergence {
        what: "fixed-point iteration",
        iterations: options.max_iters,
    })
}
