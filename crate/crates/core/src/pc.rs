//! Pairwise-comparison matrices, concept partitions and Koczkodaj's
//! triad-based inconsistency index.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// Default bound on `|m_ij * m_ji - 1|` accepted by [`PcMatrix::validate`].
pub const DEFAULT_RECIPROCITY_TOLERANCE: f64 = 1e-9;

/// A validated, strictly positive, reciprocal judgment matrix.
///
/// Entries are stored exactly as given. Validation never symmetrizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PcMatrix {
    entries: SquareMatrix,
}

impl PcMatrix {
    /// Checks shape, positivity, unit diagonal and reciprocity, in that order,
    /// and reports the first violation.
    pub fn validate(raw: &[Vec<f64>], reciprocity_tolerance: f64) -> Result<Self> {
        match Self::validation_errors(raw, reciprocity_tolerance).into_iter().next() {
            Some(err) => Err(err),
            None => Ok(Self {
                entries: SquareMatrix::from_rows(raw)?,
            }),
        }
    }

    /// Every violation in `raw`, ordered as [`PcMatrix::validate`] checks
    /// them. Reciprocity is only checked for pairs with valid entries.
    pub fn validation_errors(raw: &[Vec<f64>], reciprocity_tolerance: f64) -> Vec<Error> {
        let entries = match SquareMatrix::from_rows(raw) {
            Ok(m) => m,
            Err(e) => return vec![e],
        };
        let n = entries.size();
        if n < 2 {
            return vec![Error::TooFewConcepts(n)];
        }
        let valid = |v: f64| v > 0.0 && v.is_finite();
        let mut errors = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = entries[(i, j)];
                if !valid(v) {
                    errors.push(Error::NonPositiveEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        for i in 0..n {
            if valid(entries[(i, i)]) && entries[(i, i)] != 1.0 {
                errors.push(Error::NonUnitDiagonal {
                    index: i,
                    value: entries[(i, i)],
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (entries[(i, j)], entries[(j, i)]);
                if !valid(a) || !valid(b) {
                    continue;
                }
                let residual = (a * b - 1.0).abs();
                if residual > reciprocity_tolerance {
                    errors.push(Error::ReciprocityViolation {
                        row: i,
                        col: j,
                        residual,
                        tolerance: reciprocity_tolerance,
                    });
                }
            }
        }
        errors
    }

    /// Completes a matrix from its strict upper triangle: `upper[i]` holds
    /// `m_{i,i+1}, ..., m_{i,n-1}`. The lower triangle is `1 / m_ij`.
    pub fn from_upper_triangle(upper: &[Vec<f64>]) -> Result<Self> {
        let n = upper.len() + 1;
        let mut rows = vec![vec![1.0; n]; n];
        for (i, row) in upper.iter().enumerate() {
            if row.len() != n - 1 - i {
                return Err(Error::Input(format!(
                    "upper-triangle row {} has {} judgments, expected {}",
                    i + 1,
                    row.len(),
                    n - 1 - i
                )));
            }
            for (offset, &v) in row.iter().enumerate() {
                let j = i + 1 + offset;
                rows[i][j] = v;
                rows[j][i] = 1.0 / v;
            }
        }
        Self::validate(&rows, DEFAULT_RECIPROCITY_TOLERANCE)
    }

    /// Consistent matrix `m_ij = w_i / w_j`.
    ///
    /// # Panics
    /// If fewer than two weights are given or any weight is not positive.
    pub fn from_weights(weights: &[f64]) -> Self {
        assert!(weights.len() >= 2, "need at least two weights");
        assert!(
            weights.iter().all(|w| *w > 0.0 && w.is_finite()),
            "weights must be positive"
        );
        let n = weights.len();
        let entries =
            SquareMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { weights[i] / weights[j] });
        Self { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.size()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.to_rows()
    }

    /// Inconsistency of the triad `(i, j, k)`: how far `m_ij` is from the
    /// indirect estimate `m_ik * m_kj`, as the smaller of the two relative
    /// deviations.
    pub fn triad_kappa(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        let n = self.size();
        if i >= n || j >= n || k >= n || i == j || j == k || i == k {
            return Err(Error::IndexError { i, j, k, n });
        }
        Ok(self.kappa_unchecked(i, j, k))
    }

    fn kappa_unchecked(&self, i: usize, j: usize, k: usize) -> f64 {
        let direct = self.get(i, j);
        let indirect = self.get(i, k) * self.get(k, j);
        (1.0 - direct / indirect)
            .abs()
            .min((1.0 - indirect / direct).abs())
    }

    /// Triad with the largest κ, or `None` when `n < 3`.
    ///
    /// Each unordered triple is visited once; the three choices of middle
    /// index are evaluated and the largest kept. Ties resolve to the
    /// lexicographically first triple.
    pub fn worst_triad(&self) -> Option<TriadInconsistency> {
        let n = self.size();
        let mut worst: Option<TriadInconsistency> = None;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for (i, j, k) in [(a, b, c), (a, c, b), (b, c, a)] {
                        let kappa = self.kappa_unchecked(i, j, k);
                        if worst.is_none_or(|w| kappa > w.kappa) {
                            worst = Some(TriadInconsistency {
                                indices: (i, j, k),
                                kappa,
                            });
                        }
                    }
                }
            }
        }
        worst
    }

    /// Koczkodaj's index `K(M)`: the maximum triad κ. Undefined below three
    /// concepts.
    pub fn koczkodaj_index(&self) -> Result<f64> {
        self.worst_triad()
            .map(|t| t.kappa)
            .ok_or(Error::TooSmall(self.size()))
    }

    /// `K(M)` with the convention that matrices without triads are consistent.
    pub fn inconsistency(&self) -> f64 {
        self.worst_triad().map_or(0.0, |t| t.kappa)
    }

    /// Principal submatrix over `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> PcMatrix {
        let entries =
            SquareMatrix::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]));
        PcMatrix { entries }
    }

    /// The minor `M~` over the unknown concepts of `partition`. For a single
    /// unknown this is the 1x1 matrix `[1]`.
    pub fn unknown_minor(&self, partition: &ConceptPartition) -> PcMatrix {
        self.restrict(partition.unknown_indices())
    }
}

/// One triad and its inconsistency κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriadInconsistency {
    /// Zero-based `(i, j, k)`: compares `m_ij` against `m_ik * m_kj`.
    pub indices: (usize, usize, usize),
    pub kappa: f64,
}

impl TriadInconsistency {
    /// Maps indices of a restricted matrix back to the parent's numbering.
    pub fn remap(self, indices: &[usize]) -> Self {
        let (i, j, k) = self.indices;
        Self {
            indices: (indices[i], indices[j], indices[k]),
            kappa: self.kappa,
        }
    }
}

/// Split of the concepts into unknowns `C_U` (to be estimated) and
/// references `C_K` with fixed utilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptPartition {
    labels: Vec<String>,
    unknown: Vec<usize>,
    known: Vec<(usize, f64)>,
}

impl ConceptPartition {
    /// `known_values` maps concept indices to their reference utilities; every
    /// other index is unknown.
    pub fn new(labels: Vec<String>, known_values: &BTreeMap<usize, f64>) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidPartition(format!("duplicate label {label:?}")));
            }
        }
        for (&idx, &value) in known_values {
            if idx >= n {
                return Err(Error::InvalidPartition(format!(
                    "known index {} out of range for {n} concepts",
                    idx + 1
                )));
            }
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidPartition(format!(
                    "known value for {:?} must be strictly positive, got {value}",
                    labels[idx]
                )));
            }
        }
        if known_values.is_empty() {
            return Err(Error::InvalidPartition(
                "at least one reference concept with a known value is required".into(),
            ));
        }
        if known_values.len() == n {
            return Err(Error::InvalidPartition(
                "at least one concept must be unknown".into(),
            ));
        }
        let unknown = (0..n).filter(|i| !known_values.contains_key(i)).collect();
        let known = known_values.iter().map(|(&i, &v)| (i, v)).collect();
        Ok(Self {
            labels,
            unknown,
            known,
        })
    }

    /// Same as [`ConceptPartition::new`] with reference concepts named by label.
    pub fn from_known_labels<'a>(
        labels: Vec<String>,
        known: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Self> {
        let mut by_index = BTreeMap::new();
        for (label, value) in known {
            let idx = labels.iter().position(|l| l == label).ok_or_else(|| {
                Error::LabelMismatch(format!("known value given for unknown label {label:?}"))
            })?;
            by_index.insert(idx, value);
        }
        Self::new(labels, &by_index)
    }

    /// Labels `c1 .. cn`.
    pub fn default_labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("c{i}")).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.unknown.len()
    }

    pub fn r(&self) -> usize {
        self.known.len()
    }

    pub fn unknown_indices(&self) -> &[usize] {
        &self.unknown
    }

    /// `(index, value)` pairs of the reference concepts, ordered by index.
    pub fn known_values(&self) -> &[(usize, f64)] {
        &self.known
    }

    pub fn known_value(&self, index: usize) -> Option<f64> {
        self.known
            .iter()
            .find_map(|&(i, v)| (i == index).then_some(v))
    }

    pub(crate) fn check_matches(&self, matrix: &PcMatrix) -> Result<()> {
        if matrix.size() != self.n() {
            return Err(Error::LabelMismatch(format!(
                "partition has {} concepts but matrix is {}x{}",
                self.n(),
                matrix.size(),
                matrix.size()
            )));
        }
        Ok(())
    }
}
