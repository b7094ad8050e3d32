//! Inconsistency-based solvability guarantee for the HRE system and direct
//! M-matrix certification of `A`.
//!
//! With `n` concepts of which `r` are references, `A mu = b` has exactly one
//! strictly positive solution whenever the inconsistency of the unknown minor
//! stays below [`theorem_bound`]. The guarantee is sufficient only, so every
//! certificate also carries [`MMatrixEvidence`] computed on `A` itself.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hre::build_system;
use crate::linalg::SquareMatrix;
use crate::pc::{ConceptPartition, PcMatrix, TriadInconsistency};

fn check_domain(n: usize, r: usize) -> Result<()> {
    if n < 3 || r == 0 || r > n - 2 {
        return Err(Error::DomainError { n, r });
    }
    Ok(())
}

/// Largest `K` for which the guarantee holds: the larger root of
/// `(n-1) a^2 - a - (n-r-2) = 0` expressed as `K = 1 - a`.
pub fn theorem_bound(n: usize, r: usize) -> Result<f64> {
    check_domain(n, r)?;
    let n1 = (n - 1) as f64;
    let free = (n - r - 2) as f64;
    Ok(1.0 - (1.0 + (1.0 + 4.0 * n1 * free).sqrt()) / (2.0 * n1))
}

/// Bound from the last row-sum condition alone, `1 - (n-r-1)/(n-1)`. Never
/// tighter than [`theorem_bound`]; equal to it when `r = n - 2`.
pub fn linear_bound(n: usize, r: usize) -> Result<f64> {
    check_domain(n, r)?;
    Ok(1.0 - (n - r - 1) as f64 / (n - 1) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub n: usize,
    /// `bounds[r - 1]` for `r = 1 ..= n - 2`.
    pub bounds: Vec<f64>,
}

/// Triangular table of [`theorem_bound`] for `3 <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTable {
    pub n_max: usize,
    pub rows: Vec<BoundRow>,
}

pub fn bound_table(n_max: usize) -> Result<BoundTable> {
    if n_max < 3 {
        return Err(Error::DomainError { n: n_max, r: 1 });
    }
    let rows = (3..=n_max)
        .map(|n| BoundRow {
            n,
            bounds: (1..=n - 2)
                .map(|r| theorem_bound(n, r).expect("within domain"))
                .collect(),
        })
        .collect();
    Ok(BoundTable { n_max, rows })
}

/// Three-decimal rendering used for published bound tables, which truncate
/// rather than round (e.g. 0.15693 is listed as 0.156).
pub fn truncate_3(x: f64) -> f64 {
    ((x * 1000.0) + 1e-9).floor() / 1000.0
}

impl BoundTable {
    pub fn get(&self, n: usize, r: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|row| row.n == n)
            .and_then(|row| row.bounds.get(r.checked_sub(1)?).copied())
    }

    fn max_r(&self) -> usize {
        self.n_max - 2
    }

    /// Aligned text: rows `n`, columns `r`, `-` where the bound is undefined.
    pub fn to_text(&self) -> String {
        let width = 7;
        let mut out = String::new();
        let _ = write!(out, "{:<10}", "0<=K(M)<");
        for r in 1..=self.max_r() {
            let _ = write!(out, "{:>width$}", format!("r={r}"));
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{:<10}", format!("n={}", row.n));
            for r in 1..=self.max_r() {
                let cell = match row.bounds.get(r - 1) {
                    Some(b) => format!("{:.3}", truncate_3(*b)),
                    None => "-".to_string(),
                };
                let _ = write!(out, "{cell:>width$}");
            }
            out.push('\n');
        }
        out
    }

    /// CSV with header `n,r=1,...`; full precision values, `-` off-domain.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for r in 1..=self.max_r() {
            let _ = write!(out, ",r={r}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{}", row.n);
            for r in 1..=self.max_r() {
                match row.bounds.get(r - 1) {
                    Some(b) => {
                        let _ = write!(out, ",{b}");
                    }
                    None => out.push_str(",-"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Serializes as `{"n": {"r": bound}}` with keys in numeric order.
impl Serialize for BoundTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [f64]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (i, b) in self.0.iter().enumerate() {
                    map.serialize_entry(&(i + 1).to_string(), b)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(self.rows.len()))?;
        for row in &self.rows {
            map.serialize_entry(&row.n.to_string(), &Row(&row.bounds))?;
        }
        map.end()
    }
}

/// Tolerances for [`is_nonsingular_m_matrix`].
#[derive(Debug, Clone, Copy)]
pub struct MMatrixTolerances {
    /// `A^-1` entries must be `>= -entry_rtol * max|A^-1|`.
    pub entry_rtol: f64,
    /// Band around `s = rho(B)`, relative to `max(s, 1)`.
    pub spectral_rtol: f64,
    pub power_tol: f64,
    pub power_max_iters: usize,
}

impl Default for MMatrixTolerances {
    fn default() -> Self {
        Self {
            entry_rtol: 1e-10,
            spectral_rtol: 1e-8,
            power_tol: 1e-12,
            power_max_iters: 10_000,
        }
    }
}

/// `A = sI - B` with `s` the largest diagonal entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    pub s: f64,
    pub spectral_radius: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MMatrixEvidence {
    pub is_m_matrix: bool,
    /// Off-diagonal entries are all `<= 0`.
    pub in_z_class: bool,
    pub nonsingular: bool,
    pub inverse_nonnegative: bool,
    pub inverse_min_entry: Option<f64>,
    /// Present for Z-class matrices only.
    pub decomposition: Option<SpectralDecomposition>,
    /// Strict spectral verdict `s > rho(B)` beyond tolerance.
    pub spectral_nonsingular: bool,
    /// All row sums of `A` positive (diagonal scaling `D = I`). Sufficient only.
    pub positive_row_sums: bool,
    /// `x = A^-1 1` when it is positive with `A x > 0`.
    pub semipositive_witness: Option<Vec<f64>>,
}

/// Spectral radius of a nonnegative matrix by power iteration on `B + cI`,
/// which shares the Perron vector of `B` and has no other eigenvalue of the
/// same modulus, so periodic (e.g. 2x2 off-diagonal) `B` still converges.
fn perron_radius(b: &SquareMatrix, shift: f64, tol: f64, max_iters: usize) -> (f64, usize, bool) {
    let k = b.size();
    let mut v = vec![1.0 / k as f64; k];
    let mut estimate = f64::NAN;
    for iter in 1..=max_iters {
        let mut w = b.mul_vec(&v);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += shift * vi;
        }
        // v sums to 1, so the l1 growth factor is the Perron-value estimate.
        let growth: f64 = w.iter().sum();
        let next = growth - shift;
        if growth <= 0.0 {
            return (0.0, iter, true);
        }
        w.iter_mut().for_each(|x| *x /= growth);
        v = w;
        if (next - estimate).abs() < tol {
            return (next, iter, true);
        }
        estimate = next;
    }
    (estimate, max_iters, false)
}

/// Certifies `A` as a nonsingular M-matrix.
///
/// `is_m_matrix` requires Z-class membership, a nonnegative inverse, and
/// `s >= rho(B)` up to tolerance. The inverse and spectral verdicts are
/// cross-checked: a conflict outside the tolerance band yields
/// `NumericalDisagreement`. Singular input is not an error; it produces
/// evidence with `nonsingular = false`.
pub fn is_nonsingular_m_matrix(a: &SquareMatrix, tol: MMatrixTolerances) -> Result<MMatrixEvidence> {
    let k = a.size();
    let in_z_class = (0..k).all(|i| (0..k).all(|j| i == j || a[(i, j)] <= 0.0));

    let inverse = a.inverse().ok();
    let nonsingular = inverse.is_some();
    let inverse_min_entry = inverse.as_ref().map(SquareMatrix::min_entry);
    let inverse_nonnegative = inverse
        .as_ref()
        .is_some_and(|inv| inv.min_entry() >= -tol.entry_rtol * inv.max_abs());

    let positive_row_sums = (0..k).all(|i| a.row(i).iter().sum::<f64>() > 0.0);

    let semipositive_witness = inverse.as_ref().filter(|_| inverse_nonnegative).and_then(|inv| {
        let x = inv.mul_vec(&vec![1.0; k]);
        let ax = a.mul_vec(&x);
        (x.iter().all(|v| *v > 0.0) && ax.iter().all(|v| *v > 0.0)).then_some(x)
    });

    let mut decomposition = None;
    let mut spectral_nonsingular = false;
    let mut spectral_admits = false;
    if in_z_class {
        let s = (0..k).map(|i| a[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
        let b = SquareMatrix::from_fn(k, |i, j| if i == j { s - a[(i, j)] } else { -a[(i, j)] });
        let shift = if s > 0.0 { s } else { 1.0 };
        let (rho, iterations, converged) =
            perron_radius(&b, shift, tol.power_tol, tol.power_max_iters);
        let band = tol.spectral_rtol * s.abs().max(1.0);
        spectral_admits = s >= rho - band;
        spectral_nonsingular = s > rho + band;
        decomposition = Some(SpectralDecomposition {
            s,
            spectral_radius: rho,
            iterations,
            converged,
        });

        let inverse_verdict = nonsingular && inverse_nonnegative;
        if (inverse_verdict && !spectral_admits) || (!inverse_verdict && spectral_nonsingular) {
            return Err(Error::NumericalDisagreement {
                inverse_nonnegative: inverse_verdict,
                s,
                spectral_radius: rho,
            });
        }
    }

    Ok(MMatrixEvidence {
        is_m_matrix: in_z_class && nonsingular && inverse_nonnegative && spectral_admits,
        in_z_class,
        nonsingular,
        inverse_nonnegative,
        inverse_min_entry,
        decomposition,
        spectral_nonsingular,
        positive_row_sums,
        semipositive_witness,
    })
}

/// Verdict on whether `A mu = b` is guaranteed a unique positive solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvabilityCertificate {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    /// `K(M)`, informational.
    pub kappa_full: f64,
    /// `K(M~)` over the unknowns; this is what the bound is compared with.
    pub kappa_minor: f64,
    pub alpha: f64,
    /// `None` in the scalar case `r = n - 1`, which needs no bound.
    pub bound: Option<f64>,
    pub guaranteed: bool,
    pub scalar_case: bool,
    /// Worst triad of `M`, zero-based.
    pub worst_triad: Option<TriadInconsistency>,
    /// Worst triad of `M~`, in the numbering of `M`.
    pub worst_minor_triad: Option<TriadInconsistency>,
    pub m_matrix_evidence: MMatrixEvidence,
}

pub fn check_solvability(
    matrix: &PcMatrix,
    partition: &ConceptPartition,
) -> Result<SolvabilityCertificate> {
    check_solvability_with(matrix, partition, MMatrixTolerances::default())
}

pub fn check_solvability_with(
    matrix: &PcMatrix,
    partition: &ConceptPartition,
    tol: MMatrixTolerances,
) -> Result<SolvabilityCertificate> {
    let system = build_system(matrix, partition)?;
    let (n, r, k) = (partition.n(), partition.r(), partition.k());

    let worst_triad = matrix.worst_triad();
    let worst_minor_triad = matrix
        .unknown_minor(partition)
        .worst_triad()
        .map(|t| t.remap(partition.unknown_indices()));
    let kappa_full = worst_triad.map_or(0.0, |t| t.kappa);
    let kappa_minor = worst_minor_triad.map_or(0.0, |t| t.kappa);

    let scalar_case = k == 1;
    let (bound, guaranteed) = if scalar_case {
        (None, true)
    } else {
        let bound = theorem_bound(n, r)?;
        (Some(bound), kappa_minor < bound)
    };

    Ok(SolvabilityCertificate {
        n,
        r,
        k,
        kappa_full,
        kappa_minor,
        alpha: 1.0 - kappa_minor,
        bound,
        guaranteed,
        scalar_case,
        worst_triad,
        worst_minor_triad,
        m_matrix_evidence: is_nonsingular_m_matrix(&system.a, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> SquareMatrix {
        SquareMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn published_bound_cells() {
        assert_eq!(theorem_bound(3, 1).unwrap(), 0.5);
        assert!((theorem_bound(4, 1).unwrap() - 0.232).abs() < 0.0005);
        assert!((theorem_bound(7, 5).unwrap() - 0.833).abs() < 0.0005);
        assert_eq!(theorem_bound(5, 3).unwrap(), 0.75);
    }

    #[test]
    fn linear_bound_values() {
        assert!((linear_bound(4, 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((linear_bound(5, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((linear_bound(4, 2).unwrap() - theorem_bound(4, 2).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn bound_domain() {
        assert_eq!(theorem_bound(2, 1), Err(Error::DomainError { n: 2, r: 1 }));
        assert!(theorem_bound(5, 0).is_err());
        assert!(theorem_bound(5, 4).is_err());
        assert!(linear_bound(5, 4).is_err());
        assert!(bound_table(2).is_err());
    }

    #[test]
    fn table_layout() {
        let t = bound_table(7).unwrap();
        let cells: Vec<String> = t.rows[3].bounds.iter().map(|b| format!("{:.3}", truncate_3(*b))).collect();
        assert_eq!(cells, ["0.118", "0.259", "0.441", "0.800"]);
        assert_eq!(t.get(7, 5).map(truncate_3), Some(0.833));
        assert_eq!(t.get(3, 2), None);

        let text = bound_table(4).unwrap().to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("n=3") && lines[1].ends_with('-'));
        assert!(lines[2].contains("0.232") && lines[2].contains("0.666"));

        let csv = bound_table(3).unwrap().to_csv();
        assert_eq!(csv, "n,r=1\n3,0.5\n");
        let json = serde_json::to_string(&bound_table(3).unwrap()).unwrap();
        assert_eq!(json, r#"{"3":{"1":0.5}}"#);
    }

    #[test]
    fn table_json_keys_in_numeric_order() {
        let json = serde_json::to_string(&bound_table(11).unwrap()).unwrap();
        let p9 = json.find("\"9\":").unwrap();
        let p10 = json.find("\"10\":").unwrap();
        assert!(p9 < p10);
    }

    #[test]
    fn identity_is_m_matrix() {
        let ev = is_nonsingular_m_matrix(&SquareMatrix::identity(3), Default::default()).unwrap();
        assert!(ev.is_m_matrix && ev.in_z_class && ev.spectral_nonsingular);
        let d = ev.decomposition.unwrap();
        assert_eq!(d.s, 1.0);
        assert!(d.spectral_radius.abs() < 1e-15);
        assert_eq!(ev.semipositive_witness, Some(vec![1.0; 3]));
    }

    #[test]
    fn singular_rejected_by_both_checks() {
        let ev = is_nonsingular_m_matrix(&m(&[&[1.0, -1.0], &[-1.0, 1.0]]), Default::default())
            .unwrap();
        assert!(!ev.is_m_matrix && !ev.nonsingular && !ev.spectral_nonsingular);
        assert!(ev.in_z_class);
        let d = ev.decomposition.unwrap();
        assert!((d.spectral_radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_off_diagonal_not_z_class() {
        let ev = is_nonsingular_m_matrix(&m(&[&[1.0, 0.5], &[0.5, 1.0]]), Default::default())
            .unwrap();
        assert!(!ev.in_z_class && !ev.is_m_matrix);
        assert!(ev.decomposition.is_none());
    }

    #[test]
    fn non_m_matrix_z_class() {
        // rho(B) = 2 > s = 1; inverse exists with negative entries.
        let ev = is_nonsingular_m_matrix(&m(&[&[1.0, -2.0], &[-2.0, 1.0]]), Default::default())
            .unwrap();
        assert!(ev.in_z_class && ev.nonsingular && !ev.inverse_nonnegative && !ev.is_m_matrix);
        assert!((ev.decomposition.unwrap().spectral_radius - 2.0).abs() < 1e-10);
    }

    #[test]
    fn consistent_matrix_is_guaranteed() {
        let mat = PcMatrix::from_weights(&[2.0, 4.0, 1.0, 3.0]);
        let p = ConceptPartition::from_known_labels(
            ConceptPartition::default_labels(4),
            [("c4", 3.0)],
        )
        .unwrap();
        let cert = check_solvability(&mat, &p).unwrap();
        assert!(cert.guaranteed && cert.m_matrix_evidence.is_m_matrix);
        assert_eq!(cert.bound, theorem_bound(4, 1).ok());
        assert_eq!((cert.n, cert.r, cert.k), (4, 1, 3));
    }

    #[test]
    fn above_bound_is_not_guaranteed() {
        // weights (4, 2, 1, 1) with m_13 lowered so the 1-2-3 triad has kappa 0.3
        let mat = PcMatrix::from_upper_triangle(&[
            vec![2.0, 2.8, 4.0],
            vec![2.0, 2.0],
            vec![1.0],
        ])
        .unwrap();
        let p = ConceptPartition::from_known_labels(
            ConceptPartition::default_labels(4),
            [("c4", 1.0)],
        )
        .unwrap();
        let cert = check_solvability(&mat, &p).unwrap();
        assert!((cert.kappa_minor - 0.3).abs() < 1e-12);
        assert!(!cert.guaranteed);
        assert!((cert.bound.unwrap() - 0.232).abs() < 0.0005);
        // sufficient, not necessary
        assert!(cert.m_matrix_evidence.is_m_matrix);
    }

    #[test]
    fn scalar_case_is_trivially_guaranteed() {
        let mat = PcMatrix::from_upper_triangle(&[vec![9.0, 0.2], vec![7.0]]).unwrap();
        let p = ConceptPartition::from_known_labels(
            ConceptPartition::default_labels(3),
            [("c2", 1.0), ("c3", 2.0)],
        )
        .unwrap();
        let cert = check_solvability(&mat, &p).unwrap();
        assert!(cert.scalar_case && cert.guaranteed && cert.bound.is_none());
        assert!(cert.m_matrix_evidence.is_m_matrix);
    }
}
