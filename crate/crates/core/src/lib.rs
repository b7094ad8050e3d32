//! Ranking by heuristic rating estimation (HRE) over pairwise comparisons.
//!
//! Experts supply a reciprocal judgment matrix `M`; some concepts carry known
//! reference utilities. The unknown utilities solve the linear system
//! `A mu = b` built in [`hre`]. [`solvability`] decides from Koczkodaj's
//! inconsistency index whether a unique strictly positive solution is
//! guaranteed, and certifies `A` as an M-matrix directly. [`eigen`] provides
//! the principal-eigenvector ranking for comparison.

pub mod document;
pub mod eigen;
pub mod error;
pub mod hre;
pub mod linalg;
pub mod pc;
pub mod report;
pub mod solvability;

pub use document::{MatrixDocument, Problem};
pub use eigen::{principal_eigenvector, EigenRanking};
pub use error::{Error, ErrorKind, Result};
pub use hre::{build_system, fixed_point_oracle, rank_hre, solve_system, HreSystem, Ranking};
pub use linalg::SquareMatrix;
pub use pc::{ConceptPartition, PcMatrix, TriadInconsistency};
pub use solvability::{
    bound_table, check_solvability, is_nonsingular_m_matrix, linear_bound, theorem_bound,
    MMatrixEvidence, SolvabilityCertificate,
};
