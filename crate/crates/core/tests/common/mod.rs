//! Test-only oracles and instance generators. Nothing here calls into the
//! library's inconsistency or solver code paths.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hre_core::{theorem_bound, ConceptPartition, PcMatrix};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::Rng;

/// Koczkodaj index by enumerating every ordered triple of distinct indices.
pub fn brute_force_k(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut best = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let a = rows[i][j] / (rows[i][k] * rows[k][j]);
                let b = (rows[i][k] * rows[k][j]) / rows[i][j];
                best = best.max((1.0 - a).abs().min((1.0 - b).abs()));
            }
        }
    }
    best
}

pub fn submatrix(rows: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| rows[i][j]).collect())
        .collect()
}

/// Solves a small dense system by Cramer's rule with cofactor determinants.
pub fn cramer_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let det_a = det(a);
    (0..a.len())
        .map(|col| {
            let replaced: Vec<Vec<f64>> = a
                .iter()
                .zip(b)
                .map(|(row, &bi)| {
                    let mut r = row.clone();
                    r[col] = bi;
                    r
                })
                .collect();
            det(&replaced) / det_a
        })
        .collect()
}

pub fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        _ => (0..n)
            .map(|c| {
                let minor: Vec<Vec<f64>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][c] * det(&minor)
            })
            .sum(),
    }
}

/// Log-uniform weights on the 1/9 .. 9 judgment range.
pub fn random_weights(rng: &mut StdRng, n: usize) -> Vec<f64> {
    let span = 9.0_f64.ln();
    (0..n).map(|_| rng.gen_range(-span..=span).exp()).collect()
}

pub fn consistent_rows(w: &[f64]) -> Vec<Vec<f64>> {
    (0..w.len())
        .map(|i| {
            (0..w.len())
                .map(|j| if i == j { 1.0 } else { w[i] / w[j] })
                .collect()
        })
        .collect()
}

/// Multiplies each upper entry by `exp(delta * noise_ij)` and mirrors.
pub fn perturbed_rows(w: &[f64], noise: &[Vec<f64>], delta: f64) -> Vec<Vec<f64>> {
    let mut rows = consistent_rows(w);
    let n = w.len();
    for i in 0..n {
        for j in i + 1..n {
            rows[i][j] *= (delta * noise[i][j]).exp();
            rows[j][i] = 1.0 / rows[i][j];
        }
    }
    rows
}

pub fn random_noise(rng: &mut StdRng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect()
}

/// Random partition with exactly `r` references, values log-uniform.
pub fn random_partition(rng: &mut StdRng, n: usize, r: usize) -> ConceptPartition {
    let known: Vec<usize> = sample(rng, n, r).into_vec();
    let values = random_weights(rng, r);
    let map: BTreeMap<usize, f64> = known.into_iter().zip(values).collect();
    ConceptPartition::new(ConceptPartition::default_labels(n), &map).unwrap()
}

pub fn partition_with_values(n: usize, known: &[usize], w: &[f64]) -> ConceptPartition {
    let map: BTreeMap<usize, f64> = known.iter().map(|&i| (i, w[i])).collect();
    ConceptPartition::new(ConceptPartition::default_labels(n), &map).unwrap()
}

/// All `r`-subsets of `0..n`.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Perturbation factors stay within `exp(+-2)` of the consistent entry.
const MAX_DELTA: f64 = 2.0;

pub struct CalibratedInstance {
    pub matrix: PcMatrix,
    pub partition: ConceptPartition,
    pub kappa_minor: f64,
    pub bound: f64,
}

/// Random reciprocal matrix whose unknown minor sits at a random fraction of
/// the solvability bound: the perturbation scale is bisected until the
/// brute-force index of the minor lands just under the target.
pub fn calibrated_instance(rng: &mut StdRng, n: usize, r: usize) -> CalibratedInstance {
    let w = random_weights(rng, n);
    let noise = random_noise(rng, n);
    let partition = random_partition(rng, n, r);
    let bound = theorem_bound(n, r).unwrap();
    let unknown = partition.unknown_indices().to_vec();
    let minor_k = |delta: f64| {
        if unknown.len() < 3 {
            0.0
        } else {
            brute_force_k(&submatrix(&perturbed_rows(&w, &noise, delta), &unknown))
        }
    };

    let delta = if unknown.len() < 3 {
        rng.gen_range(0.0..1.0)
    } else {
        let target = bound * rng.gen_range(0.0..0.999);
        let mut hi = 0.05;
        while minor_k(hi) < target && hi < MAX_DELTA {
            hi = (hi * 2.0).min(MAX_DELTA);
        }
        if minor_k(hi) < target {
            // noise is nearly consistent on the minor; any scale in range works
            rng.gen_range(0.0..MAX_DELTA)
        } else {
            let mut lo = 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if minor_k(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    };
    let rows = perturbed_rows(&w, &noise, delta);
    let kappa_minor = minor_k(delta);
    assert!(kappa_minor < bound, "calibration overshot: {kappa_minor} >= {bound}");
    CalibratedInstance {
        matrix: PcMatrix::validate(&rows, 1e-9).unwrap(),
        partition,
        kappa_minor,
        bound,
    }
}

/// Unrestricted random reciprocal instance, typically far above the bound.
pub fn wild_instance(rng: &mut StdRng, n: usize, r: usize) -> (PcMatrix, ConceptPartition) {
    let w = random_weights(rng, n);
    let noise = random_noise(rng, n);
    let delta = rng.gen_range(0.0..3.0);
    let rows = perturbed_rows(&w, &noise, delta);
    (
        PcMatrix::validate(&rows, 1e-9).unwrap(),
        random_partition(rng, n, r),
    )
}

/// The 4x4 instance with references `{c4 = 1}` whose triad (1, 2, 3) is
/// badly inconsistent (`m12 = m23 = 4`, `m13 = 1/2`), giving a negative
/// solution.
pub fn infeasible_rows() -> Vec<Vec<f64>> {
    vec![
        vec![1.0, 4.0, 0.5, 1.0],
        vec![0.25, 1.0, 4.0, 1.0],
        vec![2.0, 0.25, 1.0, 1.0],
        vec![1.0, 1.0, 1.0, 1.0],
    ]
}

/// 4x4 with references `{c4 = 1}` where `A` is exactly singular: the
/// unknown triad ratio is `phi^6`, which puts `rho(B)` at 1.
pub fn singular_rows() -> Vec<Vec<f64>> {
    let phi2 = (3.0 + 5.0_f64.sqrt()) / 2.0;
    vec![
        vec![1.0, phi2, 1.0 / phi2, 1.0],
        vec![1.0 / phi2, 1.0, phi2, 1.0],
        vec![phi2, 1.0 / phi2, 1.0, 1.0],
        vec![1.0, 1.0, 1.0, 1.0],
    ]
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
