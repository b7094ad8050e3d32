mod common;

use common::*;
use hre_core::{ConceptPartition, PcMatrix};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn reciprocal_rows(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(-2.2f64..2.2, n * n).prop_map(move |logs| {
        let mut rows = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                rows[i][j] = logs[i * n + j].exp();
                rows[j][i] = 1.0 / rows[i][j];
            }
        }
        rows
    })
}

fn sized_reciprocal() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (3usize..=8).prop_flat_map(reciprocal_rows)
}

#[test]
fn three_by_three_index_matches_enumeration() {
    let rows = vec![
        vec![1.0, 2.0, 5.0],
        vec![0.5, 1.0, 2.0],
        vec![0.2, 0.5, 1.0],
    ];
    let expected = brute_force_k(&rows);
    assert!((expected - 0.2).abs() < 1e-12);
    let m = PcMatrix::validate(&rows, 1e-9).unwrap();
    assert!((m.koczkodaj_index().unwrap() - expected).abs() < 1e-15);
}

#[test]
fn perturbing_one_pair_raises_index() {
    let w = [3.0, 1.0, 0.5, 2.0];
    let mut rows = consistent_rows(&w);
    let before = PcMatrix::validate(&rows, 1e-9).unwrap().koczkodaj_index().unwrap();
    assert!(before < 1e-15);
    rows[1][3] *= 1.5;
    rows[3][1] = 1.0 / rows[1][3];
    let after = PcMatrix::validate(&rows, 1e-9).unwrap().koczkodaj_index().unwrap();
    let oracle = brute_force_k(&rows);
    assert!(after > before);
    assert!((after - oracle).abs() < 1e-15);
    // 1.5x on one pair: kappa = min(0.5, 1/3)
    assert!((after - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn minor_never_exceeds_full_index_on_random_instances() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(4..=8);
        let r = rng.gen_range(1..=n - 3);
        let (m, p) = wild_instance(&mut rng, n, r);
        let minor = m.unknown_minor(&p);
        assert!(minor.koczkodaj_index().unwrap() <= m.koczkodaj_index().unwrap() + 1e-14);
        let expect = brute_force_k(&submatrix(&m.to_rows(), p.unknown_indices()));
        assert!((minor.koczkodaj_index().unwrap() - expect).abs() < 1e-14);
    }
}

#[test]
fn full_unknown_set_minor_is_identity_restriction() {
    let m = PcMatrix::from_weights(&[1.0, 2.0, 4.0]);
    assert_eq!(m.restrict(&[0, 1, 2]), m);
}

#[test]
fn worst_triad_points_at_perturbed_entries() {
    let mut rows = consistent_rows(&[1.0, 2.0, 3.0, 4.0, 5.0]);
    rows[0][4] *= 3.0;
    rows[4][0] = 1.0 / rows[0][4];
    let m = PcMatrix::validate(&rows, 1e-9).unwrap();
    let t = m.worst_triad().unwrap();
    let (i, j, k) = t.indices;
    let involved = [i, j, k];
    assert!(involved.contains(&0) && involved.contains(&4));
    let labels = ConceptPartition::default_labels(5);
    assert_eq!(labels[0], "c1");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn index_equals_brute_force(rows in sized_reciprocal()) {
        let m = PcMatrix::validate(&rows, 1e-9).unwrap();
        let k = m.koczkodaj_index().unwrap();
        prop_assert!((k - brute_force_k(&rows)).abs() < 1e-14);
        prop_assert!((0.0..1.0).contains(&k));
    }

    #[test]
    fn every_triad_below_one(rows in sized_reciprocal()) {
        let m = PcMatrix::validate(&rows, 1e-9).unwrap();
        let n = m.size();
        for i in 0..n { for j in 0..n { for k in 0..n {
            if i != j && j != k && i != k {
                prop_assert!(m.triad_kappa(i, j, k).unwrap() < 1.0);
            }
        }}}
    }

    #[test]
    fn consistent_matrices_have_zero_index(
        logs in prop::collection::vec(-2.2f64..2.2, 3..=8)
    ) {
        let w: Vec<f64> = logs.iter().map(|x| x.exp()).collect();
        let m = PcMatrix::from_weights(&w);
        let n = w.len();
        prop_assert!(m.koczkodaj_index().unwrap() < 1e-12);
        for i in 0..n { for j in 0..n { for k in 0..n {
            let cycle = m.get(i, j) * m.get(j, k) * m.get(k, i);
            prop_assert!((cycle - 1.0).abs() < 1e-12);
        }}}
    }

    #[test]
    fn permutation_leaves_index_unchanged(
        rows in sized_reciprocal(),
        seed in any::<u64>(),
    ) {
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = StdRng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let m = PcMatrix::validate(&rows, 1e-9).unwrap();
        let permuted = m.restrict(&perm);
        prop_assert!((m.koczkodaj_index().unwrap() - permuted.koczkodaj_index().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn minor_monotonicity(rows in (6usize..=8).prop_flat_map(reciprocal_rows), seed in any::<u64>()) {
        let n = rows.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let r = rng.gen_range(1..=n - 3);
        let p = random_partition(&mut rng, n, r);
        let m = PcMatrix::validate(&rows, 1e-9).unwrap();
        let minor = m.unknown_minor(&p);
        prop_assert!(minor.koczkodaj_index().unwrap() <= m.koczkodaj_index().unwrap());
        // the minor is itself a valid PC matrix
        prop_assert!(PcMatrix::validate(&minor.to_rows(), 1e-9).is_ok());
    }
}
