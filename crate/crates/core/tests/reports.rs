mod common;

use common::*;
use hre_core::report::{
    check_report, compare_report, exit_code, rank_report, to_canonical_json, RankReport, EXIT_INFEASIBLE,
    EXIT_INPUT, EXIT_NOT_GUARANTEED, EXIT_OK, EXIT_SINGULAR,
};
use hre_core::{rank_hre, Error, ErrorKind, Problem};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn expected_code(outcome: &hre_core::Result<hre_core::Ranking>) -> i32 {
    match outcome {
        Ok(_) => EXIT_OK,
        Err(Error::InfeasibleSolution { .. }) => EXIT_INFEASIBLE,
        Err(Error::SingularSystem { .. })
        | Err(Error::NonConvergence { .. })
        | Err(Error::NumericalDisagreement { .. }) => EXIT_SINGULAR,
        Err(_) => EXIT_INPUT,
    }
}

#[test]
fn exit_code_covers_every_kind() {
    let codes: Vec<i32> = [ErrorKind::Input, ErrorKind::Infeasible, ErrorKind::Singular, ErrorKind::Numerical]
        .into_iter()
        .map(exit_code)
        .collect();
    assert_eq!(codes, vec![EXIT_INPUT, EXIT_INFEASIBLE, EXIT_SINGULAR, EXIT_SINGULAR]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exit_codes_follow_engine_outcome(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(3..=7);
        let r = rng.gen_range(1..n);
        let (matrix, partition) = wild_instance(&mut rng, n, r);
        let outcome = rank_hre(&matrix, &partition);
        let problem = Problem { matrix, partition };

        let report = rank_report(&problem).unwrap();
        prop_assert_eq!(report.exit_code(), expected_code(&outcome));
        prop_assert_eq!(report.ranking.is_some(), outcome.is_ok());

        let check = check_report(&problem).unwrap();
        let want = if check.certificate.guaranteed { EXIT_OK } else { EXIT_NOT_GUARANTEED };
        prop_assert_eq!(check.exit_code(), want);

        prop_assert_eq!(compare_report(&problem).exit_code(), expected_code(&outcome));
    }

    #[test]
    fn canonical_json_is_a_fixed_point(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(3..=7);
        let r = rng.gen_range(1..n);
        let (matrix, partition) = wild_instance(&mut rng, n, r);
        let report = rank_report(&Problem { matrix, partition }).unwrap();
        let first = to_canonical_json(&report);
        let parsed: RankReport = serde_json::from_str(&first).unwrap();
        prop_assert_eq!(to_canonical_json(&parsed), first);
    }
}
