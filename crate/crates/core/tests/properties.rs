mod common;

use common::checks::{self, Check};
use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn holds(check: Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(cases(500))]

    #[test]
    fn penman_round_trip(seed in any::<u64>()) {
        holds(checks::penman_round_trip(seed))?;
    }

    #[test]
    fn inverse_normalization_idempotent(seed in any::<u64>()) {
        holds(checks::inverse_normalization_idempotent(seed))?;
    }

    #[test]
    fn subject_reduction(seed in any::<u64>()) {
        holds(checks::subject_reduction(seed))?;
    }

    #[test]
    fn normalization_idempotent(seed in any::<u64>()) {
        holds(checks::normalization_idempotent(seed))?;
    }

    #[test]
    fn equivalences_are_reflexive_and_symmetric(a in any::<u64>(), b in any::<u64>()) {
        holds(checks::equivalences_are_reflexive_and_symmetric(a, b))?;
    }

    #[test]
    fn extensional_translations_are_propositions(seed in any::<u64>()) {
        holds(checks::extensional_translations_are_propositions(seed))?;
    }

    #[test]
    fn intensional_translations_are_world_propositions(seed in any::<u64>()) {
        holds(checks::intensional_translations_are_world_propositions(seed))?;
    }

    #[test]
    fn free_invariants(seed in any::<u64>()) {
        holds(checks::free_invariants(seed))?;
    }

    #[test]
    fn storage_agrees_without_quantifiers(seed in any::<u64>()) {
        holds(checks::storage_agrees_without_quantifiers(seed))?;
    }

    #[test]
    fn events_take_narrow_scope(seed in any::<u64>(), intensional in any::<bool>()) {
        holds(checks::events_take_narrow_scope(seed, intensional))?;
    }
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn solver_matches_enumeration(seed in any::<u64>(), lifted in any::<bool>()) {
        holds(checks::solver_matches_enumeration(seed, lifted))?;
    }
}

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn deferred_binding_on_enumerated_models(seed in any::<u64>()) {
        holds(checks::deferred_binding_on_enumerated_models(seed))?;
    }
}

proptest! {
    #![proptest_config(cases(96))]

    #[test]
    fn deferred_binding_within_bound(seed in any::<u64>()) {
        holds(checks::deferred_binding_within_bound(seed))?;
    }
}
