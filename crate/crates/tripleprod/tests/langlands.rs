mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parameter_algebra_properties(seed in any::<u64>()) {
        if let Err(e) = common::langlands_case(seed) {
            prop_assert!(false, "seed {}: {}", seed, e);
        }
    }
}

#[test]
fn fixed_seed_block_has_no_failures() {
    let failures = common::langlands_suite(0, 200);
    assert!(failures.is_empty(), "{failures:?}");
}
