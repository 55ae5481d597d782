mod common;

use common::{config, props};
use proptest::prelude::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn reflexive(w in props::sparse()) {
        props::reflexive(w)?;
    }

    #[test]
    fn antisymmetric(input in (props::sparse(), any::<u64>(), any::<u64>())) {
        props::antisymmetric(input)?;
    }

    #[test]
    fn transitive(input in (props::sparse(), any::<u64>(), any::<u64>())) {
        props::transitive(input)?;
    }

    #[test]
    fn complement_is_below(input in (props::sparse(), any::<u64>())) {
        props::complement_is_below(input)?;
    }

    #[test]
    fn decomposition_roundtrip(w in props::tangled()) {
        props::decomposition_roundtrip(w)?;
    }

    #[test]
    fn activity_factorizes(input in props::activity_input()) {
        props::activity_factorizes(input)?;
    }
}
