mod common;

use common::{config, props};
use proptest::prelude::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dd_is_zero(f in props::below_top_minus_one()) {
        props::dd_is_zero(f)?;
    }

    #[test]
    fn delta_delta_is_zero(f in props::above_one()) {
        props::delta_delta_is_zero(f)?;
    }

    #[test]
    fn bianchi(input in props::bianchi_input()) {
        props::bianchi(input)?;
    }

    #[test]
    fn odd_symmetry(f in props::any_form()) {
        props::odd_symmetry(f)?;
    }

    #[test]
    fn delta_is_adjoint_of_d(input in (props::below_top(), props::raw())) {
        props::delta_is_adjoint_of_d(input)?;
    }

    #[test]
    fn d_matches_signed_boundary_sum(f in props::below_top()) {
        props::d_matches_signed_boundary_sum(f)?;
    }
}
