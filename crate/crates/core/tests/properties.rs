//! Property suites for the exact substrate and the envelope solver, at the
//! proptest default case count (override with `PROPTEST_CASES`). The
//! acceptance target runs the same bodies at larger counts.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn cone_biduality(input in biduality_input()) {
        common::cone_biduality(input)?;
    }

    #[test]
    fn facet_identity(input in facet_input()) {
        common::facet_identity(input)?;
    }

    #[test]
    fn facet_identity_on_fixed_normals(offsets in hexagon_offsets()) {
        common::facet_identity_on_fixed_normals(offsets)?;
    }

    #[test]
    fn mixed_volume_symmetric_in_the_plane(a in full_polytope(2), b in full_polytope(2)) {
        common::mixed_volume_symmetric_in_the_plane((a, b))?;
    }

    #[test]
    fn mixed_volume_additive(a in full_polytope(2), a2 in full_polytope(2), b in full_polytope(2)) {
        common::mixed_volume_additive((a, a2, b))?;
    }

    #[test]
    fn mixed_volume_homogeneous(a in full_polytope(2), b in full_polytope(2), k in 1i64..=3) {
        common::mixed_volume_homogeneous((a, b, k))?;
    }

    #[test]
    fn envelope_monotone_in_the_obstacle(input in obstacle_input()) {
        common::envelope_monotone_in_the_obstacle(input)?;
    }

    #[test]
    fn envelope_monotone_in_the_truncation(input in truncation_input()) {
        common::envelope_monotone_in_the_truncation(input)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mixed_volume_symmetric_in_space(a in full_polytope(3), b in full_polytope(3), c in full_polytope(3)) {
        common::mixed_volume_symmetric_in_space((a, b, c))?;
    }
}
