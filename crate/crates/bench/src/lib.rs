//! Fixtures shared by the criterion benches.

use cfquad_core::{Error, QuadraticSpec};

/// Non-square `d` in `lo..hi`, as `√d` specs.
pub fn sqrt_specs(lo: i64, hi: i64) -> Vec<QuadraticSpec> {
    (lo..hi)
        .filter_map(|d| match QuadraticSpec::from_i64(0, -d) {
            Ok(s) => Some(s),
            Err(Error::InvalidQuadratic(_)) => None,
            Err(e) => panic!("{e}"),
        })
        .collect()
}
