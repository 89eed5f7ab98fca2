//! Benchmark fixtures over the `matrod` core.

pub use matrod::*;

use std::collections::BTreeMap;

use matrod::pearson::FamilySpec;

/// A catalog family at default parameters.
pub fn family(name: &str) -> FamilySpec {
    matrod::catalog::load(name, &BTreeMap::new()).expect("catalog family")
}
