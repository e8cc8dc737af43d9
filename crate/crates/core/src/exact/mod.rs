//! Exact matroid intersection on small (sparsified) instances, with
//! optimality certificates, and an exhaustive oracle for tests.

mod brute;
mod cardinality;
mod graph;
mod instance;
mod weighted;

pub use brute::{brute_force_intersection, BruteForce, BRUTE_FORCE_LIMIT};
pub use cardinality::{max_common_independent, verify_dual_cardinality, CardinalityDual, CardinalitySolution};
pub use instance::Instance;
pub use weighted::{
    check_weight_splitting, greedy_max_weight, weighted_exact_with_splitting, WeightSplitting,
    WeightedSolution,
};
