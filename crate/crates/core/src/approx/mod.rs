//! `(1 − ε)`-approximate matroid intersection by adaptive sparsification.
//!
//! Both loops repeatedly sample a small subinstance in proportion to
//! multiplicative weights, solve it exactly, extend its dual to the whole
//! ground set and halve the weight of every element the dual already
//! covers. Uncovered elements become more likely to be sampled, so after
//! `O(log n / ε)` rounds some subinstance contains a near-optimal solution.

mod cardinality;
mod chain;
mod membership;
mod params;
mod trace;
mod weighted;
mod weights;

pub use cardinality::{approx_cardinality, solve_cardinality, CardinalityOutcome, LoopRun};
pub use chain::{build_compact_dual, pow_ceil, round_up_chain, suffix_sums, ChainDual, ChainOracle, Side};
pub use membership::{MembershipQuery, PrefixMembership};
pub use params::{ApproxParams, Epsilon};
pub use trace::{AuditRecord, IterationRecord, LevelRecord};
pub use weighted::{approx_weighted, coverage_check, solve_weighted, WeightedCounters, WeightedOutcome, WeightedRun};
pub use weights::{sample_proportional, WeightState};
