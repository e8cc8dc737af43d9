use serde::{Deserialize, Serialize};

/// One round of a sparsification loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub sample_size: usize,
    /// Size (cardinality loop) or weight (weighted loop) of the subsolve.
    pub subsolve: String,
    /// Elements whose weight was halved.
    pub halved: usize,
}

/// One level `ℓ` of the cardinality doubling schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub sketch_rows: [usize; 2],
    pub k: usize,
    pub best_size: usize,
    pub resampled: bool,
    pub iterations: Vec<IterationRecord>,
}

/// Exact checks of one weighted subsolve's chain duals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub iteration: usize,
    /// Unrounded duals cover every subinstance element (elimination).
    pub feasible: bool,
    /// Unrounded objective equals `c₁(I) + c₂(I) = c(I)`.
    pub objective_exact: bool,
    /// Rounded objective is at most `(1 + eps)·c(I)`.
    pub rounded_within: bool,
    /// Elements covered by elimination but not by the randomized test.
    pub one_sided_violations: usize,
}

impl AuditRecord {
    pub fn passed(&self) -> bool {
        self.feasible && self.objective_exact && self.rounded_within && self.one_sided_violations == 0
    }
}
