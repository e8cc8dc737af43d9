use serde::{Deserialize, Serialize};

use crate::linalg::rank_of_set;

use super::graph::{symmetric_difference, ExchangeGraph};
use super::Instance;

/// A pair `(S, T)` with `S ∪ T = [n]`, certifying `|I| ≤ rank₁(S) + rank₂(T)`
/// for every common independent `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityDual {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl CardinalityDual {
    pub fn value(&self, inst: &Instance) -> usize {
        rank_of_set(inst.m1(), &self.s) + rank_of_set(inst.m2(), &self.t)
    }

    pub fn covers(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &i in self.s.iter().chain(&self.t) {
            if i >= n {
                return false;
            }
            seen[i] = true;
        }
        seen.into_iter().all(|b| b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalitySolution {
    pub set: Vec<usize>,
    pub dual: CardinalityDual,
    pub augmentations: usize,
}

/// Shortest source-to-sink path in the exchange graph, preferring the
/// lowest-indexed sink and the earliest-discovered predecessors. The second
/// component lists every vertex reachable from a source.
fn shortest_augmenting_path(g: &ExchangeGraph) -> (Option<Vec<usize>>, Vec<bool>) {
    let n = g.len();
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| g.sources[v]).collect();
    for &v in &frontier {
        seen[v] = true;
    }
    loop {
        if let Some(&t) = frontier.iter().filter(|&&v| g.sinks[v]).min() {
            let mut path = vec![t];
            let mut v = t;
            while pred[v] != usize::MAX {
                v = pred[v];
                path.push(v);
            }
            path.reverse();
            return (Some(path), seen);
        }
        if frontier.is_empty() {
            return (None, seen);
        }
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in &g.out[u] {
                if !seen[v] {
                    seen[v] = true;
                    pred[v] = u;
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
}

/// Maximum common independent set by exchange-graph augmentation, with a
/// tight dual: `T` is the set reachable from the sources once no
/// augmenting path exists, and `S` its complement.
pub fn max_common_independent(inst: &Instance) -> CardinalitySolution {
    let n = inst.n();
    let mut set: Vec<usize> = Vec::new();
    let mut augmentations = 0;
    loop {
        let g = ExchangeGraph::build(inst, &set);
        let (path, reach) = shortest_augmenting_path(&g);
        match path {
            Some(p) => {
                set = symmetric_difference(&set, &p);
                augmentations += 1;
            }
            None => {
                let t: Vec<usize> = (0..n).filter(|&v| reach[v]).collect();
                let s: Vec<usize> = (0..n).filter(|&v| !reach[v]).collect();
                let dual = CardinalityDual { s, t };
                debug_assert_eq!(dual.value(inst), set.len());
                return CardinalitySolution {
                    set,
                    dual,
                    augmentations,
                };
            }
        }
    }
}

/// Whether `set` is common independent and `dual` certifies it optimal.
pub fn verify_dual_cardinality(inst: &Instance, set: &[usize], dual: &CardinalityDual) -> bool {
    dual.covers(inst.n()) && inst.is_common_independent(set) && dual.value(inst) == set.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::SparseMatrix;

    fn gf7() -> Field {
        Field::new(7).unwrap()
    }

    fn worked() -> Instance {
        let f = gf7();
        let m1 = SparseMatrix::from_dense_columns(f, 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let m2 = SparseMatrix::from_dense_columns(f, 2, &[vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        Instance::new(m1, m2).unwrap()
    }

    #[test]
    fn identity_pair() {
        let i2 = SparseMatrix::identity(gf7(), 2);
        let inst = Instance::new(i2.clone(), i2).unwrap();
        let sol = max_common_independent(&inst);
        assert_eq!(sol.set, vec![0, 1]);
        assert_eq!(sol.dual.value(&inst), 2);
        assert_eq!(sol.augmentations, 2);
    }

    #[test]
    fn worked_instance() {
        let inst = worked();
        let sol = max_common_independent(&inst);
        assert_eq!(sol.set, vec![0, 2]);
        assert!(verify_dual_cardinality(&inst, &sol.set, &sol.dual));
        let hand = CardinalityDual { s: vec![0, 1], t: vec![2] };
        assert!(verify_dual_cardinality(&inst, &sol.set, &hand));
    }

    #[test]
    fn zero_matroid() {
        let f = gf7();
        let inst = Instance::new(SparseMatrix::zeros(f, 2, 3), SparseMatrix::identity(f, 3)).unwrap();
        let sol = max_common_independent(&inst);
        assert!(sol.set.is_empty());
        assert_eq!(sol.dual.value(&inst), 0);
    }

    #[test]
    fn verify_rejects_loose_or_broken_certificates() {
        let inst = worked();
        let everything = CardinalityDual { s: vec![0, 1, 2], t: vec![0, 1, 2] };
        assert_eq!(everything.value(&inst), 4);
        assert!(!verify_dual_cardinality(&inst, &[0, 2], &everything));
        // {1, 2} is dependent in the second matroid
        let tight = CardinalityDual { s: vec![0, 1], t: vec![2] };
        assert!(!verify_dual_cardinality(&inst, &[1, 2], &tight));
        let partial = CardinalityDual { s: vec![0], t: vec![2] };
        assert!(!verify_dual_cardinality(&inst, &[0, 2], &partial));
    }
}
