use crate::linalg::BasisTracker;

use super::Instance;

/// Exchange graph of a common independent set `I`.
///
/// For `x ∈ I` and `y ∉ I` there is an arc `x → y` when `I − x + y` is
/// independent in the first matroid and an arc `y → x` when it is
/// independent in the second. Sources are the `y` with `I + y`
/// independent in the first matroid, sinks the same for the second.
#[derive(Clone, Debug)]
pub(crate) struct ExchangeGraph {
    pub in_set: Vec<bool>,
    pub sources: Vec<bool>,
    pub sinks: Vec<bool>,
    /// Out-neighbours of every vertex, increasing.
    pub out: Vec<Vec<usize>>,
}

impl ExchangeGraph {
    pub fn build(inst: &Instance, set: &[usize]) -> Self {
        let n = inst.n();
        let mut in_set = vec![false; n];
        for &i in set {
            in_set[i] = true;
        }
        let tracker = |m: &crate::linalg::SparseMatrix| {
            let mut t = BasisTracker::new(m.field(), m.rows());
            for &i in set {
                let ok = t.try_insert(i, m.column(i)).expect("column fits the matrix");
                assert!(ok, "exchange graph requires an independent set");
            }
            t
        };
        let t1 = tracker(inst.m1());
        let t2 = tracker(inst.m2());
        let mut sources = vec![false; n];
        let mut sinks = vec![false; n];
        let mut out = vec![Vec::new(); n];
        for y in (0..n).filter(|&y| !in_set[y]) {
            match t1.express(inst.m1().column(y)) {
                None => {
                    sources[y] = true;
                    for &x in t1.accepted() {
                        out[x].push(y);
                    }
                }
                Some(coords) => {
                    for (&x, &c) in t1.accepted().iter().zip(&coords) {
                        if c != 0 {
                            out[x].push(y);
                        }
                    }
                }
            }
            match t2.express(inst.m2().column(y)) {
                None => {
                    sinks[y] = true;
                    out[y].extend(t2.accepted().iter().copied());
                }
                Some(coords) => {
                    for (&x, &c) in t2.accepted().iter().zip(&coords) {
                        if c != 0 {
                            out[y].push(x);
                        }
                    }
                }
            }
        }
        for adj in &mut out {
            adj.sort_unstable();
        }
        Self {
            in_set,
            sources,
            sinks,
            out,
        }
    }

    pub fn len(&self) -> usize {
        self.in_set.len()
    }
}

/// `I Δ path`, sorted.
pub(crate) fn symmetric_difference(set: &[usize], path: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().copied().filter(|i| !path.contains(i)).collect();
    out.extend(path.iter().copied().filter(|i| !set.contains(i)));
    out.sort_unstable();
    out
}
