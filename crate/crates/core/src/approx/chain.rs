use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{Instance, WeightSplitting};
use crate::linalg::{BasisTracker, SparseMatrix};

/// Which matroid a chain dual lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn matrix(self, inst: &Instance) -> &SparseMatrix {
        match self {
            Side::First => inst.m1(),
            Side::Second => inst.m2(),
        }
    }
}

/// A dual supported on the prefix spans of one element sequence:
/// weight `y_α` on `span({e₁, …, e_α})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDual {
    pub side: Side,
    pub elements: Vec<usize>,
    pub weights: Vec<BigRational>,
    /// `Y_α = Σ_{γ ≥ α} y_γ`.
    pub suffix: Vec<BigRational>,
    /// `ρ_α = rank({e₁, …, e_α})`.
    pub ranks: Vec<usize>,
}

impl ChainDual {
    pub fn new(side: Side, m: &SparseMatrix, elements: Vec<usize>, weights: Vec<BigRational>) -> Self {
        assert_eq!(elements.len(), weights.len(), "one weight per prefix");
        let mut t = BasisTracker::new(m.field(), m.rows());
        let ranks = elements
            .iter()
            .map(|&e| {
                t.try_insert(e, m.column(e)).expect("column fits the matrix");
                t.rank()
            })
            .collect();
        let suffix = suffix_sums(&weights);
        Self {
            side,
            elements,
            weights,
            suffix,
            ranks,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Σ_α ρ_α · y_α`.
    pub fn objective(&self) -> BigRational {
        self.weights
            .iter()
            .zip(&self.ranks)
            .map(|(y, &r)| y * BigRational::from_integer(r.into()))
            .sum()
    }

    /// Dual value received by an element whose first containing prefix is
    /// `alpha` (1-based); zero when it lies in no prefix span.
    pub fn value_at(&self, alpha: Option<usize>) -> BigRational {
        match alpha {
            Some(a) if a >= 1 && a <= self.len() => self.suffix[a - 1].clone(),
            _ => BigRational::zero(),
        }
    }

    /// Renames element `i` to `labels[i]`, e.g. from a subinstance to the
    /// full ground set.
    pub fn relabel(mut self, labels: &[usize]) -> Self {
        for e in &mut self.elements {
            *e = labels[*e];
        }
        self
    }
}

pub fn suffix_sums(weights: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); weights.len()];
    let mut acc = BigRational::zero();
    for (o, w) in out.iter_mut().zip(weights).rev() {
        acc += w;
        *o = acc.clone();
    }
    out
}

fn chain_for(side: Side, inst: &Instance, set: &[usize], level: &[BigRational]) -> ChainDual {
    let clip = |x: &BigRational| if x.is_negative() { BigRational::zero() } else { x.clone() };
    let mut order = set.to_vec();
    order.sort_by(|&a, &b| level[b].cmp(&level[a]).then(a.cmp(&b)));
    let weights = (0..order.len())
        .map(|i| {
            let here = clip(&level[order[i]]);
            let next = order.get(i + 1).map_or_else(BigRational::zero, |&e| clip(&level[e]));
            here - next
        })
        .collect();
    ChainDual::new(side, side.matrix(inst), order, weights)
}

/// Chain duals `(y, z)` from a weight splitting: `y` orders `I` by `c₁`
/// descending (ties by index) and puts the gap between consecutive levels
/// on each prefix span, so that `Y_α = c₁(e_α)`; `z` likewise with `c₂`.
pub fn build_compact_dual(inst: &Instance, set: &[usize], split: &WeightSplitting) -> (ChainDual, ChainDual) {
    (
        chain_for(Side::First, inst, set, &split.c1),
        chain_for(Side::Second, inst, set, &split.c2),
    )
}

/// Smallest `base^t ≥ x` over integers `t`, for `x > 0` and `base > 1`.
pub fn pow_ceil(x: &BigRational, base: &BigRational) -> BigRational {
    assert!(x.is_positive() && base > &BigRational::one());
    let estimate = match (x.to_f64(), base.to_f64()) {
        (Some(xf), Some(bf)) if xf.is_finite() && xf > 0.0 && bf > 1.0 => (xf.ln() / bf.ln()).ceil(),
        _ => 0.0,
    };
    let mut t = estimate.clamp(-1e6, 1e6) as i32;
    while &base.pow(t) < x {
        t += 1;
    }
    while &base.pow(t - 1) >= x {
        t -= 1;
    }
    base.pow(t)
}

/// Rounds every positive prefix weight up to a power of `1 + eps`.
pub fn round_up_chain(d: &ChainDual, eps: &BigRational) -> ChainDual {
    let base = BigRational::one() + eps;
    let weights: Vec<BigRational> = d
        .weights
        .iter()
        .map(|y| if y.is_positive() { pow_ceil(y, &base) } else { y.clone() })
        .collect();
    ChainDual {
        side: d.side,
        elements: d.elements.clone(),
        suffix: suffix_sums(&weights),
        weights,
        ranks: d.ranks.clone(),
    }
}

/// Exact first-prefix lookup by elimination.
///
/// An element lies in `span({e₁, …, e_α})` exactly when its coordinates
/// over the independent chain elements vanish beyond position `α`.
#[derive(Clone, Debug)]
pub struct ChainOracle {
    tracker: BasisTracker,
    /// Chain position (1-based) of each accepted basis column.
    positions: Vec<usize>,
    len: usize,
}

impl ChainOracle {
    pub fn new(m: &SparseMatrix, elements: &[usize]) -> Self {
        let mut tracker = BasisTracker::new(m.field(), m.rows());
        let mut positions = Vec::new();
        for (i, &e) in elements.iter().enumerate() {
            if tracker.try_insert(e, m.column(e)).expect("column fits the matrix") {
                positions.push(i + 1);
            }
        }
        Self {
            tracker,
            positions,
            len: elements.len(),
        }
    }

    pub fn first_member(&self, m: &SparseMatrix, j: usize) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        let coords = self.tracker.express(m.column(j))?;
        let last = coords
            .iter()
            .zip(&self.positions)
            .filter(|(c, _)| **c != 0)
            .map(|(_, &p)| p)
            .max();
        Some(last.unwrap_or(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn worked() -> Instance {
        let f = Field::new(7).unwrap();
        let m1 = SparseMatrix::from_dense_columns(f, 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let m2 = SparseMatrix::from_dense_columns(f, 2, &[vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        Instance::new(m1, m2)
            .unwrap()
            .with_weights(vec![rat(5, 1), rat(3, 1), rat(2, 1)])
            .unwrap()
    }

    fn hand_split() -> WeightSplitting {
        WeightSplitting {
            c1: vec![rat(5, 1), rat(3, 1), rat(0, 1)],
            c2: vec![rat(0, 1), rat(0, 1), rat(2, 1)],
        }
    }

    #[test]
    fn compact_dual_of_worked_instance() {
        let inst = worked();
        let (y, z) = build_compact_dual(&inst, &[0, 2], &hand_split());
        assert_eq!(y.elements, vec![0, 2]);
        assert_eq!(y.weights, vec![rat(5, 1), rat(0, 1)]);
        assert_eq!(z.elements, vec![2, 0]);
        assert_eq!(z.weights, vec![rat(2, 1), rat(0, 1)]);
        assert_eq!(y.objective() + z.objective(), rat(7, 1));
        // element 1 enters span₁ at prefix 1 and span₂ at prefix 1
        let oy = ChainOracle::new(inst.m1(), &y.elements);
        let oz = ChainOracle::new(inst.m2(), &z.elements);
        assert_eq!(oy.first_member(inst.m1(), 1), Some(1));
        assert_eq!(oz.first_member(inst.m2(), 1), Some(1));
        let cover = y.value_at(oy.first_member(inst.m1(), 1)) + z.value_at(oz.first_member(inst.m2(), 1));
        assert_eq!(cover, rat(7, 1));
    }

    #[test]
    fn empty_chain() {
        let inst = worked();
        let (y, z) = build_compact_dual(&inst, &[], &hand_split());
        assert!(y.is_empty() && z.is_empty());
        assert_eq!(y.objective(), rat(0, 1));
        let o = ChainOracle::new(inst.m1(), &[]);
        assert_eq!(o.first_member(inst.m1(), 0), None);
        assert_eq!(y.value_at(None), rat(0, 1));
    }

    #[test]
    fn rounding_examples() {
        let half = rat(1, 2);
        let base = BigRational::one() + &half;
        assert_eq!(pow_ceil(&rat(6, 5), &base), rat(3, 2));
        assert_eq!(pow_ceil(&rat(1, 1), &base), rat(1, 1));
        assert_eq!(pow_ceil(&rat(1, 2), &base), rat(2, 3));
        assert_eq!(pow_ceil(&rat(9, 4), &base), rat(9, 4));
        let f = Field::new(7).unwrap();
        let m = SparseMatrix::identity(f, 3);
        let d = ChainDual::new(Side::First, &m, vec![0, 1, 2], vec![rat(6, 5), rat(0, 1), rat(1, 1)]);
        let r = round_up_chain(&d, &half);
        assert_eq!(r.weights, vec![rat(3, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(r.suffix, vec![rat(5, 2), rat(1, 1), rat(1, 1)]);
        assert!(r.objective() <= d.objective() * (BigRational::one() + half));
    }

    #[test]
    fn oracle_handles_zero_and_dependent_chain_elements() {
        let f = Field::new(7).unwrap();
        let m = SparseMatrix::from_dense_columns(
            f,
            2,
            &[vec![1, 0], vec![2, 0], vec![0, 1], vec![0, 0], vec![3, 3]],
        )
        .unwrap();
        let o = ChainOracle::new(&m, &[0, 1, 2]);
        assert_eq!(o.first_member(&m, 1), Some(1));
        assert_eq!(o.first_member(&m, 3), Some(1));
        assert_eq!(o.first_member(&m, 4), Some(3));
        let short = ChainOracle::new(&m, &[0, 1]);
        assert_eq!(short.first_member(&m, 4), None);
    }
}
