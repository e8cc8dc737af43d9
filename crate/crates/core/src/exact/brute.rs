use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::BasisTracker;

use super::Instance;

/// Largest ground set [`brute_force_intersection`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    pub size: usize,
    pub size_witness: Vec<usize>,
    /// Present for weighted instances.
    pub weight: Option<BigRational>,
    pub weight_witness: Vec<usize>,
}

struct Search<'a> {
    inst: &'a Instance,
    current: Vec<usize>,
    best: BruteForce,
}

impl Search<'_> {
    fn visit(&mut self, start: usize, t1: &BasisTracker, t2: &BasisTracker) {
        if self.current.len() > self.best.size {
            self.best.size = self.current.len();
            self.best.size_witness = self.current.clone();
        }
        if let Some(best) = &self.best.weight {
            let w = self.inst.weight_of(&self.current);
            if &w > best {
                self.best.weight = Some(w);
                self.best.weight_witness = self.current.clone();
            }
        }
        for j in start..self.inst.n() {
            let mut n1 = t1.clone();
            if !n1.try_insert(j, self.inst.m1().column(j)).expect("column fits") {
                continue;
            }
            let mut n2 = t2.clone();
            if !n2.try_insert(j, self.inst.m2().column(j)).expect("column fits") {
                continue;
            }
            self.current.push(j);
            self.visit(j + 1, &n1, &n2);
            self.current.pop();
        }
    }
}

/// Exhaustive search over all common independent sets (`n ≤ 20`).
pub fn brute_force_intersection(inst: &Instance) -> Result<BruteForce> {
    if inst.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n: inst.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut search = Search {
        inst,
        current: Vec::new(),
        best: BruteForce {
            size: 0,
            size_witness: Vec::new(),
            weight: inst.weights().map(|_| BigRational::zero()),
            weight_witness: Vec::new(),
        },
    };
    let t1 = BasisTracker::new(inst.field(), inst.m1().rows());
    let t2 = BasisTracker::new(inst.field(), inst.m2().rows());
    search.visit(0, &t1, &t2);
    Ok(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::SparseMatrix;

    #[test]
    fn empty_ground_set() {
        let f = Field::new(7).unwrap();
        let inst = Instance::new(SparseMatrix::zeros(f, 2, 0), SparseMatrix::zeros(f, 2, 0)).unwrap();
        let b = brute_force_intersection(&inst).unwrap();
        assert_eq!(b.size, 0);
        assert!(b.size_witness.is_empty());
        assert_eq!(b.weight, None);
    }

    #[test]
    fn worked_instance() {
        let f = Field::new(7).unwrap();
        let m1 = SparseMatrix::from_dense_columns(f, 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let m2 = SparseMatrix::from_dense_columns(f, 2, &[vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        let w = [5, 3, 2].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let inst = Instance::new(m1, m2).unwrap().with_weights(w).unwrap();
        let b = brute_force_intersection(&inst).unwrap();
        assert_eq!(b.size, 2);
        assert_eq!(b.weight, Some(BigRational::from_integer(7.into())));
        assert_eq!(b.weight_witness, vec![0, 2]);
    }

    #[test]
    fn guard() {
        let f = Field::new(7).unwrap();
        let m = SparseMatrix::zeros(f, 1, 21);
        let inst = Instance::new(m.clone(), m).unwrap();
        assert!(matches!(brute_force_intersection(&inst), Err(Error::TooLarge { n: 21, limit: 20 })));
    }
}
