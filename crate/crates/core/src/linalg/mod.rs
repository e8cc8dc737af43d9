//! Exact sparse and dense linear algebra over GF(p).

mod basis;
mod dense;
mod sparse;

pub use basis::{basis_try_insert, BasisTracker};
pub use dense::{rank_of_vectors, DenseMatrix};
pub use sparse::{left_apply_all, Column, SparseMatrix};

/// Rank of any sparse matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    m.rank()
}

/// Rank of the columns of `m` indexed by `set`.
pub fn rank_of_set(m: &SparseMatrix, set: &[usize]) -> usize {
    let mut t = BasisTracker::new(m.field(), m.rows());
    for &j in set {
        t.try_insert(j, m.column(j)).expect("column fits the matrix");
    }
    t.rank()
}

/// Whether the columns indexed by `set` are linearly independent.
pub fn is_independent(m: &SparseMatrix, set: &[usize]) -> bool {
    let mut t = BasisTracker::new(m.field(), m.rows());
    set.iter()
        .all(|&j| t.try_insert(j, m.column(j)).expect("column fits the matrix"))
}

/// `x ← x + a·y` componentwise.
pub(crate) fn axpy(field: &crate::field::Field, x: &mut [u64], a: u64, y: &[u64]) {
    if a == 0 {
        return;
    }
    for (xi, &yi) in x.iter_mut().zip(y) {
        if yi != 0 {
            *xi = field.mul_add(*xi, a, yi);
        }
    }
}
