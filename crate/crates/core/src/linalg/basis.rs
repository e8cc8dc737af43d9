use crate::error::{Error, Result};
use crate::field::Field;

use super::Column;

#[derive(Clone, Debug)]
struct ReducedRow {
    pivot: usize,
    /// Reduced vector with a 1 at `pivot` and zeros at every earlier pivot.
    vector: Vec<u64>,
    /// `vector = Σ combo[j] · accepted_j` over the columns accepted so far.
    combo: Vec<u64>,
}

/// Incrementally maintained column basis with stored elimination
/// multipliers, giving `O(r·k + k²)` membership and coordinate queries.
#[derive(Clone, Debug)]
pub struct BasisTracker {
    field: Field,
    dim: usize,
    accepted: Vec<usize>,
    basis: Vec<ReducedRow>,
}

/// Outcome of reducing a vector against the tracked basis.
struct Reduction {
    residual: Vec<u64>,
    multipliers: Vec<u64>,
}

impl BasisTracker {
    pub fn new(field: Field, dim: usize) -> Self {
        Self {
            field,
            dim,
            accepted: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Labels of the accepted columns, in acceptance order.
    pub fn accepted(&self) -> &[usize] {
        &self.accepted
    }

    fn reduce(&self, mut v: Vec<u64>) -> Reduction {
        let f = self.field;
        let mut multipliers = vec![0; self.basis.len()];
        for (i, row) in self.basis.iter().enumerate() {
            let t = v[row.pivot];
            if t == 0 {
                continue;
            }
            multipliers[i] = t;
            let neg = f.neg(t);
            for (x, &b) in v.iter_mut().zip(&row.vector).skip(row.pivot) {
                if b != 0 {
                    *x = f.mul_add(*x, neg, b);
                }
            }
        }
        Reduction {
            residual: v,
            multipliers,
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: len,
            });
        }
        Ok(())
    }

    /// Inserts `v` under `label` when it is independent of the accepted
    /// columns. The tracker is unchanged on rejection.
    pub fn try_insert_dense(&mut self, label: usize, v: &[u64]) -> Result<bool> {
        self.check_len(v.len())?;
        let f = self.field;
        let red = self.reduce(v.iter().map(|&x| f.reduce(x)).collect());
        let Some(pivot) = red.residual.iter().position(|&x| x != 0) else {
            return Ok(false);
        };
        let scale = f.inv(red.residual[pivot])?;
        let vector: Vec<u64> = red.residual.iter().map(|&x| f.mul(x, scale)).collect();
        // residual = v − Σ t_i b_i, so its combination is e_new − Σ t_i combo_i
        let k = self.accepted.len();
        let mut combo = vec![0; k + 1];
        combo[k] = 1;
        for (t, row) in red.multipliers.iter().zip(&self.basis) {
            if *t == 0 {
                continue;
            }
            let neg = f.neg(*t);
            for (c, &x) in combo.iter_mut().zip(&row.combo) {
                *c = f.mul_add(*c, neg, x);
            }
        }
        for c in &mut combo {
            *c = f.mul(*c, scale);
        }
        self.basis.push(ReducedRow {
            pivot,
            vector,
            combo,
        });
        self.accepted.push(label);
        Ok(true)
    }

    pub fn try_insert(&mut self, label: usize, col: Column<'_>) -> Result<bool> {
        if let Some(&r) = col.rows.iter().find(|&&r| r >= self.dim) {
            return Err(Error::IndexOutOfRange { index: r, len: self.dim });
        }
        self.try_insert_dense(label, &col.to_dense(self.dim))
    }

    pub fn contains_dense(&self, v: &[u64]) -> Result<bool> {
        self.check_len(v.len())?;
        let f = self.field;
        let red = self.reduce(v.iter().map(|&x| f.reduce(x)).collect());
        Ok(red.residual.iter().all(|&x| x == 0))
    }

    pub fn contains(&self, col: Column<'_>) -> bool {
        if col.is_zero() {
            return true;
        }
        let red = self.reduce(col.to_dense(self.dim));
        red.residual.iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in terms of the accepted columns (acceptance
    /// order), or `None` when `v` is outside their span.
    pub fn express_dense(&self, v: &[u64]) -> Result<Option<Vec<u64>>> {
        self.check_len(v.len())?;
        let f = self.field;
        let red = self.reduce(v.iter().map(|&x| f.reduce(x)).collect());
        if red.residual.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let mut coords = vec![0; self.accepted.len()];
        for (t, row) in red.multipliers.iter().zip(&self.basis) {
            if *t == 0 {
                continue;
            }
            for (c, &x) in coords.iter_mut().zip(&row.combo) {
                *c = f.mul_add(*c, *t, x);
            }
        }
        Ok(Some(coords))
    }

    pub fn express(&self, col: Column<'_>) -> Option<Vec<u64>> {
        self.express_dense(&col.to_dense(self.dim))
            .expect("column length equals the ambient dimension")
    }
}

/// Free-function form of [`BasisTracker::try_insert`].
pub fn basis_try_insert(tracker: &mut BasisTracker, label: usize, col: Column<'_>) -> Result<bool> {
    tracker.try_insert(label, col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank_of_vectors, SparseMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parallel_column_rejected() {
        let f = Field::new(7).unwrap();
        let mut t = BasisTracker::new(f, 2);
        assert!(t.try_insert_dense(0, &[1, 0]).unwrap());
        assert!(!t.try_insert_dense(1, &[2, 0]).unwrap());
        assert_eq!(t.rank(), 1);
        assert_eq!(t.accepted(), &[0]);
        assert!(t.try_insert_dense(2, &[3, 3]).is_ok_and(|a| a));
        assert!(t.try_insert_dense(3, &[1]).is_err());
    }

    #[test]
    fn express_recovers_coordinates() {
        let f = Field::new(7).unwrap();
        let mut t = BasisTracker::new(f, 3);
        t.try_insert_dense(0, &[1, 2, 0]).unwrap();
        t.try_insert_dense(1, &[0, 1, 1]).unwrap();
        // 3·(1,2,0) + 2·(0,1,1) = (3, 1, 2) mod 7
        assert_eq!(t.express_dense(&[3, 1, 2]).unwrap(), Some(vec![3, 2]));
        assert_eq!(t.express_dense(&[0, 0, 1]).unwrap(), None);
        assert_eq!(t.express_dense(&[0, 0, 0]).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn random_stream_matches_rank_oracle() {
        let f = Field::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let r = 6;
            let cols: Vec<Vec<u64>> = (0..20)
                .map(|_| {
                    (0..r)
                        .map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..f.modulus()) } else { 0 })
                        .collect()
                })
                .collect();
            let m = SparseMatrix::from_dense_columns(f, r, &cols).unwrap();
            let mut t = BasisTracker::new(f, r);
            for j in 0..m.cols() {
                let before = rank_of_vectors(f, r, &t.accepted().iter().map(|&i| cols[i].clone()).collect::<Vec<_>>());
                let accepted = t.try_insert(j, m.column(j)).unwrap();
                let mut with = t.accepted().iter().map(|&i| cols[i].clone()).collect::<Vec<_>>();
                if !accepted {
                    with.push(cols[j].clone());
                }
                let after = rank_of_vectors(f, r, &with);
                assert_eq!(accepted, after == before + 1);
            }
            let acc: Vec<Vec<u64>> = t.accepted().iter().map(|&i| cols[i].clone()).collect();
            assert_eq!(rank_of_vectors(f, r, &acc), t.rank());
            assert_eq!(t.rank(), rank_of_vectors(f, r, &cols));
            for j in 0..m.cols() {
                let coords = t.express(m.column(j)).expect("everything is spanned");
                let mut recon = vec![0; r];
                for (c, &i) in coords.iter().zip(t.accepted()) {
                    for (x, &y) in recon.iter_mut().zip(&cols[i]) {
                        *x = f.mul_add(*x, *c, y);
                    }
                }
                assert_eq!(recon, cols[j]);
            }
        }
    }
}
