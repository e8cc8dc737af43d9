use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix over GF(p). Zero-sized shapes are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form plus the pivot column of each nonzero row.
struct Rref {
    matrix: DenseMatrix,
    pivots: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    actual: col.len(),
                });
            }
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, field.reduce(v));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect())
    }

    fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c);
                m.set(row, c, f.mul(v, inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for c in col..m.cols {
                    let v = f.mul_add(m.get(r, c), neg, m.get(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Gauss–Jordan inverse; [`Error::Singular`] when not invertible.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots.last().is_some_and(|&p| p >= n) {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c));
            }
        }
        Ok(inv)
    }

    /// A basis of `{ x : A x = 0 }`, one vector per free column.
    pub fn null_space_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let red = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0; self.cols];
                x[free] = 1;
                for (i, &p) in red.pivots.iter().enumerate() {
                    x[p] = f.neg(red.matrix.get(i, free));
                }
                x
            })
            .collect()
    }
}

/// Rank of the column set `vectors` (each of length `dim`).
pub fn rank_of_vectors(field: Field, dim: usize, vectors: &[Vec<u64>]) -> usize {
    DenseMatrix::from_columns(field, dim, vectors)
        .map(|m| m.rank())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf7() -> Field {
        Field::new(7).unwrap()
    }

    fn random_matrix(f: Field, rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(f, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    m.set(r, c, rng.gen_range(1..f.modulus()));
                }
            }
        }
        m
    }

    #[test]
    fn identity_rank_and_inverse() {
        let i3 = DenseMatrix::identity(gf7(), 3);
        assert_eq!(i3.rank(), 3);
        assert_eq!(i3.inverse().unwrap(), i3);
    }

    #[test]
    fn parallel_columns_rank() {
        let m = DenseMatrix::from_columns(gf7(), 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn diagonal_inverse() {
        let a = DenseMatrix::from_rows(gf7(), &[vec![2, 0], vec![0, 3]]).unwrap();
        let expected = DenseMatrix::from_rows(gf7(), &[vec![4, 0], vec![0, 5]]).unwrap();
        assert_eq!(a.inverse().unwrap(), expected);
    }

    #[test]
    fn singular_and_nonsquare_inverse() {
        let a = DenseMatrix::from_rows(gf7(), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(a.inverse(), Err(Error::Singular)));
        assert!(DenseMatrix::zeros(gf7(), 2, 3).inverse().is_err());
    }

    #[test]
    fn random_inverse_round_trip() {
        let f = Field::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_matrix(f, &mut rng, 6, 6, 0.8);
            if let Ok(inv) = a.inverse() {
                assert_eq!(inv.mul(&a).unwrap(), DenseMatrix::identity(f, 6));
            } else {
                assert!(a.rank() < 6);
            }
        }
    }

    #[test]
    fn null_space_examples() {
        let f = gf7();
        assert!(DenseMatrix::identity(f, 2).null_space_basis().is_empty());

        let a = DenseMatrix::from_columns(f, 2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let basis = a.null_space_basis();
        assert_eq!(basis, vec![vec![6, 6, 1]]);
        // proportional to (1, 1, 6)
        let scaled: Vec<u64> = basis[0].iter().map(|&x| f.mul(x, 6)).collect();
        assert_eq!(scaled, vec![1, 1, 6]);
        assert_eq!(a.mul_vec(&[1, 1, 6]).unwrap(), vec![0, 0]);

        let z = DenseMatrix::zeros(f, 2, 3);
        let zb = z.null_space_basis();
        assert_eq!(zb.len(), 3);
        assert_eq!(rank_of_vectors(f, 3, &zb), 3);
    }

    #[test]
    fn empty_shapes() {
        let f = gf7();
        assert_eq!(DenseMatrix::zeros(f, 0, 3).rank(), 0);
        assert_eq!(DenseMatrix::zeros(f, 0, 3).null_space_basis().len(), 3);
        assert_eq!(DenseMatrix::zeros(f, 3, 0).null_space_basis().len(), 0);
        assert_eq!(DenseMatrix::identity(f, 0).inverse().unwrap().rows(), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rank_nullity_and_transpose(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..9) {
                let f = Field::new(13).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_matrix(f, &mut rng, rows, cols, 0.4);
                let rank = a.rank();
                prop_assert_eq!(rank, a.transpose().rank());
                let basis = a.null_space_basis();
                prop_assert_eq!(basis.len() + rank, cols);
                prop_assert_eq!(rank_of_vectors(f, cols, &basis), basis.len());
                for x in &basis {
                    prop_assert!(a.mul_vec(x).unwrap().iter().all(|&v| v == 0));
                }
            }
        }
    }
}
