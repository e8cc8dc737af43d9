use crate::error::{Error, Result};
use crate::field::Field;

use super::DenseMatrix;

/// Column-compressed sparse matrix over GF(p).
///
/// Rows inside each column are strictly increasing and every stored value
/// is nonzero, so `nnz` is exactly the number of nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<u64>,
}

/// Borrowed view of one column.
#[derive(Clone, Copy, Debug)]
pub struct Column<'a> {
    pub rows: &'a [usize],
    pub values: &'a [u64],
}

impl<'a> Column<'a> {
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + 'a {
        self.rows.iter().copied().zip(self.values.iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_dense(&self, len: usize) -> Vec<u64> {
        let mut out = vec![0; len];
        for (r, v) in self.iter() {
            out[r] = v;
        }
        out
    }

    /// `Σ v[row] · value` over the stored entries.
    pub fn dot(&self, field: &Field, v: &[u64]) -> u64 {
        self.iter().fold(0, |acc, (r, x)| field.mul_add(acc, v[r], x))
    }
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::from_columns(field, n, (0..n).map(|i| vec![(i, 1)]).collect())
            .expect("identity columns are in range")
    }

    /// Builds from per-column `(row, value)` lists. Values are reduced,
    /// zeros are dropped and rows are sorted; a repeated row is an error.
    pub fn from_columns(field: Field, rows: usize, columns: Vec<Vec<(usize, u64)>>) -> Result<Self> {
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_unstable_by_key(|&(r, _)| r);
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate entry in row {}",
                        w[0].0
                    )));
                }
            }
            for (r, v) in col {
                if r >= rows {
                    return Err(Error::IndexOutOfRange { index: r, len: rows });
                }
                let v = field.reduce(v);
                if v != 0 {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Ok(Self {
            field,
            rows,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds from `(row, col, value)` triplets in any order.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        let mut columns = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if c >= cols {
                return Err(Error::IndexOutOfRange { index: c, len: cols });
            }
            columns[c].push((r, v));
        }
        Self::from_columns(field, rows, columns)
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter_map(|r| {
                        let v = m.get(r, c);
                        (v != 0).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        Self::from_columns(m.field(), m.rows(), columns).expect("dense entries are in range")
    }

    /// Builds from dense column vectors of length `rows`.
    pub fn from_dense_columns(field: Field, rows: usize, columns: &[Vec<u64>]) -> Result<Self> {
        let cols = columns
            .iter()
            .map(|c| {
                if c.len() != rows {
                    return Err(Error::DimensionMismatch {
                        expected: rows,
                        actual: c.len(),
                    });
                }
                Ok(c.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(r, &v)| (r, v))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(field, rows, cols)
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
        self.col_ptr.len() - 1
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn column(&self, j: usize) -> Column<'_> {
        let (a, b) = (self.col_ptr[j], self.col_ptr[j + 1]);
        Column {
            rows: &self.row_idx[a..b],
            values: &self.values[a..b],
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = Column<'_>> {
        (0..self.cols()).map(move |j| self.column(j))
    }

    pub fn column_dense(&self, j: usize) -> Vec<u64> {
        self.column(j).to_dense(self.rows)
    }

    /// Entries in canonical order: column-major, then by row.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.cols()).flat_map(move |c| self.column(c).iter().map(move |(r, v)| (r, c, v)))
    }

    /// The submatrix `M[S]` keeping the listed columns in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> SparseMatrix {
        let mut col_ptr = Vec::with_capacity(indices.len() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for &j in indices {
            let c = self.column(j);
            row_idx.extend_from_slice(c.rows);
            values.extend_from_slice(c.values);
            col_ptr.push(row_idx.len());
        }
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.field, self.rows, self.cols());
        for (r, c, v) in self.triplets() {
            d.set(r, c, v);
        }
        d
    }

    /// All inner products `vᵀ m_i`, in time proportional to `nnz`.
    pub fn left_apply_all(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: v.len(),
            });
        }
        Ok(self.columns().map(|c| c.dot(&self.field, v)).collect())
    }

    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }
}

/// Free-function form of [`SparseMatrix::left_apply_all`].
pub fn left_apply_all(v: &[u64], m: &SparseMatrix) -> Result<Vec<u64>> {
    m.left_apply_all(v)
}
