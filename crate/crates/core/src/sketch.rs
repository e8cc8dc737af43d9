//! Random sparse row compression `M ↦ S·M`.
//!
//! Each input row is spread onto `d = ⌈log₂ n⌉ + 1` distinct output rows
//! with uniform nonzero coefficients. Column dependencies of `M` survive
//! deterministically (the map is linear); independence of sets of at most
//! `k` columns survives with high probability.

use rand::seq::index;
use rand::RngCore;

use crate::field::FieldConfig;
use crate::linalg::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SketchParams {
    /// Output rows per unit of target rank, `out_rows = ⌈c_sketch·k⌉`.
    pub c_sketch: f64,
    /// Overrides the per-row spread `d`.
    pub spread: Option<usize>,
}

impl Default for SketchParams {
    fn default() -> Self {
        Self {
            c_sketch: 2.0,
            spread: None,
        }
    }
}

/// A sparse `out_rows × input_rows` linear map.
#[derive(Clone, Debug)]
pub struct SketchOperator {
    out_rows: usize,
    /// For each input row, the `(output row, coefficient)` pairs it feeds.
    spread: Vec<Vec<(usize, u64)>>,
    identity: bool,
}

pub fn default_spread(n: usize) -> usize {
    let n = n.max(1);
    (usize::BITS - (n - 1).leading_zeros()) as usize + 1
}

impl SketchOperator {
    /// Samples an operator for an `input_rows × n` matrix and target rank
    /// `k`. When `⌈c_sketch·k⌉ ≥ input_rows` no compression is possible and
    /// the identity map is returned.
    pub fn sample(
        cfg: &FieldConfig,
        input_rows: usize,
        n: usize,
        k: usize,
        params: &SketchParams,
        rng: &mut dyn RngCore,
    ) -> Self {
        let target = (params.c_sketch * k.max(1) as f64).ceil() as usize;
        if target >= input_rows {
            return Self::identity(input_rows);
        }
        let out_rows = target.max(1);
        let d = params.spread.unwrap_or_else(|| default_spread(n)).clamp(1, out_rows);
        let spread = (0..input_rows)
            .map(|_| {
                let mut rows = index::sample(rng, out_rows, d).into_vec();
                rows.sort_unstable();
                rows.into_iter().map(|o| (o, cfg.sample(rng, true))).collect()
            })
            .collect();
        Self {
            out_rows,
            spread,
            identity: false,
        }
    }

    pub fn identity(rows: usize) -> Self {
        Self {
            out_rows: rows,
            spread: (0..rows).map(|r| vec![(r, 1)]).collect(),
            identity: true,
        }
    }

    pub fn out_rows(&self) -> usize {
        self.out_rows
    }

    pub fn input_rows(&self) -> usize {
        self.spread.len()
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Number of output rows each input row feeds.
    pub fn row_spread(&self, row: usize) -> usize {
        self.spread[row].len()
    }

    /// `S·M`, in time `O(d · nnz(M))`.
    pub fn apply(&self, m: &SparseMatrix) -> SparseMatrix {
        assert_eq!(m.rows(), self.input_rows(), "sketch input rows");
        if self.identity {
            return m.clone();
        }
        let f = m.field();
        let mut acc = vec![0u64; self.out_rows];
        let mut touched = Vec::new();
        let columns = m
            .columns()
            .map(|col| {
                for (r, v) in col.iter() {
                    for &(o, c) in &self.spread[r] {
                        if acc[o] == 0 {
                            touched.push(o);
                        }
                        acc[o] = f.mul_add(acc[o], c, v);
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let out: Vec<(usize, u64)> = touched
                    .iter()
                    .filter_map(|&o| (acc[o] != 0).then_some((o, acc[o])))
                    .collect();
                for &o in &touched {
                    acc[o] = 0;
                }
                touched.clear();
                out
            })
            .collect();
        SparseMatrix::from_columns(f, self.out_rows, columns).expect("output rows are in range")
    }
}

/// Samples an operator for `m` and applies it.
pub fn compress(
    m: &SparseMatrix,
    k: usize,
    cfg: &FieldConfig,
    params: &SketchParams,
    rng: &mut dyn RngCore,
) -> SparseMatrix {
    SketchOperator::sample(cfg, m.rows(), m.cols(), k, params, rng).apply(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{choose_prime, Field};
    use crate::linalg::DenseMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spread_is_log_plus_one() {
        assert_eq!(default_spread(1), 1);
        assert_eq!(default_spread(2), 2);
        assert_eq!(default_spread(120), 8);
        assert_eq!(default_spread(128), 8);
        assert_eq!(default_spread(129), 9);
    }

    #[test]
    fn zero_matrix_stays_zero() {
        let cfg = choose_prime(10);
        let m = SparseMatrix::zeros(cfg.field, 30, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = compress(&m, 3, &cfg, &SketchParams::default(), &mut rng);
        assert_eq!(s.rows(), 6);
        assert_eq!(s.nnz(), 0);
    }

    #[test]
    fn operator_shape_invariants() {
        let cfg = choose_prime(120);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let op = SketchOperator::sample(&cfg, 40, 120, 10, &SketchParams::default(), &mut rng);
        assert_eq!(op.out_rows(), 20);
        assert!((0..40).all(|r| op.row_spread(r) == 8));
        let id = SketchOperator::sample(&cfg, 10, 120, 5, &SketchParams::default(), &mut rng);
        assert!(id.is_identity());
    }

    #[test]
    fn identity_of_full_rank_survives() {
        let cfg = choose_prime(5);
        let m = SparseMatrix::identity(cfg.field, 5);
        let mut ok = 0;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = compress(&m, 5, &cfg, &SketchParams::default(), &mut rng);
            ok += usize::from(s.rank() == 5);
        }
        assert!(ok >= 95);
    }

    #[test]
    fn dependencies_survive_and_nnz_bounded() {
        let cfg = choose_prime(60);
        let f: Field = cfg.field;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (r, n) = (30, 60);
        let mut trip = Vec::new();
        for c in 0..n {
            for row in 0..r {
                if rng.gen_bool(0.1) {
                    trip.push((row, c, rng.gen_range(1..f.modulus())));
                }
            }
        }
        let m = SparseMatrix::from_triplets(f, r, n, trip).unwrap();
        let params = SketchParams::default();
        let op = SketchOperator::sample(&cfg, r, n, 4, &params, &mut rng);
        let s = op.apply(&m);
        assert!(s.nnz() <= default_spread(n) * m.nnz());
        let null = m.to_dense().null_space_basis();
        let sd = s.to_dense();
        for x in &null {
            assert!(sd.mul_vec(x).unwrap().iter().all(|&v| v == 0));
        }
        // S·M equals the dense product of the operator with M
        let mut op_dense = DenseMatrix::zeros(f, op.out_rows(), r);
        for row in 0..r {
            for &(o, c) in &op.spread[row] {
                op_dense.set(o, row, c);
            }
        }
        assert_eq!(op_dense.mul(&m.to_dense()).unwrap(), sd);
    }
}
