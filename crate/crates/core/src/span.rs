//! Closure computation `span_M(S)`.
//!
//! The randomized route draws one vector `v` from the orthogonal complement
//! of `span{m_j : j ∈ S}` and keeps every column with `vᵀ m_i = 0`. Members
//! of the span always pass; a non-member passes only when a nonzero linear
//! polynomial in the random coefficients vanishes, which happens with
//! probability at most `1/|F|`. The Gaussian route is exact and serves as
//! the test oracle.

use rand::RngCore;

use crate::field::FieldConfig;
use crate::linalg::{BasisTracker, DenseMatrix, SparseMatrix};

/// Basis of `{ x ∈ Fʳ : xᵀ m_j = 0 ∀ j ∈ S }`, i.e. the null space of `M[S]ᵀ`.
pub fn orthogonal_complement_basis(m: &SparseMatrix, set: &[usize]) -> Vec<Vec<u64>> {
    let f = m.field();
    let rows: Vec<Vec<u64>> = set.iter().map(|&j| m.column_dense(j)).collect();
    if rows.is_empty() {
        return (0..m.rows())
            .map(|i| {
                let mut e = vec![0; m.rows()];
                e[i] = 1;
                e
            })
            .collect();
    }
    DenseMatrix::from_rows(f, &rows)
        .expect("columns share the row count")
        .null_space_basis()
}

/// Random combination `Σ r_j b_j` of a complement basis.
pub fn random_complement_vector(
    cfg: &FieldConfig,
    dim: usize,
    basis: &[Vec<u64>],
    rng: &mut dyn RngCore,
) -> Vec<u64> {
    let f = cfg.field;
    let mut v = vec![0; dim];
    for b in basis {
        let coeff = cfg.sample(rng, false);
        crate::linalg::axpy(&f, &mut v, coeff, b);
    }
    v
}

/// One-sided randomized closure: always a superset of the true span.
pub fn compute_span(
    m: &SparseMatrix,
    set: &[usize],
    cfg: &FieldConfig,
    rng: &mut dyn RngCore,
) -> Vec<usize> {
    let basis = orthogonal_complement_basis(m, set);
    let v = random_complement_vector(cfg, m.rows(), &basis, rng);
    m.left_apply_all(&v)
        .expect("complement vectors live in Fʳ")
        .into_iter()
        .enumerate()
        .filter_map(|(i, x)| (x == 0).then_some(i))
        .collect()
}

/// Intersection of `repetitions` independent runs of [`compute_span`].
pub fn compute_span_amplified(
    m: &SparseMatrix,
    set: &[usize],
    cfg: &FieldConfig,
    repetitions: usize,
    rng: &mut dyn RngCore,
) -> Vec<usize> {
    let basis = orthogonal_complement_basis(m, set);
    let mut keep = vec![true; m.cols()];
    for _ in 0..repetitions.max(1) {
        let v = random_complement_vector(cfg, m.rows(), &basis, rng);
        let products = m.left_apply_all(&v).expect("complement vectors live in Fʳ");
        for (k, x) in keep.iter_mut().zip(products) {
            *k &= x == 0;
        }
    }
    keep.iter()
        .enumerate()
        .filter_map(|(i, &k)| k.then_some(i))
        .collect()
}

/// Exact closure `{ i : rank(M[S ∪ {i}]) = rank(M[S]) }` by elimination.
pub fn span_oracle_gaussian(m: &SparseMatrix, set: &[usize]) -> Vec<usize> {
    let mut t = BasisTracker::new(m.field(), m.rows());
    for &j in set {
        t.try_insert(j, m.column(j)).expect("column fits the matrix");
    }
    (0..m.cols()).filter(|&i| t.contains(m.column(i))).collect()
}

/// A way of computing `span_M(S)`, selectable at runtime.
pub trait SpanMethod: Send + Sync {
    fn name(&self) -> &'static str;

    fn span(
        &self,
        m: &SparseMatrix,
        set: &[usize],
        cfg: &FieldConfig,
        rng: &mut dyn RngCore,
    ) -> Vec<usize>;
}

/// Randomized complement test with `repetitions`-fold amplification.
#[derive(Clone, Copy, Debug)]
pub struct RandomizedSpan {
    pub repetitions: usize,
}

impl Default for RandomizedSpan {
    fn default() -> Self {
        Self { repetitions: 1 }
    }
}

impl SpanMethod for RandomizedSpan {
    fn name(&self) -> &'static str {
        "randomized"
    }

    fn span(
        &self,
        m: &SparseMatrix,
        set: &[usize],
        cfg: &FieldConfig,
        rng: &mut dyn RngCore,
    ) -> Vec<usize> {
        if self.repetitions <= 1 {
            compute_span(m, set, cfg, rng)
        } else {
            compute_span_amplified(m, set, cfg, self.repetitions, rng)
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianSpan;

impl SpanMethod for GaussianSpan {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn span(
        &self,
        m: &SparseMatrix,
        set: &[usize],
        _cfg: &FieldConfig,
        _rng: &mut dyn RngCore,
    ) -> Vec<usize> {
        span_oracle_gaussian(m, set)
    }
}

/// Looks up a span method by name (`randomized` or `gaussian`).
pub fn span_method(name: &str, repetitions: usize) -> Option<Box<dyn SpanMethod>> {
    match name {
        "randomized" => Some(Box::new(RandomizedSpan { repetitions })),
        "gaussian" => Some(Box::new(GaussianSpan)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf7() -> Field {
        Field::new(7).unwrap()
    }

    fn worked() -> SparseMatrix {
        SparseMatrix::from_dense_columns(gf7(), 2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn complement_examples() {
        let m = worked();
        assert!(orthogonal_complement_basis(&m, &[0, 1]).is_empty());
        let b = orthogonal_complement_basis(&m, &[0]);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0][0], 0);
        assert_ne!(b[0][1], 0);
        let all = orthogonal_complement_basis(&m, &[]);
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn complement_annihilates_set() {
        let f = Field::new(1_000_003).unwrap();
        let m = SparseMatrix::from_dense_columns(
            f,
            4,
            &[vec![1, 2, 0, 0], vec![0, 1, 5, 0], vec![3, 0, 0, 1], vec![1, 3, 5, 0]],
        )
        .unwrap();
        let set = [0, 1, 3];
        let basis = orthogonal_complement_basis(&m, &set);
        assert_eq!(basis.len(), 4 - 2);
        for b in &basis {
            for &j in &set {
                assert_eq!(m.column(j).dot(&f, b), 0);
            }
        }
    }

    #[test]
    fn full_rank_set_spans_everything() {
        let cfg = FieldConfig::new(gf7(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(compute_span(&worked(), &[0, 1], &cfg, &mut rng), vec![0, 1, 2]);
    }

    #[test]
    fn single_column_span_is_usually_exact() {
        let cfg = FieldConfig::new(gf7(), 3);
        let m = worked();
        let mut hits = 0;
        for seed in 0..700 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = compute_span(&m, &[0], &cfg, &mut rng);
            assert!(t.contains(&0));
            hits += usize::from(t == vec![0]);
        }
        // v = r·(0, 1): wrong only when r = 0, probability 1/7
        assert!(hits as f64 / 700.0 >= 1.0 - 3.0 / 7.0, "hits = {hits}");
        assert!(hits > 540);
    }

    #[test]
    fn parallel_columns_always_in_span() {
        let m = SparseMatrix::from_dense_columns(gf7(), 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let cfg = FieldConfig::new(gf7(), 3);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = compute_span(&m, &[0], &cfg, &mut rng);
            assert!(t.contains(&0) && t.contains(&1));
        }
    }

    #[test]
    fn gaussian_oracle_examples() {
        let i2 = SparseMatrix::identity(gf7(), 2);
        assert_eq!(span_oracle_gaussian(&i2, &[0]), vec![0]);
        let m = SparseMatrix::from_dense_columns(gf7(), 2, &[vec![1, 0], vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(span_oracle_gaussian(&m, &[0]), vec![0, 1]);
        assert_eq!(span_oracle_gaussian(&m, &[0, 1, 2]), vec![0, 1, 2]);
    }

    #[test]
    fn amplification_only_removes_false_positives() {
        let f = Field::new(7).unwrap();
        let m = SparseMatrix::from_dense_columns(
            f,
            3,
            &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1], vec![1, 2, 3]],
        )
        .unwrap();
        let cfg = FieldConfig::new(f, 5);
        let truth = span_oracle_gaussian(&m, &[0]);
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let once = compute_span(&m, &[0], &cfg, &mut rng);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let many = compute_span_amplified(&m, &[0], &cfg, 4, &mut rng);
            assert!(truth.iter().all(|i| once.contains(i) && many.contains(i)));
            assert!(many.iter().all(|i| once.contains(i)));
        }
    }

    #[test]
    fn strategies_by_name() {
        let m = worked();
        let cfg = FieldConfig::new(gf7(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = span_method("gaussian", 1).unwrap();
        assert_eq!(g.span(&m, &[0], &cfg, &mut rng), vec![0]);
        assert_eq!(span_method("randomized", 2).unwrap().name(), "randomized");
        assert!(span_method("magic", 1).is_none());
    }
}
