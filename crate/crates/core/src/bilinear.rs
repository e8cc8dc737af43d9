//! The random diagonal bilinear form `⟨v, w⟩ = vᵀ B w` and
//! orthogonalization with respect to it.
//!
//! Over a finite field a subspace can meet its own Euclidean complement.
//! Replacing `vᵀw` by a form with a random diagonal `B` makes every fixed
//! subspace non-degenerate with high probability, so projections and
//! Gram–Schmidt behave as they do over the reals. When a draw turns out
//! degenerate for the vectors at hand, callers resample `B` and restart.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig};
use crate::linalg::{axpy, rank_of_vectors, DenseMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    field: Field,
    diag: Vec<u64>,
}

impl DiagonalForm {
    pub fn new(field: Field, diag: Vec<u64>) -> Self {
        let diag = diag.into_iter().map(|d| field.reduce(d)).collect();
        Self { field, diag }
    }

    /// `B = I`, used only by tests.
    pub fn identity(field: Field, r: usize) -> Self {
        Self::new(field, vec![1; r])
    }

    /// Draws `r` diagonal entries independently from the sample set.
    pub fn sample(r: usize, cfg: &FieldConfig, rng: &mut dyn RngCore) -> Self {
        Self::new(cfg.field, cfg.sample_vec(rng, r, false))
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn diagonal(&self) -> &[u64] {
        &self.diag
    }

    /// `B·v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        v.iter()
            .zip(&self.diag)
            .map(|(&x, &w)| self.field.mul(x, w))
            .collect()
    }

    /// `Σ v_i · B_ii · w_i`.
    pub fn product(&self, v: &[u64], w: &[u64]) -> Result<u64> {
        if v.len() != self.dim() || w.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: if v.len() != self.dim() { v.len() } else { w.len() },
            });
        }
        let f = self.field;
        Ok(v.iter()
            .zip(w)
            .zip(&self.diag)
            .fold(0, |acc, ((&a, &b), &d)| f.mul_add(acc, f.mul(a, d), b)))
    }

    fn product_unchecked(&self, v: &[u64], w: &[u64]) -> u64 {
        let f = self.field;
        v.iter()
            .zip(w)
            .zip(&self.diag)
            .fold(0, |acc, ((&a, &b), &d)| {
                if a == 0 || b == 0 {
                    acc
                } else {
                    f.mul_add(acc, f.mul(a, d), b)
                }
            })
    }

    /// Gram matrix `AᵀBA` of the given columns.
    pub fn gram(&self, columns: &[Vec<u64>]) -> DenseMatrix {
        let l = columns.len();
        let mut g = DenseMatrix::zeros(self.field, l, l);
        for i in 0..l {
            for j in i..l {
                let v = self.product_unchecked(&columns[i], &columns[j]);
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }

    /// Basis of `W⊥_B = { x : ⟨w, x⟩ = 0 ∀ w ∈ W }` for `W` spanned by `basis`.
    pub fn complement(&self, basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let r = self.dim();
        if basis.is_empty() {
            return (0..r)
                .map(|i| {
                    let mut e = vec![0; r];
                    e[i] = 1;
                    e
                })
                .collect();
        }
        let rows: Vec<Vec<u64>> = basis.iter().map(|b| self.apply(b)).collect();
        DenseMatrix::from_rows(self.field, &rows)
            .expect("basis vectors share a dimension")
            .null_space_basis()
    }
}

/// Free-function form of [`DiagonalForm::sample`].
pub fn sample_form(r: usize, cfg: &FieldConfig, rng: &mut dyn RngCore) -> DiagonalForm {
    DiagonalForm::sample(r, cfg, rng)
}

/// Free-function form of [`DiagonalForm::product`].
pub fn bilinear_product(v: &[u64], w: &[u64], form: &DiagonalForm) -> Result<u64> {
    form.product(v, w)
}

/// Splits `v = p + q` with `p = A(AᵀBA)⁻¹AᵀBv` in the column space of `A`
/// and `q` B-orthogonal to every column of `A`.
///
/// `columns` lists the columns of `A`. A singular Gram matrix yields
/// [`Error::DegenerateForm`].
pub fn project(columns: &[Vec<u64>], form: &DiagonalForm, v: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    let f = form.field();
    let r = form.dim();
    if v.len() != r {
        return Err(Error::DimensionMismatch { expected: r, actual: v.len() });
    }
    if let Some(c) = columns.iter().find(|c| c.len() != r) {
        return Err(Error::DimensionMismatch { expected: r, actual: c.len() });
    }
    let gram_inv = form.gram(columns).inverse().map_err(|e| match e {
        Error::Singular => Error::DegenerateForm,
        other => other,
    })?;
    let atbv: Vec<u64> = columns.iter().map(|a| form.product_unchecked(a, v)).collect();
    let x = gram_inv.mul_vec(&atbv)?;
    let mut p = vec![0; r];
    for (a, &xi) in columns.iter().zip(&x) {
        axpy(&f, &mut p, xi, a);
    }
    let q = v.iter().zip(&p).map(|(&a, &b)| f.sub(a, b)).collect();
    Ok((p, q))
}

/// Result of orthogonalizing `m_1, …, m_N` against their prefixes.
#[derive(Clone, Debug)]
pub struct OrthoSequence {
    pub inputs: Vec<Vec<u64>>,
    /// `m'_i = m_i − P_{i−1} m_i`; the zero vector for prefix-dependent inputs.
    pub outputs: Vec<Vec<u64>>,
    /// `⟨m'_i, m'_i⟩_B` for accepted vectors, `None` otherwise.
    pub pivots: Vec<Option<u64>>,
    /// Indices `i` with `m'_i ≠ 0`, increasing.
    pub accepted: Vec<usize>,
}

impl OrthoSequence {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// Gram–Schmidt with respect to `B`.
///
/// Each input is projected off the accepted outputs so far,
/// `m'_i = m_i − Σ_j (⟨m'_j, m_i⟩ / ⟨m'_j, m'_j⟩) m'_j`, which is the
/// prefix projector applied to `m_i` whenever every prefix span is
/// non-degenerate. A nonzero output with zero self-product means the form
/// is degenerate on that prefix and yields [`Error::DegenerateForm`].
pub fn orthogonalize_sequence(vectors: &[Vec<u64>], form: &DiagonalForm) -> Result<OrthoSequence> {
    let f = form.field();
    let r = form.dim();
    let mut outputs = Vec::with_capacity(vectors.len());
    let mut pivots = Vec::with_capacity(vectors.len());
    let mut accepted = Vec::new();
    // (B·m'_j, 1/⟨m'_j, m'_j⟩) for accepted j
    let mut basis: Vec<(Vec<u64>, u64)> = Vec::new();
    for (i, m) in vectors.iter().enumerate() {
        if m.len() != r {
            return Err(Error::DimensionMismatch { expected: r, actual: m.len() });
        }
        let mut out: Vec<u64> = m.iter().map(|&x| f.reduce(x)).collect();
        for (&j, (bm, inv_pivot)) in accepted.iter().zip(&basis) {
            let coeff = m
                .iter()
                .zip(bm)
                .fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b));
            if coeff != 0 {
                let scale = f.neg(f.mul(coeff, *inv_pivot));
                let prev: &Vec<u64> = &outputs[j];
                axpy(&f, &mut out, scale, prev);
            }
        }
        if out.iter().all(|&x| x == 0) {
            outputs.push(out);
            pivots.push(None);
            continue;
        }
        let pivot = form.product_unchecked(&out, &out);
        if pivot == 0 {
            return Err(Error::DegenerateForm);
        }
        basis.push((form.apply(&out), f.inv(pivot)?));
        outputs.push(out);
        pivots.push(Some(pivot));
        accepted.push(i);
    }
    Ok(OrthoSequence {
        inputs: vectors.to_vec(),
        outputs,
        pivots,
        accepted,
    })
}

/// Orthogonalizes under freshly sampled forms until one is non-degenerate.
///
/// Returns the sequence, the form used and the number of restarts. Fails
/// with [`Error::DegenerateAfterRetries`] after `1 + max_retries` draws.
pub fn orthogonalize_with_resampling(
    vectors: &[Vec<u64>],
    r: usize,
    cfg: &FieldConfig,
    max_retries: usize,
    rng: &mut dyn RngCore,
) -> Result<(OrthoSequence, DiagonalForm, usize)> {
    for attempt in 0..=max_retries {
        let form = DiagonalForm::sample(r, cfg, rng);
        match orthogonalize_sequence(vectors, &form) {
            Ok(seq) => return Ok((seq, form, attempt)),
            Err(Error::DegenerateForm) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateAfterRetries {
        attempts: max_retries + 1,
    })
}

/// Whether `W ∩ W⊥_B = {0}`, `W ⊕ W⊥_B = Fʳ` and `(W⊥_B)⊥_B = W` for the
/// subspace spanned by the (independent) `basis`.
pub fn check_good_subspace(basis: &[Vec<u64>], form: &DiagonalForm) -> bool {
    let f = form.field();
    let r = form.dim();
    let dim_w = basis.len();
    let perp = form.complement(basis);
    if dim_w + perp.len() != r {
        return false;
    }
    let mut stacked = basis.to_vec();
    stacked.extend(perp.iter().cloned());
    if rank_of_vectors(f, r, &stacked) != r {
        return false;
    }
    let perp_perp = form.complement(&perp);
    if perp_perp.len() != dim_w {
        return false;
    }
    let mut union = basis.to_vec();
    union.extend(perp_perp);
    rank_of_vectors(f, r, &union) == dim_w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{choose_prime, FieldConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf7() -> Field {
        Field::new(7).unwrap()
    }

    #[test]
    fn product_examples() {
        let f = gf7();
        let b = DiagonalForm::new(f, vec![3, 5]);
        assert_eq!(bilinear_product(&[2, 4], &[1, 0], &b).unwrap(), 6);
        let id = DiagonalForm::identity(f, 3);
        assert_eq!(id.product(&[1, 2, 3], &[4, 5, 6]).unwrap(), (4 + 10 + 18) % 7);
        assert!(b.product(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn product_matches_dense() {
        let cfg = choose_prime(30);
        let f = cfg.field;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let form = sample_form(6, &cfg, &mut rng);
            let v: Vec<u64> = (0..6).map(|_| rng.gen_range(0..f.modulus())).collect();
            let w: Vec<u64> = (0..6).map(|_| rng.gen_range(0..f.modulus())).collect();
            let mut bmat = DenseMatrix::zeros(f, 6, 6);
            for i in 0..6 {
                bmat.set(i, i, form.diagonal()[i]);
            }
            let bw = bmat.mul_vec(&w).unwrap();
            let dense = v.iter().zip(&bw).fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b));
            assert_eq!(form.product(&v, &w).unwrap(), dense);
        }
    }

    #[test]
    fn sampled_forms_reproduce() {
        let cfg = choose_prime(10);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample_form(4, &cfg, &mut rng)
        };
        assert_eq!(draw(7), draw(7));
        assert_eq!(draw(7).dim(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_form(1, &cfg, &mut rng).dim(), 1);
    }

    #[test]
    fn all_nonzero_diagonal_frequency() {
        let f = Field::new(1_000_003).unwrap();
        let cfg = FieldConfig::new(f, 5).with_sample_set_size(20);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 1000;
        let hits = (0..trials)
            .filter(|_| sample_form(5, &cfg, &mut rng).diagonal().iter().all(|&d| d != 0))
            .count();
        let expected = (1.0f64 - 1.0 / 20.0).powi(5);
        // binomial standard deviation is about 0.014 here
        assert!((hits as f64 / trials as f64 - expected).abs() < 0.06, "hits = {hits}");
    }

    #[test]
    fn projection_example() {
        let f = gf7();
        let b = DiagonalForm::new(f, vec![3, 5]);
        let (p, q) = project(&[vec![1, 0]], &b, &[2, 4]).unwrap();
        assert_eq!(p, vec![2, 0]);
        assert_eq!(q, vec![0, 4]);
        assert_eq!(b.product(&[1, 0], &q).unwrap(), 0);
    }

    #[test]
    fn projection_edge_cases() {
        let f = gf7();
        let b = DiagonalForm::new(f, vec![3, 5, 1]);
        let a = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let inside = vec![1, 2, 1];
        let (p, q) = project(&a, &b, &inside).unwrap();
        assert_eq!(p, inside);
        assert!(q.iter().all(|&x| x == 0));
        // v with ⟨a_i, v⟩ = 0 for both columns
        let perp = b.complement(&a);
        assert_eq!(perp.len(), 1);
        let (p, q) = project(&a, &b, &perp[0]).unwrap();
        assert!(p.iter().all(|&x| x == 0));
        assert_eq!(q, perp[0]);
    }

    #[test]
    fn projection_degenerate_gram() {
        // (1, 0) against diag(0, 1) has a zero Gram matrix
        let f = gf7();
        let b = DiagonalForm::new(f, vec![0, 1]);
        assert!(matches!(project(&[vec![1, 0]], &b, &[1, 1]), Err(Error::DegenerateForm)));
    }

    #[test]
    fn random_projection_properties() {
        let cfg = choose_prime(40);
        let f = cfg.field;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let form = sample_form(6, &cfg, &mut rng);
            let a: Vec<Vec<u64>> = (0..3)
                .map(|_| (0..6).map(|_| rng.gen_range(0..f.modulus())).collect())
                .collect();
            let v: Vec<u64> = (0..6).map(|_| rng.gen_range(0..f.modulus())).collect();
            let (p, q) = project(&a, &form, &v).unwrap();
            let mut with_p = a.clone();
            with_p.push(p.clone());
            assert_eq!(rank_of_vectors(f, 6, &with_p), rank_of_vectors(f, 6, &a));
            for col in &a {
                assert_eq!(form.product(col, &q).unwrap(), 0);
            }
            let sum: Vec<u64> = p.iter().zip(&q).map(|(&x, &y)| f.add(x, y)).collect();
            assert_eq!(sum, v);
        }
    }

    #[test]
    fn orthogonalize_examples() {
        let f = gf7();
        let id = DiagonalForm::identity(f, 2);
        let seq = orthogonalize_sequence(&[vec![1, 0], vec![0, 1]], &id).unwrap();
        assert_eq!(seq.outputs, vec![vec![1, 0], vec![0, 1]]);

        let seq = orthogonalize_sequence(&[vec![1, 0], vec![2, 0], vec![0, 1]], &id).unwrap();
        assert_eq!(seq.outputs[1], vec![0, 0]);
        assert_eq!(seq.accepted, vec![0, 2]);
        assert_eq!(seq.pivots[1], None);

        let seq =
            orthogonalize_sequence(&[vec![1, 0], vec![0, 1], vec![3, 5]], &id).unwrap();
        assert_eq!(seq.outputs[2], vec![0, 0]);
    }

    #[test]
    fn orthogonalize_detects_isotropic_vector() {
        // (1, 1) with diag(1, 6) has self-product 1 + 6 = 0 in GF(7)
        let f = gf7();
        let b = DiagonalForm::new(f, vec![1, 6]);
        assert!(matches!(
            orthogonalize_sequence(&[vec![1, 1]], &b),
            Err(Error::DegenerateForm)
        ));
    }

    #[test]
    fn good_subspace_examples() {
        let cfg = choose_prime(16);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let full: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..4).map(|j| u64::from(i == j)).collect())
            .collect();
        let w = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]];
        let (mut good_w, mut good_full) = (0, 0);
        for _ in 0..1000 {
            let form = sample_form(4, &cfg, &mut rng);
            // {0} and the whole space are good exactly when B is invertible
            let invertible = form.diagonal().iter().all(|&d| d != 0);
            assert_eq!(check_good_subspace(&[], &form), invertible);
            assert_eq!(check_good_subspace(&full, &form), invertible);
            good_full += usize::from(invertible);
            good_w += usize::from(check_good_subspace(&w, &form));
        }
        assert!(good_w >= 980, "good_w = {good_w}");
        assert!(good_full >= 980, "good_full = {good_full}");
        // the all-ones vector of length 7 is self-orthogonal over GF(7)
        let iso = vec![vec![1; 7]];
        assert!(!check_good_subspace(&iso, &DiagonalForm::identity(gf7(), 7)));
        assert!(check_good_subspace(&iso, &DiagonalForm::new(gf7(), vec![2, 1, 1, 1, 1, 1, 1])));
    }
}
