use rand::RngCore;

use crate::bilinear::{orthogonalize_with_resampling, DiagonalForm};
use crate::error::Result;
use crate::field::FieldConfig;
use crate::linalg::{axpy, SparseMatrix};

use super::chain::ChainOracle;

/// Randomized prefix-span membership for one index sequence `i₁, …, i_k`.
///
/// After orthogonalizing `m_{i₁}, …, m_{i_k}, e₁, …, e_r` under a random
/// diagonal form `B`, the vector
/// `v_α = Σ_{j>α} q_j m'_{i_j} + Σ_j q_{k+j} e'_j` is a random element of
/// the `B`-complement of `span{m_{i₁}, …, m_{i_α}}`. A column `m_j` in that
/// span always has `⟨v_α, m_j⟩ = 0`; one outside it does so with
/// probability at most `1/|F|`.
#[derive(Clone, Debug)]
pub struct MembershipQuery {
    form: DiagonalForm,
    sequence: Vec<usize>,
    /// `B·v_α` for `α = 1, …, k`.
    probes: Vec<Vec<u64>>,
    restarts: usize,
}

impl MembershipQuery {
    /// Builds the probe vectors, resampling `B` up to `max_retries` times.
    pub fn build(
        m: &SparseMatrix,
        sequence: &[usize],
        cfg: &FieldConfig,
        max_retries: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Self> {
        let f = m.field();
        let r = m.rows();
        let k = sequence.len();
        let mut vectors: Vec<Vec<u64>> = sequence.iter().map(|&i| m.column_dense(i)).collect();
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            vectors.push(e);
        }
        let (seq, form, restarts) = orthogonalize_with_resampling(&vectors, r, cfg, max_retries, rng)?;
        let q = cfg.sample_vec(rng, k + r, false);
        let mut v = vec![0; r];
        for j in 0..r {
            axpy(&f, &mut v, q[k + j], &seq.outputs[k + j]);
        }
        let mut probes = vec![Vec::new(); k];
        for alpha in (1..=k).rev() {
            if alpha < k {
                axpy(&f, &mut v, q[alpha], &seq.outputs[alpha]);
            }
            probes[alpha - 1] = form.apply(&v);
        }
        Ok(Self {
            form,
            sequence: sequence.to_vec(),
            probes,
            restarts,
        })
    }

    pub fn form(&self) -> &DiagonalForm {
        &self.form
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    /// `v_α` itself (undoing the stored `B` factor), for tests.
    pub fn probe(&self, alpha: usize) -> Option<Vec<u64>> {
        let f = self.form.field();
        let bv = self.probes.get(alpha.checked_sub(1)?)?;
        bv.iter()
            .zip(self.form.diagonal())
            .map(|(&x, &d)| f.div(x, d).ok())
            .collect()
    }

    /// Whether `m_j ∈ span{m_{i₁}, …, m_{i_α}}`, in `O(nnz(m_j))` time.
    pub fn query(&self, m: &SparseMatrix, j: usize, alpha: usize) -> bool {
        assert!(alpha >= 1 && alpha <= self.probes.len(), "prefix length out of range");
        m.column(j).dot(&m.field(), &self.probes[alpha - 1]) == 0
    }

    /// First prefix length whose span passes the test, by binary search.
    pub fn first_member(&self, m: &SparseMatrix, j: usize) -> Option<usize> {
        let k = self.probes.len();
        if k == 0 || !self.query(m, j, k) {
            return None;
        }
        let (mut lo, mut hi) = (1, k);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.query(m, j, mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }
}

/// First-prefix lookup, randomized or exact.
#[derive(Clone, Debug)]
pub enum PrefixMembership {
    Randomized(MembershipQuery),
    Exact(ChainOracle),
}

impl PrefixMembership {
    pub fn first_member(&self, m: &SparseMatrix, j: usize) -> Option<usize> {
        match self {
            PrefixMembership::Randomized(q) => q.first_member(m, j),
            PrefixMembership::Exact(o) => o.first_member(m, j),
        }
    }
}
