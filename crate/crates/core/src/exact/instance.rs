use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_independent, SparseMatrix};

/// Two linear matroids on a common ground set `[n]`, with optional
/// nonnegative rational weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    m1: SparseMatrix,
    m2: SparseMatrix,
    weights: Option<Vec<BigRational>>,
}

impl Instance {
    pub fn new(m1: SparseMatrix, m2: SparseMatrix) -> Result<Self> {
        if m1.cols() != m2.cols() {
            return Err(Error::DimensionMismatch {
                expected: m1.cols(),
                actual: m2.cols(),
            });
        }
        if m1.field() != m2.field() {
            return Err(Error::InvalidArgument(format!(
                "matrices live over different fields (p = {} and p = {})",
                m1.field().modulus(),
                m2.field().modulus()
            )));
        }
        Ok(Self { m1, m2, weights: None })
    }

    pub fn with_weights(mut self, weights: Vec<BigRational>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: weights.len(),
            });
        }
        if let Some(index) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::NegativeWeight { index });
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn without_weights(mut self) -> Self {
        self.weights = None;
        self
    }

    pub fn m1(&self) -> &SparseMatrix {
        &self.m1
    }

    pub fn m2(&self) -> &SparseMatrix {
        &self.m2
    }

    pub fn field(&self) -> Field {
        self.m1.field()
    }

    pub fn n(&self) -> usize {
        self.m1.cols()
    }

    pub fn weights(&self) -> Option<&[BigRational]> {
        self.weights.as_deref()
    }

    pub fn require_weights(&self) -> Result<&[BigRational]> {
        self.weights().ok_or(Error::MissingWeights)
    }

    /// Total weight of `set`; zero for unweighted instances.
    pub fn weight_of(&self, set: &[usize]) -> BigRational {
        match &self.weights {
            Some(w) => set.iter().map(|&i| &w[i]).sum(),
            None => BigRational::zero(),
        }
    }

    /// Whether `e` has a zero column in either matrix. Such an element lies
    /// in the rank-0 closure of the empty set and is never in a common
    /// independent set.
    pub fn is_loop(&self, e: usize) -> bool {
        self.m1.column(e).is_zero() || self.m2.column(e).is_zero()
    }

    pub fn is_common_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| i < self.n())
            && is_independent(&self.m1, set)
            && is_independent(&self.m2, set)
    }

    /// Subinstance on the columns `indices`, renumbered `0..indices.len()`.
    pub fn restrict(&self, indices: &[usize]) -> Instance {
        Instance {
            m1: self.m1.select_columns(indices),
            m2: self.m2.select_columns(indices),
            weights: self
                .weights
                .as_ref()
                .map(|w| indices.iter().map(|&i| w[i].clone()).collect()),
        }
    }

    /// Same ground set and weights with replaced matrices.
    pub fn with_matrices(&self, m1: SparseMatrix, m2: SparseMatrix) -> Result<Instance> {
        let inst = Instance::new(m1, m2)?;
        match &self.weights {
            Some(w) => inst.with_weights(w.clone()),
            None => Ok(inst),
        }
    }
}
