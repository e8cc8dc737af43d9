use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sketch::SketchParams;

/// Accuracy parameter, kept both as a float (for iteration counts) and as
/// an exact rational (for rounding and audits).
#[derive(Clone, Debug, PartialEq)]
pub struct Epsilon {
    value: f64,
    exact: BigRational,
}

/// Denominator used to turn a decimal `eps` into a rational.
const EPS_DENOMINATOR: i64 = 1_000_000;

impl Epsilon {
    /// Accepts `eps ∈ (0, upper)`; `range` names the interval in errors.
    pub fn within(eps: f64, upper: f64, range: &'static str) -> Result<Self> {
        if !(eps > 0.0 && eps < upper) {
            return Err(Error::InvalidEpsilon { eps, range });
        }
        let numer = (eps * EPS_DENOMINATOR as f64).round() as i64;
        if numer <= 0 {
            return Err(Error::InvalidEpsilon { eps, range });
        }
        Ok(Self {
            value: eps,
            exact: BigRational::new(BigInt::from(numer), BigInt::from(EPS_DENOMINATOR)),
        })
    }

    /// `eps ∈ (0, 1)`.
    pub fn new(eps: f64) -> Result<Self> {
        Self::within(eps, 1.0, "(0, 1)")
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }
}

/// Tunable constants of the sparsification loops.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    /// Sample size `m = ⌈c_sample · k · ln n / eps⌉`, capped at `n`.
    pub c_sample: f64,
    /// Iteration count `L = ⌈c_iters · ln n / eps⌉`.
    pub c_iters: f64,
    pub c_sketch: f64,
    pub sketch_spread: Option<usize>,
    /// Independent repetitions of each randomized span computation.
    pub span_repetitions: usize,
    /// Replace every randomized span and membership test by elimination.
    pub oracle: bool,
    /// Audit every weighted subsolve's chain dual exactly.
    pub audit: bool,
    /// Fresh bilinear forms tried after a degenerate one.
    pub form_retries: usize,
}

impl Default for ApproxParams {
    fn default() -> Self {
        Self {
            c_sample: 4.0,
            c_iters: 4.0,
            c_sketch: 2.0,
            sketch_spread: None,
            span_repetitions: 1,
            oracle: false,
            audit: false,
            form_retries: 5,
        }
    }
}

impl ApproxParams {
    pub fn sketch(&self) -> SketchParams {
        SketchParams {
            c_sketch: self.c_sketch,
            spread: self.sketch_spread,
        }
    }

    pub fn iterations(&self, n: usize, eps: &Epsilon) -> usize {
        let ln = (n.max(1) as f64).ln();
        ((self.c_iters * ln / eps.value()).ceil() as usize).max(1)
    }

    pub fn sample_size(&self, n: usize, k: usize, eps: &Epsilon) -> usize {
        let ln = (n.max(1) as f64).ln();
        let m = (self.c_sample * k as f64 * ln / eps.value()).ceil();
        (m.min(n as f64) as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c_sample", self.c_sample), ("c_iters", self.c_iters)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.c_sketch >= 1.0 && self.c_sketch.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "c_sketch must be at least 1, got {}",
                self.c_sketch
            )));
        }
        if self.sketch_spread == Some(0) {
            return Err(Error::InvalidArgument("sketch spread must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_exact() {
        let e = Epsilon::new(0.2).unwrap();
        assert_eq!(e.exact(), &BigRational::new(1.into(), 5.into()));
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(1.0).is_err());
        assert!(Epsilon::within(0.5, 0.5, "(0, 1/2)").is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
    }

    #[test]
    fn loop_sizes() {
        let p = ApproxParams::default();
        let e = Epsilon::new(0.5).unwrap();
        assert_eq!(p.iterations(1, &e), 1);
        assert_eq!(p.sample_size(1, 3, &e), 1);
        // 4 · ln 100 / 0.5 = 36.84…
        assert_eq!(p.iterations(100, &e), 37);
        assert_eq!(p.sample_size(100, 1, &e), 37);
        assert_eq!(p.sample_size(100, 10, &e), 100);
    }
}
