use rand::distributions::{Distribution, WeightedIndex};
use rand::RngCore;

/// Multiplicative weights stored as halving counts: `w(e) = 2^{−h(e)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightState {
    halvings: Vec<u32>,
}

impl WeightState {
    pub fn new(n: usize) -> Self {
        Self { halvings: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.halvings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halvings.is_empty()
    }

    pub fn halvings(&self, e: usize) -> u32 {
        self.halvings[e]
    }

    pub fn halve(&mut self, e: usize) {
        self.halvings[e] += 1;
    }

    /// Sampling weights, rescaled so the heaviest element has weight 1.
    pub fn weights(&self) -> Vec<f64> {
        let min = self.halvings.iter().copied().min().unwrap_or(0);
        self.halvings
            .iter()
            .map(|&h| (-f64::from(h - min)).exp2())
            .collect()
    }

    /// [`sample_proportional`] over the current weights.
    pub fn sample(&self, m: usize, rng: &mut dyn RngCore) -> Vec<usize> {
        sample_proportional(&self.weights(), m, rng)
    }
}

/// Draws `m` elements with replacement, each with probability proportional
/// to its weight, and returns the distinct ones in increasing order. When
/// at most `m` elements have positive weight they are all returned.
pub fn sample_proportional(weights: &[f64], m: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    let positive: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    if positive.len() <= m {
        return positive;
    }
    let dist = WeightedIndex::new(weights).expect("some weight is positive");
    let mut picked = vec![false; weights.len()];
    for _ in 0..m {
        picked[dist.sample(rng)] = true;
    }
    (0..weights.len()).filter(|&i| picked[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_supports_are_returned_whole() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sample_proportional(&[1.0, 0.0, 0.0], 5, &mut rng), vec![0]);
        assert_eq!(sample_proportional(&[1.0; 6], 6, &mut rng), (0..6).collect::<Vec<_>>());
        assert!(sample_proportional(&[0.0, 0.0], 1, &mut rng).is_empty());
    }

    #[test]
    fn single_draw_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = [4.0, 1.0, 1.0, 1.0, 1.0];
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| sample_proportional(&w, 1, &mut rng) == vec![0])
            .count();
        assert!((hits as f64 / trials as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn halving_state() {
        let mut s = WeightState::new(3);
        s.halve(1);
        s.halve(1);
        assert_eq!(s.weights(), vec![1.0, 0.25, 1.0]);
        for e in 0..3 {
            s.halve(e);
        }
        assert_eq!(s.weights(), vec![1.0, 0.25, 1.0]);
        assert_eq!(s.halvings(1), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sample = s.sample(2, &mut rng);
        assert!(!sample.is_empty() && sample.len() <= 2);
        assert!(sample.windows(2).all(|w| w[0] < w[1]));
    }
}
