//! Coarse scaling measurements on a fixed-rank, fixed-sparsity family.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approx::{solve_cardinality, ApproxParams};
use crate::error::Result;
use crate::exact::Instance;
use crate::field::{choose_prime, FieldConfig};
use crate::gen::random_matrix_fixed_nnz;
use crate::span::compute_span;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub rows: usize,
    pub per_column: usize,
    pub base_n: usize,
    pub doublings: usize,
    pub seed: u64,
    /// Timing samples per measurement; the minimum is reported.
    pub samples: usize,
    pub solve: bool,
    pub eps: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            rows: 32,
            per_column: 4,
            base_n: 1 << 10,
            doublings: 3,
            seed: 0,
            samples: 7,
            solve: true,
            eps: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub nnz: usize,
    pub span_ms: f64,
    pub solve_ms: Option<f64>,
    /// Size of the set found, so runs can be compared for determinism.
    pub solve_size: Option<usize>,
}

/// Instance of the family with `n` columns, seeded from `seed` and `n`.
pub fn family_instance(cfg: &BenchConfig, n: usize) -> Instance {
    let field = choose_prime(n).field;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64).rotate_left(32));
    let m1 = random_matrix_fixed_nnz(field, cfg.rows, n, cfg.per_column, &mut rng);
    let m2 = random_matrix_fixed_nnz(field, cfg.rows, n, cfg.per_column, &mut rng);
    Instance::new(m1, m2).expect("matrices share n and the field")
}

/// Minimum over `samples` of the mean time per call, where each sample
/// repeats `f` until at least two milliseconds have passed.
pub fn min_time_ms(samples: usize, mut f: impl FnMut()) -> f64 {
    let floor = Duration::from_millis(2);
    (0..samples.max(1))
        .map(|_| {
            let start = Instant::now();
            let mut calls = 0u32;
            while calls == 0 || start.elapsed() < floor {
                f();
                calls += 1;
            }
            start.elapsed().as_secs_f64() * 1e3 / f64::from(calls)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Time of one randomized span of the first `rows / 2` columns.
pub fn time_span(inst: &Instance, seed: u64, samples: usize) -> f64 {
    let m = inst.m1();
    let set: Vec<usize> = (0..(m.rows() / 2).min(m.cols())).collect();
    let cfg = FieldConfig::new(inst.field(), inst.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    min_time_ms(samples, || {
        std::hint::black_box(compute_span(m, &set, &cfg, &mut rng));
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(cfg.doublings + 1);
    for i in 0..=cfg.doublings {
        let n = cfg.base_n << i;
        let inst = family_instance(cfg, n);
        let span_ms = time_span(&inst, cfg.seed, cfg.samples);
        let (solve_ms, solve_size) = if cfg.solve {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let start = Instant::now();
            let out = solve_cardinality(&inst, cfg.eps, &ApproxParams::default(), &mut rng)?;
            (Some(start.elapsed().as_secs_f64() * 1e3), Some(out.set.len()))
        } else {
            (None, None)
        };
        rows.push(BenchRow {
            n,
            nnz: inst.m1().nnz() + inst.m2().nnz(),
            span_ms,
            solve_ms,
            solve_size,
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,nnz,span_ms,solve_ms\n");
    for r in rows {
        let solve = r.solve_ms.map(|t| format!("{t:.3}")).unwrap_or_default();
        let _ = writeln!(out, "{},{},{:.4},{solve}", r.n, r.nnz, r.span_ms);
    }
    out
}

/// Ratios of consecutive span timings.
pub fn span_ratios(rows: &[BenchRow]) -> Vec<f64> {
    rows.windows(2).map(|w| w[1].span_ms / w[0].span_ms).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_doublings_give_four_rows() {
        let cfg = BenchConfig {
            rows: 8,
            base_n: 64,
            samples: 1,
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![64, 128, 256, 512]);
        assert!(rows.iter().all(|r| r.nnz == 2 * 4 * r.n));
        assert_eq!(to_csv(&rows).lines().count(), 5);
        let again = run_bench(&cfg).unwrap();
        let sizes = |rs: &[BenchRow]| rs.iter().map(|r| r.solve_size).collect::<Vec<_>>();
        assert_eq!(sizes(&rows), sizes(&again));
    }
}
