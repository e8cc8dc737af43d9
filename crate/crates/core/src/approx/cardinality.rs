use rand::RngCore;

use crate::error::{Error, Result};
use crate::exact::{max_common_independent, Instance};
use crate::field::FieldConfig;
use crate::sketch::SketchOperator;
use crate::span::{GaussianSpan, RandomizedSpan, SpanMethod};

use super::params::{ApproxParams, Epsilon};
use super::trace::{IterationRecord, LevelRecord};
use super::weights::WeightState;

/// Result of one run of a sparsification loop.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopRun {
    pub set: Vec<usize>,
    pub iterations: Vec<IterationRecord>,
}

pub(crate) fn span_strategy(params: &ApproxParams) -> Box<dyn SpanMethod> {
    if params.oracle {
        Box::new(GaussianSpan)
    } else {
        Box::new(RandomizedSpan {
            repetitions: params.span_repetitions.max(1),
        })
    }
}

/// The cardinality sparsification loop.
///
/// Each round samples about `c_sample·k·ln n / eps` elements in proportion
/// to their weights, solves the subinstance exactly, extends its dual
/// `(S̃, T̃)` to `(span₁(S̃), span₂(T̃))` on the whole ground set and halves
/// the weight of every element the extended dual covers. The largest
/// subsolve over all rounds is returned. A round whose sample is the whole
/// ground set solves the instance outright and ends the loop.
pub fn approx_cardinality(
    inst: &Instance,
    k: usize,
    eps: &Epsilon,
    params: &ApproxParams,
    cfg: &FieldConfig,
    rng: &mut dyn RngCore,
) -> Result<LoopRun> {
    let n = inst.n();
    let rounds = params.iterations(n, eps);
    let m = params.sample_size(n, k.max(1), eps);
    let span = span_strategy(params);
    let mut weights = WeightState::new(n);
    let mut best: Vec<usize> = Vec::new();
    let mut iterations = Vec::with_capacity(rounds);
    for iteration in 1..=rounds {
        let sample = weights.sample(m, rng);
        let sub = inst.restrict(&sample);
        let sol = max_common_independent(&sub);
        let lift = |local: &[usize]| local.iter().map(|&i| sample[i]).collect::<Vec<_>>();
        let set = lift(&sol.set);
        let s = span.span(inst.m1(), &lift(&sol.dual.s), cfg, rng);
        let t = span.span(inst.m2(), &lift(&sol.dual.t), cfg, rng);
        let mut covered = vec![false; n];
        for &e in s.iter().chain(&t) {
            covered[e] = true;
        }
        let mut halved = 0;
        for e in (0..n).filter(|&e| covered[e]) {
            weights.halve(e);
            halved += 1;
        }
        iterations.push(IterationRecord {
            iteration,
            sample_size: sample.len(),
            subsolve: set.len().to_string(),
            halved,
        });
        if set.len() > best.len() {
            best = set;
        }
        if sample.len() == n {
            break;
        }
    }
    Ok(LoopRun { set: best, iterations })
}

/// Outcome of the doubling pipeline for maximum cardinality.
#[derive(Clone, Debug, PartialEq)]
pub struct CardinalityOutcome {
    pub set: Vec<usize>,
    pub best_level: usize,
    pub levels: Vec<LevelRecord>,
    pub sketch_resamples: usize,
}

pub(crate) fn sketch_instance(
    inst: &Instance,
    k: usize,
    params: &ApproxParams,
    cfg: &FieldConfig,
    rng: &mut dyn RngCore,
) -> Result<Instance> {
    let sp = params.sketch();
    let n = inst.n();
    let s1 = SketchOperator::sample(cfg, inst.m1().rows(), n, k, &sp, rng);
    let s2 = SketchOperator::sample(cfg, inst.m2().rows(), n, k, &sp, rng);
    inst.with_matrices(s1.apply(inst.m1()), s2.apply(inst.m2()))
}

/// `(1 − eps)`-approximate maximum common independent set.
///
/// Runs the sparsification loop on sketches to `O(ℓ)` rows for
/// `ℓ = 2, 4, 8, …` until a level returns fewer than `ℓ/2` elements. A
/// failing level is retried once with a fresh sketch unless `ℓ/2` exceeds
/// the trivial bound `min(r₁, r₂, n)`. The answer is re-validated on the
/// original matrices.
pub fn solve_cardinality(
    inst: &Instance,
    eps: f64,
    params: &ApproxParams,
    rng: &mut dyn RngCore,
) -> Result<CardinalityOutcome> {
    let eps = Epsilon::within(eps, 0.5, "(0, 1/2)")?;
    params.validate()?;
    let n = inst.n();
    let cfg = FieldConfig::new(inst.field(), n);
    let bound = inst.m1().rows().min(inst.m2().rows()).min(n);
    let mut best: Vec<usize> = Vec::new();
    let mut best_level = 0;
    let mut levels = Vec::new();
    let mut sketch_resamples = 0;
    let mut level = 2;
    loop {
        let attempt = |rng: &mut dyn RngCore| -> Result<(LoopRun, [usize; 2])> {
            let sketched = sketch_instance(inst, level, params, &cfg, rng)?;
            let rows = [sketched.m1().rows(), sketched.m2().rows()];
            let run = approx_cardinality(&sketched, rows[0].max(rows[1]), &eps, params, &cfg, rng)?;
            Ok((run, rows))
        };
        let (mut run, mut rows) = attempt(rng)?;
        let mut resampled = false;
        if 2 * run.set.len() < level && level / 2 <= bound {
            resampled = true;
            sketch_resamples += 1;
            let (again, again_rows) = attempt(rng)?;
            if again.set.len() > run.set.len() {
                run = again;
                rows = again_rows;
            }
        }
        if !inst.is_common_independent(&run.set) {
            return Err(Error::Internal("sketched solution is dependent in the input".into()));
        }
        let size = run.set.len();
        levels.push(LevelRecord {
            level,
            sketch_rows: rows,
            k: rows[0].max(rows[1]),
            best_size: size,
            resampled,
            iterations: run.iterations,
        });
        if size > best.len() || levels.len() == 1 {
            best = run.set;
            best_level = level;
        }
        if 2 * size < level {
            break;
        }
        level *= 2;
    }
    Ok(CardinalityOutcome {
        set: best,
        best_level,
        levels,
        sketch_resamples,
    })
}
