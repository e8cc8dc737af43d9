use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::exact::{weighted_exact_with_splitting, Instance};
use crate::field::FieldConfig;
use crate::linalg::SparseMatrix;

use super::cardinality::{sketch_instance, solve_cardinality};
use super::chain::{build_compact_dual, round_up_chain, ChainDual, ChainOracle};
use super::membership::{MembershipQuery, PrefixMembership};
use super::params::{ApproxParams, Epsilon};
use super::trace::{AuditRecord, IterationRecord};
use super::weights::WeightState;

/// Per-element coverage `Σ_{S ∋ e} (y(S) + z(S)) ≥ c(e)`, reading each
/// chain's suffix sum at the first prefix that contains `e`. Loops are
/// covered by a free dual on the rank-0 span of the empty set.
pub fn coverage_check(
    inst: &Instance,
    y: &ChainDual,
    z: &ChainDual,
    qy: &PrefixMembership,
    qz: &PrefixMembership,
) -> Result<Vec<bool>> {
    let c = inst.require_weights()?;
    Ok((0..inst.n())
        .map(|e| {
            if inst.is_loop(e) {
                return true;
            }
            let total = y.value_at(qy.first_member(inst.m1(), e)) + z.value_at(qz.first_member(inst.m2(), e));
            total >= c[e]
        })
        .collect())
}

/// Counters kept by the weighted loop.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedCounters {
    /// Degenerate bilinear forms replaced while building queries.
    pub form_restarts: usize,
    /// Queries answered by elimination after every form was degenerate.
    pub exact_fallbacks: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedRun {
    pub set: Vec<usize>,
    pub weight: BigRational,
    pub iterations: Vec<IterationRecord>,
    pub audits: Vec<AuditRecord>,
    pub counters: WeightedCounters,
}

fn prefix_membership(
    m: &SparseMatrix,
    chain: &ChainDual,
    params: &ApproxParams,
    cfg: &FieldConfig,
    counters: &mut WeightedCounters,
    rng: &mut dyn RngCore,
) -> Result<PrefixMembership> {
    if params.oracle {
        return Ok(PrefixMembership::Exact(ChainOracle::new(m, &chain.elements)));
    }
    match MembershipQuery::build(m, &chain.elements, cfg, params.form_retries, rng) {
        Ok(q) => {
            counters.form_restarts += q.restarts();
            Ok(PrefixMembership::Randomized(q))
        }
        Err(Error::DegenerateAfterRetries { attempts }) => {
            counters.form_restarts += attempts;
            counters.exact_fallbacks += 1;
            Ok(PrefixMembership::Exact(ChainOracle::new(m, &chain.elements)))
        }
        Err(e) => Err(e),
    }
}

/// The weighted sparsification loop.
///
/// Each round samples, solves the subinstance exactly together with a
/// weight splitting, turns the splitting into chain duals over the whole
/// ground set, rounds their prefix weights up to powers of `1 + eps`, and
/// halves every element the rounded duals cover. The heaviest subsolve is
/// returned.
pub fn approx_weighted(
    inst: &Instance,
    k: usize,
    eps: &Epsilon,
    params: &ApproxParams,
    cfg: &FieldConfig,
    rng: &mut dyn RngCore,
) -> Result<WeightedRun> {
    let c = inst.require_weights()?.to_vec();
    let n = inst.n();
    let rounds = params.iterations(n, eps);
    let m = params.sample_size(n, k.max(1), eps);
    let one_plus = BigRational::one() + eps.exact();
    let mut weights = WeightState::new(n);
    let mut best: Vec<usize> = Vec::new();
    let mut best_weight = BigRational::zero();
    let mut iterations = Vec::with_capacity(rounds);
    let mut audits = Vec::new();
    let mut counters = WeightedCounters::default();
    for iteration in 1..=rounds {
        let sample = weights.sample(m, rng);
        let sub = inst.restrict(&sample);
        let sol = weighted_exact_with_splitting(&sub)?;
        let (y_local, z_local) = build_compact_dual(&sub, &sol.set, &sol.splitting);
        let y = round_up_chain(&y_local, eps.exact()).relabel(&sample);
        let z = round_up_chain(&z_local, eps.exact()).relabel(&sample);
        let qy = prefix_membership(inst.m1(), &y, params, cfg, &mut counters, rng)?;
        let qz = prefix_membership(inst.m2(), &z, params, cfg, &mut counters, rng)?;
        let covered = coverage_check(inst, &y, &z, &qy, &qz)?;

        if params.audit {
            let oy = ChainOracle::new(sub.m1(), &y_local.elements);
            let oz = ChainOracle::new(sub.m2(), &z_local.elements);
            let feasible = (0..sub.n()).all(|e| {
                sub.is_loop(e)
                    || y_local.value_at(oy.first_member(sub.m1(), e)) + z_local.value_at(oz.first_member(sub.m2(), e))
                    >= c[sample[e]]
            });
            let c1: BigRational = sol.set.iter().map(|&i| &sol.splitting.c1[i]).sum();
            let c2: BigRational = sol.set.iter().map(|&i| &sol.splitting.c2[i]).sum();
            let unrounded = y_local.objective() + z_local.objective();
            let objective_exact = unrounded == &c1 + &c2 && c1 + c2 == sol.weight;
            let rounded = y.objective() + z.objective();
            let rounded_within = rounded <= &one_plus * &sol.weight;
            let exact = coverage_check(
                inst,
                &y,
                &z,
                &PrefixMembership::Exact(ChainOracle::new(inst.m1(), &y.elements)),
                &PrefixMembership::Exact(ChainOracle::new(inst.m2(), &z.elements)),
            )?;
            let one_sided_violations = exact.iter().zip(&covered).filter(|(&o, &r)| o && !r).count();
            audits.push(AuditRecord {
                iteration,
                feasible,
                objective_exact,
                rounded_within,
                one_sided_violations,
            });
        }

        let mut halved = 0;
        for e in (0..n).filter(|&e| covered[e]) {
            weights.halve(e);
            halved += 1;
        }
        iterations.push(IterationRecord {
            iteration,
            sample_size: sample.len(),
            subsolve: sol.weight.to_string(),
            halved,
        });
        if sol.weight > best_weight {
            best_weight = sol.weight.clone();
            best = sol.set.iter().map(|&i| sample[i]).collect();
        }
        if sample.len() == n {
            break;
        }
    }
    Ok(WeightedRun {
        set: best,
        weight: best_weight,
        iterations,
        audits,
        counters,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedOutcome {
    pub set: Vec<usize>,
    pub weight: BigRational,
    /// Size of the cardinality bootstrap solution.
    pub bootstrap_size: usize,
    pub k: usize,
    pub sketch_rows: [usize; 2],
    pub sketch_resamples: usize,
    pub iterations: Vec<IterationRecord>,
    pub audits: Vec<AuditRecord>,
    pub counters: WeightedCounters,
}

/// `(1 − eps)`-approximate maximum-weight common independent set.
///
/// A `2/3`-approximate cardinality solution `S̄` bounds the optimum's size,
/// so both matrices are sketched for `k = ⌈3|S̄|/2⌉` before the weighted
/// loop runs. If the result weighs less than `(1 − eps)·c(S̄)` the sketch
/// is resampled once.
pub fn solve_weighted(inst: &Instance, eps: f64, params: &ApproxParams, rng: &mut dyn RngCore) -> Result<WeightedOutcome> {
    let eps = Epsilon::new(eps)?;
    params.validate()?;
    inst.require_weights()?;
    let n = inst.n();
    let cfg = FieldConfig::new(inst.field(), n);
    let bootstrap = solve_cardinality(inst, 1.0 / 3.0, params, rng)?;
    let bootstrap_size = bootstrap.set.len();
    let k = (3 * bootstrap_size).div_ceil(2).max(1);
    let attempt = |rng: &mut dyn RngCore| -> Result<(WeightedRun, [usize; 2])> {
        let sketched = sketch_instance(inst, k, params, &cfg, rng)?;
        let rows = [sketched.m1().rows(), sketched.m2().rows()];
        let run = approx_weighted(&sketched, rows[0].max(rows[1]), &eps, params, &cfg, rng)?;
        Ok((run, rows))
    };
    let (mut run, mut rows) = attempt(rng)?;
    let floor = (BigRational::one() - eps.exact()) * inst.weight_of(&bootstrap.set);
    let mut sketch_resamples = 0;
    if run.weight < floor {
        sketch_resamples += 1;
        let (again, again_rows) = attempt(rng)?;
        let mut merged = if again.weight > run.weight { again.clone() } else { run.clone() };
        merged.iterations = run.iterations.into_iter().chain(again.iterations).collect();
        merged.audits = run.audits.into_iter().chain(again.audits).collect();
        merged.counters = WeightedCounters {
            form_restarts: run.counters.form_restarts + again.counters.form_restarts,
            exact_fallbacks: run.counters.exact_fallbacks + again.counters.exact_fallbacks,
        };
        if again.weight > run.weight {
            rows = again_rows;
        }
        run = merged;
    }
    if !inst.is_common_independent(&run.set) {
        return Err(Error::Internal("sketched solution is dependent in the input".into()));
    }
    Ok(WeightedOutcome {
        weight: inst.weight_of(&run.set),
        set: run.set,
        bootstrap_size,
        k,
        sketch_rows: rows,
        sketch_resamples,
        iterations: run.iterations,
        audits: run.audits,
        counters: run.counters,
    })
}
