//! Named solvers behind one trait.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approx::{solve_cardinality, solve_weighted, ApproxParams};
use crate::error::{Error, Result};
use crate::exact::{max_common_independent, weighted_exact_with_splitting, Instance};
use crate::report::{certificate_from_dual, certificate_from_splitting, Resamples, SolveReport, Trace};

pub const DEFAULT_EPS: f64 = 0.2;

/// Everything a solver run may depend on besides the instance.
#[derive(Clone, Debug, PartialEq)]
pub struct RunContext {
    pub seed: u64,
    pub eps: f64,
    pub params: ApproxParams,
}

impl Default for RunContext {
    fn default() -> Self {
        Self {
            seed: 0,
            eps: DEFAULT_EPS,
            params: ApproxParams::default(),
        }
    }
}

impl RunContext {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    fn solve(&self, inst: &Instance, ctx: &RunContext) -> Result<SolveReport>;
}

pub struct ExactCardinality;

impl Solver for ExactCardinality {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve(&self, inst: &Instance, ctx: &RunContext) -> Result<SolveReport> {
        let sol = max_common_independent(inst);
        let mut report = SolveReport::new(self.name(), ctx.seed, inst, &sol.set);
        report.r_star = Some(sol.set.len());
        report.certificate = Some(certificate_from_dual(&sol.dual, inst));
        Ok(report)
    }
}

pub struct ExactWeighted;

impl Solver for ExactWeighted {
    fn name(&self) -> &'static str {
        "exact-weighted"
    }

    fn solve(&self, inst: &Instance, ctx: &RunContext) -> Result<SolveReport> {
        let sol = weighted_exact_with_splitting(inst)?;
        let mut report = SolveReport::new(self.name(), ctx.seed, inst, &sol.set);
        report.certificate = Some(certificate_from_splitting(&sol.splitting, &sol.weight));
        Ok(report)
    }
}

pub struct ApproxCardinality;

impl Solver for ApproxCardinality {
    fn name(&self) -> &'static str {
        "approx"
    }

    fn solve(&self, inst: &Instance, ctx: &RunContext) -> Result<SolveReport> {
        let out = solve_cardinality(inst, ctx.eps, &ctx.params, &mut ctx.rng())?;
        let mut report = SolveReport::new(self.name(), ctx.seed, inst, &out.set);
        report.eps = Some(ctx.eps);
        report.params = Some(ctx.params.clone());
        report.resamples.sketch = out.sketch_resamples;
        report.trace = Some(Trace::Cardinality {
            best_level: out.best_level,
            levels: out.levels,
        });
        if ctx.params.oracle {
            report.r_star = Some(max_common_independent(inst).set.len());
        }
        Ok(report)
    }
}

pub struct ApproxWeighted;

impl Solver for ApproxWeighted {
    fn name(&self) -> &'static str {
        "approx-weighted"
    }

    fn solve(&self, inst: &Instance, ctx: &RunContext) -> Result<SolveReport> {
        let out = solve_weighted(inst, ctx.eps, &ctx.params, &mut ctx.rng())?;
        let mut report = SolveReport::new(self.name(), ctx.seed, inst, &out.set);
        report.eps = Some(ctx.eps);
        report.params = Some(ctx.params.clone());
        report.resamples = Resamples {
            sketch: out.sketch_resamples,
            form_restarts: out.counters.form_restarts,
            exact_fallbacks: out.counters.exact_fallbacks,
        };
        report.trace = Some(Trace::Weighted {
            bootstrap_size: out.bootstrap_size,
            k: out.k,
            sketch_rows: out.sketch_rows,
            iterations: out.iterations,
            audits: out.audits,
        });
        if ctx.params.oracle {
            report.r_star = Some(max_common_independent(inst).set.len());
        }
        Ok(report)
    }
}

/// Solvers keyed by name.
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn Solver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ExactCardinality));
        r.register(Box::new(ExactWeighted));
        r.register(Box::new(ApproxCardinality));
        r.register(Box::new(ApproxWeighted));
        r
    }
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self {
            solvers: BTreeMap::new(),
        }
    }

    /// Adds a solver, replacing any with the same name.
    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.solvers.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }

    /// Runs `name` and re-validates the solution on `inst` before returning.
    pub fn run(&self, name: &str, inst: &Instance, ctx: &RunContext) -> Result<SolveReport> {
        let solver = self.get(name).ok_or_else(|| Error::UnknownSolver(name.to_string()))?;
        let report = solver.solve(inst, ctx)?;
        if !inst.is_common_independent(&report.zero_based()?) {
            return Err(Error::Internal(format!("{name} returned a dependent set")));
        }
        Ok(report)
    }
}
