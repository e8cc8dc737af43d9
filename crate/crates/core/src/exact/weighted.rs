use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{BasisTracker, SparseMatrix};

use super::graph::{symmetric_difference, ExchangeGraph};
use super::Instance;

/// `c ≤ c₁ + c₂` with `I` simultaneously `c₁`-maximum in the first matroid
/// and `c₂`-maximum in the second.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSplitting {
    pub c1: Vec<BigRational>,
    pub c2: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSolution {
    pub set: Vec<usize>,
    pub weight: BigRational,
    pub splitting: WeightSplitting,
    pub augmentations: usize,
}

/// Weights scaled by their common denominator.
fn integer_weights(weights: &[BigRational]) -> Result<(Vec<i128>, BigInt)> {
    let denom = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let n = weights.len();
    let scaled = weights
        .iter()
        .map(|w| {
            (w.numer() * (&denom / w.denom()))
                .to_i128()
                .filter(|v| v.unsigned_abs() < (1u128 << 100) / (n as u128 + 2))
                .ok_or_else(|| {
                    Error::InvalidArgument("weights exceed the scaled integer range".into())
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((scaled, denom))
}

/// Minimum `(length, hops)` source-to-sink path under vertex lengths
/// `+c(x)` on `I` and `−c(y)` off it.
fn cheapest_path(g: &ExchangeGraph, c: &[i128]) -> Result<Option<(i128, Vec<usize>)>> {
    let n = g.len();
    let len = |v: usize| if g.in_set[v] { c[v] } else { -c[v] };
    let mut dist: Vec<Option<(i128, usize)>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    for v in (0..n).filter(|&v| g.sources[v]) {
        dist[v] = Some((len(v), 0));
    }
    let mut changed = true;
    let mut rounds = 0;
    while changed {
        changed = false;
        rounds += 1;
        if rounds > n + 1 {
            return Err(Error::Internal("negative cycle in exchange graph".into()));
        }
        for u in 0..n {
            let Some((du, hu)) = dist[u] else { continue };
            for &v in &g.out[u] {
                let cand = (du + len(v), hu + 1);
                if dist[v].is_none_or(|d| cand < d) {
                    dist[v] = Some(cand);
                    pred[v] = u;
                    changed = true;
                }
            }
        }
    }
    let best = (0..n)
        .filter(|&v| g.sinks[v])
        .filter_map(|v| dist[v].map(|d| (d, v)))
        .min();
    Ok(best.map(|((length, _), t)| {
        let mut path = vec![t];
        let mut v = t;
        while pred[v] != usize::MAX {
            v = pred[v];
            path.push(v);
        }
        path.reverse();
        (length, path)
    }))
}

/// Potentials `p = c₁` (scaled) satisfying the optimality conditions of `I`
/// in both matroids, found as a shortest-path solution of a system of
/// difference constraints.
fn splitting_potentials(g: &ExchangeGraph, c: &[i128]) -> Result<Vec<i128>> {
    let n = g.len();
    let z = n;
    // (from, to, w) encodes p(to) ≤ p(from) + w
    let mut edges: Vec<(usize, usize, i128)> = Vec::new();
    for v in 0..n {
        if g.in_set[v] {
            edges.push((z, v, c[v]));
            edges.push((v, z, 0));
            for &y in &g.out[v] {
                edges.push((v, y, 0));
            }
        } else {
            edges.push((v, z, 0));
            if g.sources[v] {
                edges.push((z, v, 0));
            }
            if g.sinks[v] {
                edges.push((v, z, -c[v]));
            }
            for &x in &g.out[v] {
                edges.push((v, x, c[x] - c[v]));
            }
        }
    }
    let mut d = vec![0i128; n + 1];
    for round in 0..=n + 1 {
        let mut changed = false;
        for &(a, b, w) in &edges {
            if d[a] + w < d[b] {
                d[b] = d[a] + w;
                changed = true;
            }
        }
        if !changed {
            return Ok((0..n).map(|v| d[v] - d[z]).collect());
        }
        if round == n + 1 {
            break;
        }
    }
    Err(Error::Internal("weight splitting system is infeasible".into()))
}

/// Maximum-weight common independent set by successive shortest augmenting
/// paths, with a weight splitting certifying optimality.
pub fn weighted_exact_with_splitting(inst: &Instance) -> Result<WeightedSolution> {
    let weights = inst.require_weights()?;
    let (c, denom) = integer_weights(weights)?;
    let mut set: Vec<usize> = Vec::new();
    let mut augmentations = 0;
    let g = loop {
        let g = ExchangeGraph::build(inst, &set);
        match cheapest_path(&g, &c)? {
            Some((length, path)) if length < 0 => {
                set = symmetric_difference(&set, &path);
                augmentations += 1;
            }
            _ => break g,
        }
    };
    let p = splitting_potentials(&g, &c)?;
    let to_rat = |v: i128| BigRational::new(BigInt::from(v), denom.clone());
    let c1: Vec<BigRational> = p.iter().map(|&v| to_rat(v)).collect();
    let c2: Vec<BigRational> = (0..inst.n())
        .map(|v| {
            if g.in_set[v] {
                to_rat(c[v] - p[v])
            } else {
                to_rat((c[v] - p[v]).max(0))
            }
        })
        .collect();
    let splitting = WeightSplitting { c1, c2 };
    if !check_weight_splitting(inst, &set, &splitting) {
        return Err(Error::Internal("weight splitting failed its post-check".into()));
    }
    Ok(WeightedSolution {
        weight: inst.weight_of(&set),
        set,
        splitting,
        augmentations,
    })
}

/// Maximum of `w(J)` over independent `J`, by the greedy algorithm.
pub fn greedy_max_weight(m: &SparseMatrix, w: &[BigRational]) -> BigRational {
    let mut order: Vec<usize> = (0..m.cols()).filter(|&i| w[i].is_positive()).collect();
    order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
    let mut t = BasisTracker::new(m.field(), m.rows());
    let mut total = BigRational::zero();
    for i in order {
        if t.try_insert(i, m.column(i)).expect("column fits the matrix") {
            total += &w[i];
        }
    }
    total
}

/// Checks nonnegativity and the four splitting conditions exactly.
pub fn check_weight_splitting(inst: &Instance, set: &[usize], split: &WeightSplitting) -> bool {
    let Some(c) = inst.weights() else {
        return false;
    };
    let n = inst.n();
    if split.c1.len() != n || split.c2.len() != n || !inst.is_common_independent(set) {
        return false;
    }
    if split.c1.iter().chain(&split.c2).any(|x| x.is_negative()) {
        return false;
    }
    if (0..n).any(|e| c[e] > &split.c1[e] + &split.c2[e]) {
        return false;
    }
    let sum = |w: &[BigRational]| set.iter().map(|&i| &w[i]).sum::<BigRational>();
    let (c1_i, c2_i) = (sum(&split.c1), sum(&split.c2));
    c1_i.clone() + &c2_i == inst.weight_of(set)
        && c1_i == greedy_max_weight(inst.m1(), &split.c1)
        && c2_i == greedy_max_weight(inst.m2(), &split.c2)
}
