//! Instance generators: random sparse matrices, graphic matroids,
//! bipartite matching and rainbow spanning trees.

use std::collections::HashSet;

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::Instance;
use crate::field::{choose_prime, Field};
use crate::linalg::SparseMatrix;

/// Random `rows × n` matrix whose entries are nonzero with probability
/// `density`, each nonzero uniform in `[1, p)`.
pub fn random_matrix<R: Rng + ?Sized>(field: Field, rows: usize, n: usize, density: f64, rng: &mut R) -> SparseMatrix {
    let density = density.clamp(0.0, 1.0);
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let mut col = Vec::new();
        for r in 0..rows {
            if rng.gen_bool(density) {
                col.push((r, rng.gen_range(1..field.modulus())));
            }
        }
        columns.push(col);
    }
    SparseMatrix::from_columns(field, rows, columns).expect("rows are in range")
}

/// Random `rows × n` matrix with exactly `per_column` nonzeros (capped at
/// `rows`) in distinct uniformly chosen rows of every column.
pub fn random_matrix_fixed_nnz<R: Rng + ?Sized>(
    field: Field,
    rows: usize,
    n: usize,
    per_column: usize,
    rng: &mut R,
) -> SparseMatrix {
    let per_column = per_column.min(rows);
    let columns = (0..n)
        .map(|_| {
            rand::seq::index::sample(rng, rows, per_column)
                .into_iter()
                .map(|r| (r, rng.gen_range(1..field.modulus())))
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(field, rows, columns).expect("rows are in range")
}

/// Two independent random `r × n` matrices over the field chosen for `n`.
pub fn gen_random(r: usize, n: usize, density: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance(choose_prime(n).field, r, r, n, density, &mut rng)
}

pub fn random_instance<R: Rng + ?Sized>(
    field: Field,
    r1: usize,
    r2: usize,
    n: usize,
    density: f64,
    rng: &mut R,
) -> Instance {
    let m1 = random_matrix(field, r1, n, density, rng);
    let m2 = random_matrix(field, r2, n, density, rng);
    Instance::new(m1, m2).expect("matrices share n and the field")
}

fn check_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u >= vertices || v >= vertices {
            return Err(Error::InvalidGraph(format!(
                "edge {} ({u}, {v}) names a vertex outside 0..{vertices}",
                i + 1
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("edge {} is a self-loop at {u}", i + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidGraph(format!("edge {} ({u}, {v}) is repeated", i + 1)));
        }
    }
    Ok(())
}

/// Signed vertex–edge incidence matrix: edge `(u, v)` gets `p − 1` at its
/// tail `u` and `+1` at its head `v`.
pub fn gen_graphic(field: Field, vertices: usize, edges: &[(usize, usize)]) -> Result<SparseMatrix> {
    check_edges(vertices, edges)?;
    let minus_one = field.neg(1);
    let columns = edges
        .iter()
        .map(|&(u, v)| vec![(u, minus_one), (v, 1)])
        .collect();
    SparseMatrix::from_columns(field, vertices, columns)
}

/// Bipartite matching as two partition matroids. Edge `(a, b)` joins left
/// vertex `a` to right vertex `b`.
pub fn gen_bipartite(field: Field, left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Instance> {
    let mut seen = HashSet::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a >= left || b >= right {
            return Err(Error::InvalidGraph(format!(
                "edge {} ({a}, {b}) leaves the {left} × {right} bipartition",
                i + 1
            )));
        }
        if !seen.insert((a, b)) {
            return Err(Error::InvalidGraph(format!("edge {} ({a}, {b}) is repeated", i + 1)));
        }
    }
    let m1 = SparseMatrix::from_columns(field, left, edges.iter().map(|&(a, _)| vec![(a, 1)]).collect())?;
    let m2 = SparseMatrix::from_columns(field, right, edges.iter().map(|&(_, b)| vec![(b, 1)]).collect())?;
    Instance::new(m1, m2)
}

/// Rainbow spanning forest: the graphic matroid paired with the partition
/// matroid of edge colours. Each edge is `(u, v, colour)`.
pub fn gen_rainbow(field: Field, vertices: usize, edges: &[(usize, usize, usize)]) -> Result<Instance> {
    let plain: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let m1 = gen_graphic(field, vertices, &plain)?;
    let colours = edges.iter().map(|&(_, _, c)| c + 1).max().unwrap_or(0);
    let m2 = SparseMatrix::from_columns(field, colours, edges.iter().map(|&(_, _, c)| vec![(c, 1)]).collect())?;
    Instance::new(m1, m2)
}

/// Uniformly random simple graph with `edges` edges (capped at the number
/// of vertex pairs), listed in sampling order.
pub fn random_graph<R: Rng + ?Sized>(vertices: usize, edges: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let pairs = vertices * vertices.saturating_sub(1) / 2;
    let target = edges.min(pairs);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(target);
    while out.len() < target {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            out.push((u, v));
        }
    }
    out
}

/// Random bipartite edge set with `edges` distinct edges (capped).
pub fn random_bipartite<R: Rng + ?Sized>(left: usize, right: usize, edges: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let target = edges.min(left * right);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(target);
    while out.len() < target {
        let e = (rng.gen_range(0..left), rng.gen_range(0..right));
        if seen.insert(e) {
            out.push(e);
        }
    }
    out
}

/// Integer weights drawn uniformly from `1..=max`.
pub fn random_weights<R: Rng + ?Sized>(n: usize, max: u64, rng: &mut R) -> Vec<BigRational> {
    (0..n)
        .map(|_| BigRational::from_integer(rng.gen_range(1..=max.max(1)).into()))
        .collect()
}
