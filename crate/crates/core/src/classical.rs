//! Classical coloring solvers and energy oracles.

use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::maximum_independent_sets;
use crate::error::{Error, Result};
use crate::graph::ProblemGraph;
use crate::hamiltonian::DiagonalModel;
use crate::interactions::LevelScheme;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChromaticResult {
    pub chi: usize,
    /// Labels `0..chi`.
    pub witness: Vec<usize>,
    /// Labeled optimal colorings (color permutations counted).
    pub count: u64,
}

/// Largest graph for the exhaustive chromatic search.
pub const CHROMATIC_LIMIT: usize = 12;

/// Exact chromatic number by exhaustive backtracking for k = 1, 2, ...
pub fn chromatic_bruteforce(g: &ProblemGraph) -> Result<ChromaticResult> {
    let n = g.n();
    if n > CHROMATIC_LIMIT {
        return Err(Error::TooManyVertices { n, limit: CHROMATIC_LIMIT });
    }
    let adj = g.adjacency();
    for k in 1..=n {
        let mut c = vec![usize::MAX; n];
        let mut witness = None;
        let count = count_colorings(0, k, &adj, &mut c, &mut witness);
        if count > 0 {
            return Ok(ChromaticResult { chi: k, witness: witness.unwrap(), count });
        }
    }
    unreachable!("n colors always suffice")
}

fn count_colorings(v: usize, k: usize, adj: &[Vec<bool>], c: &mut Vec<usize>, w: &mut Option<Vec<usize>>) -> u64 {
    if v == c.len() {
        if w.is_none() {
            *w = Some(c.clone());
        }
        return 1;
    }
    let mut total = 0;
    for l in 0..k {
        if (0..v).any(|u| adj[u][v] && c[u] == l) {
            continue;
        }
        c[v] = l;
        total += count_colorings(v + 1, k, adj, c, w);
    }
    c[v] = usize::MAX;
    total
}

fn smallest_free(v: usize, adj: &[Vec<bool>], c: &[usize]) -> usize {
    let mut l = 0;
    while (0..c.len()).any(|u| adj[u][v] && c[u] == l) {
        l += 1;
    }
    l
}

/// Saturation-degree greedy. Ties go to the larger degree in the full
/// graph, then the smaller vertex id. Returns the coloring and color count.
pub fn dsatur(g: &ProblemGraph) -> (Vec<usize>, usize) {
    let n = g.n();
    let adj = g.adjacency();
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut c = vec![usize::MAX; n];
    for _ in 0..n {
        let sat = |v: usize| {
            let mut seen: Vec<usize> = (0..n).filter(|&u| adj[u][v] && c[u] != usize::MAX).map(|u| c[u]).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        };
        let v = (0..n)
            .filter(|&v| c[v] == usize::MAX)
            .max_by(|&a, &b| sat(a).cmp(&sat(b)).then(deg[a].cmp(&deg[b])).then(b.cmp(&a)))
            .unwrap();
        c[v] = smallest_free(v, &adj, &c);
    }
    let k = c.iter().max().map_or(0, |m| m + 1);
    (c, k)
}

/// Greedy first-fit in order of decreasing degree (ties by vertex id).
pub fn welsh_powell(g: &ProblemGraph) -> (Vec<usize>, usize) {
    let n = g.n();
    let adj = g.adjacency();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut c = vec![usize::MAX; n];
    for v in order {
        c[v] = smallest_free(v, &adj, &c);
    }
    let k = c.iter().max().map_or(0, |m| m + 1);
    (c, k)
}

/// Repeatedly removes a maximum independent set of the remaining graph
/// (lexicographically smallest on ties) and gives it a new color.
pub fn rlf_mis_first(g: &ProblemGraph) -> Result<(Vec<usize>, usize)> {
    let n = g.n();
    let mut c = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut color = 0;
    while !remaining.is_empty() {
        let pos: Vec<_> = remaining.iter().map(|&v| g.positions[v]).collect();
        let edges: Vec<(usize, usize)> = g
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                let a = remaining.iter().position(|&x| x == u)?;
                let b = remaining.iter().position(|&x| x == v)?;
                Some((a, b))
            })
            .collect();
        let sub = ProblemGraph::new("sub", pos, edges, g.spacing_a)?;
        let mis = &maximum_independent_sets(&sub)?[0];
        for &i in mis {
            c[remaining[i]] = color;
        }
        remaining = remaining.iter().enumerate().filter(|(i, _)| !mis.contains(i)).map(|(_, &v)| v).collect();
        color += 1;
    }
    Ok((c, color))
}

/// Potts energy −A·(excited vertices) + B·(edges with equal Rydberg labels).
/// Ground (0) earns no reward and incurs no penalty.
pub fn potts_energy(c: &[usize], g: &ProblemGraph, a: f64, b: f64) -> f64 {
    let excited = c.iter().filter(|&&l| l > 0).count() as f64;
    let clashes = g.edges.iter().filter(|&&(u, v)| c[u] > 0 && c[u] == c[v]).count() as f64;
    -a * excited + b * clashes
}

/// QUBO Σ_v (1 − Σ_i x_vi)² + Σ_(u,v)∈E Σ_i x_ui x_vi for an N×k 0/1 matrix.
pub fn qubo_energy(x: &[Vec<bool>], g: &ProblemGraph) -> f64 {
    let mut e = 0.0;
    for row in x {
        let s = row.iter().filter(|&&b| b).count() as f64;
        e += (1.0 - s) * (1.0 - s);
    }
    for &(u, v) in &g.edges {
        e += x[u].iter().zip(&x[v]).filter(|(a, b)| **a && **b).count() as f64;
    }
    e
}

/// One-hot encoding of labels `0..k` (label `l` sets column `l`).
pub fn one_hot(c: &[usize], k: usize) -> Vec<Vec<bool>> {
    c.iter().map(|&l| (0..k).map(|i| i == l).collect()).collect()
}

/// Argmin set of the diagonal energy at `delta_final` (within `tol` MHz).
pub fn final_ground_states(
    g: &ProblemGraph,
    levels: &LevelScheme,
    delta_final: &[f64],
    tol: f64,
) -> Result<Vec<usize>> {
    if delta_final.len() != levels.k {
        return Err(Error::DimensionMismatch("delta length differs from k".into()));
    }
    let e = DiagonalModel::new(g, levels, None)?.energies(delta_final);
    let min = e.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((0..e.len()).filter(|&i| e[i] - min <= tol).collect())
}
