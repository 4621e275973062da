//! Unit-disk problem graphs, the built-in benchmark library and symmetry
//! enumeration.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::DISTANCE_TOL;

/// Atom position in μm.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        libm::sqrt(dx * dx + dy * dy + dz * dz)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Which annealer a built-in embedding is tuned for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Optimizer {
    TwoRydberg,
    ThreeRydberg,
}

impl Optimizer {
    /// Number of Rydberg levels.
    pub fn k(self) -> usize {
        match self {
            Optimizer::TwoRydberg => 2,
            Optimizer::ThreeRydberg => 3,
        }
    }

    pub fn from_k(k: usize) -> Option<Self> {
        match k {
            2 => Some(Optimizer::TwoRydberg),
            3 => Some(Optimizer::ThreeRydberg),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Optimizer::TwoRydberg => "2-Rydberg",
            Optimizer::ThreeRydberg => "3-Rydberg",
        }
    }
}

/// A coloring instance embedded as atoms.
///
/// Vertices are 0-based. Edges are stored as `(u, v)` with `u < v`, sorted
/// and deduplicated.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProblemGraph {
    pub name: String,
    pub positions: Vec<Position>,
    pub edges: Vec<(usize, usize)>,
    pub spacing_a: f64,
}

impl ProblemGraph {
    /// Builds and checks a graph: no self loops, endpoints in range, finite
    /// coordinates and no coincident atoms.
    pub fn new(
        name: impl Into<String>,
        positions: Vec<Position>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        spacing_a: f64,
    ) -> Result<Self> {
        let n = positions.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidGraph(format!("vertex {i} has non-finite coordinates")));
        }
        for u in 0..n {
            for v in u + 1..n {
                if positions[u].distance(&positions[v]) <= 0.0 {
                    return Err(Error::InvalidGraph(format!("vertices {u} and {v} coincide")));
                }
            }
        }
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidVertex { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self loop on vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        if !(spacing_a.is_finite() && spacing_a > 0.0) {
            return Err(Error::InvalidGraph(format!("lattice spacing {spacing_a} not positive")));
        }
        Ok(Self { name: name.into(), positions, edges: norm, spacing_a })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Euclidean distance between two distinct vertices.
    pub fn pair_distance(&self, u: usize, v: usize) -> Result<f64> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(Error::InvalidVertex { vertex: w, n });
            }
        }
        if u == v {
            return Err(Error::SameVertex(u));
        }
        Ok(self.positions[u].distance(&self.positions[v]))
    }

    /// Full distance matrix; the diagonal is zero.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut d = vec![vec![0.0; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let r = self.positions[u].distance(&self.positions[v]);
                d[u][v] = r;
                d[v][u] = r;
            }
        }
        d
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.n();
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in &self.edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Distinct edge lengths in ascending order, merged within
    /// [`DISTANCE_TOL`].
    pub fn edge_shells(&self) -> Vec<f64> {
        let mut lens: Vec<f64> = self
            .edges
            .iter()
            .map(|&(u, v)| self.positions[u].distance(&self.positions[v]))
            .collect();
        lens.sort_by(f64::total_cmp);
        let mut shells: Vec<f64> = Vec::new();
        for l in lens {
            match shells.last() {
                Some(&s) if (l - s).abs() <= DISTANCE_TOL => {}
                _ => shells.push(l),
            }
        }
        shells
    }
}

/// All unordered pairs with distance at most `radius`.
pub fn unit_disk_edges(positions: &[Position], radius: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..positions.len() {
        for v in u + 1..positions.len() {
            if positions[u].distance(&positions[v]) <= radius {
                out.push((u, v));
            }
        }
    }
    out
}

/// Descriptive names of the built-in graphs, indexed by label.
pub const BUILTIN_GRAPHS: [(char, &str); 10] = [
    ('A', "triangle"),
    ('B', "square"),
    ('C', "diamond"),
    ('D', "3-fan"),
    ('E', "triangular lattice"),
    ('F', "ladder"),
    ('G', "triangle K4"),
    ('H', "square K4"),
    ('I', "tetrahedron"),
    ('J', "pentagon"),
];

/// Lattice spacing (μm) of a built-in graph for the given annealer.
pub fn builtin_spacing(name: char, optimizer: Optimizer) -> Result<f64> {
    let idx = graph_index(name)?;
    const TWO: [Option<f64>; 10] =
        [Some(5.26), Some(5.26), Some(4.99), Some(5.26), Some(4.91), Some(5.26), None, None, None, None];
    const THREE: [f64; 10] = [6.33, 6.41, 6.75, 6.75, 6.75, 6.75, 3.37, 4.45, 5.61, 4.10];
    match optimizer {
        Optimizer::TwoRydberg => TWO[idx].ok_or(Error::MissingEmbedding {
            graph: name.to_ascii_uppercase(),
            optimizer: optimizer.label(),
        }),
        Optimizer::ThreeRydberg => Ok(THREE[idx]),
    }
}

fn graph_index(name: char) -> Result<usize> {
    let c = name.to_ascii_uppercase();
    if ('A'..='J').contains(&c) {
        Ok(c as usize - 'A' as usize)
    } else {
        Err(Error::UnknownGraph(name.to_string()))
    }
}

/// Parses a graph label such as `"E"` or `"e"`.
pub fn parse_graph_name(s: &str) -> Result<char> {
    let mut chars = s.trim().chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => graph_index(c).map(|_| c.to_ascii_uppercase()),
        _ => Err(Error::UnknownGraph(s.to_string())),
    }
}

/// Built-in benchmark graph at its tabulated spacing.
pub fn builtin_graph(name: char, optimizer: Optimizer) -> Result<ProblemGraph> {
    let a = builtin_spacing(name, optimizer)?;
    builtin_graph_at(name, a)
}

/// Built-in benchmark graph topology instantiated at an arbitrary spacing.
pub fn builtin_graph_at(name: char, a: f64) -> Result<ProblemGraph> {
    let idx = graph_index(name)?;
    let c = name.to_ascii_uppercase();
    let h = a * libm::sqrt(3.0) / 2.0;
    let p = Position::new;
    let (positions, edges): (Vec<Position>, Vec<(usize, usize)>) = match c {
        'A' => (vec![p(0.0, 0.0, 0.0), p(a / 2.0, h, 0.0), p(a, 0.0, 0.0)], vec![(0, 1), (1, 2), (0, 2)]),
        'B' => (
            vec![p(0.0, 0.0, 0.0), p(0.0, a, 0.0), p(a, a, 0.0), p(a, 0.0, 0.0)],
            vec![(0, 1), (1, 2), (2, 3), (0, 3)],
        ),
        'C' => (
            vec![p(0.0, 0.0, 0.0), p(a / 2.0, h, 0.0), p(a, 0.0, 0.0), p(a / 2.0, -h, 0.0)],
            vec![(0, 1), (0, 2), (1, 2), (0, 3), (2, 3)],
        ),
        'D' => (
            vec![p(0.0, 0.0, 0.0), p(a / 2.0, h, 0.0), p(a, 0.0, 0.0), p(1.5 * a, h, 0.0), p(2.0 * a, 0.0, 0.0)],
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)],
        ),
        'E' => (
            vec![
                p(-a, 0.0, 0.0),
                p(-a / 2.0, h, 0.0),
                p(0.0, 0.0, 0.0),
                p(a / 2.0, h, 0.0),
                p(a, 0.0, 0.0),
                p(0.0, 2.0 * h, 0.0),
            ],
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (1, 5), (3, 5)],
        ),
        'F' => (
            vec![
                p(-a, 0.0, 0.0),
                p(-a / 2.0, h, 0.0),
                p(0.0, 0.0, 0.0),
                p(a / 2.0, h, 0.0),
                p(a, 0.0, 0.0),
                p(1.5 * a, h, 0.0),
            ],
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)],
        ),
        'G' => (
            vec![p(0.0, a, 0.0), p(h, -a / 2.0, 0.0), p(-h, -a / 2.0, 0.0), p(0.0, 0.0, 0.0)],
            complete(4),
        ),
        'H' => (
            vec![p(0.0, 0.0, 0.0), p(0.0, a, 0.0), p(a, a, 0.0), p(a, 0.0, 0.0)],
            complete(4),
        ),
        'I' => {
            // Cube-corner coordinates scaled so that every edge has length a.
            let b = a / libm::sqrt(2.0);
            (vec![p(0.0, 0.0, 0.0), p(-b, 0.0, b), p(0.0, b, b), p(-b, b, 0.0)], complete(4))
        }
        'J' => {
            let theta = 72.0_f64.to_radians();
            let mut pos = vec![p(0.0, 0.0, 0.0)];
            for m in 1..=5 {
                let ang = m as f64 * theta;
                pos.push(p(a * libm::sin(ang), a * libm::cos(ang), 0.0));
            }
            let mut e: Vec<(usize, usize)> = (1..=5).map(|i| (0, i)).collect();
            e.extend((1..=5).map(|i| (i, i % 5 + 1)));
            (pos, e)
        }
        _ => unreachable!(),
    };
    ProblemGraph::new(format!("{} ({})", c, BUILTIN_GRAPHS[idx].1), positions, edges, a)
}

fn complete(n: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            e.push((u, v));
        }
    }
    e
}

/// Vertex permutations preserving both the edge set and every pairwise
/// distance. `permutations[0]` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AutomorphismGroup {
    pub permutations: Vec<Vec<usize>>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.permutations.len()
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.permutations.iter().any(|p| p.as_slice() == perm)
    }

    /// True when the product of every pair of members is again a member.
    pub fn is_closed(&self) -> bool {
        self.permutations.iter().all(|p| {
            self.permutations.iter().all(|q| {
                let pq: Vec<usize> = q.iter().map(|&i| p[i]).collect();
                self.contains(&pq)
            })
        })
    }
}

/// Largest graph accepted by [`automorphisms`].
pub const AUTOMORPHISM_LIMIT: usize = 10;

/// Enumerates geometric graph automorphisms by backtracking.
pub fn automorphisms(g: &ProblemGraph) -> Result<AutomorphismGroup> {
    let n = g.n();
    if n > AUTOMORPHISM_LIMIT {
        return Err(Error::TooManyVertices { n, limit: AUTOMORPHISM_LIMIT });
    }
    let dist = g.distance_matrix();
    let adj = g.adjacency();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &mut perm, &mut used, &dist, &adj, &mut out);
    out.sort();
    Ok(AutomorphismGroup { permutations: out })
}

fn extend(
    v: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    dist: &[Vec<f64>],
    adj: &[Vec<bool>],
    out: &mut Vec<Vec<usize>>,
) {
    let n = perm.len();
    if v == n {
        out.push(perm.clone());
        return;
    }
    for img in 0..n {
        if used[img] {
            continue;
        }
        let ok = (0..v).all(|u| {
            adj[u][v] == adj[perm[u]][img] && (dist[u][v] - dist[perm[u]][img]).abs() <= DISTANCE_TOL
        });
        if ok {
            perm[v] = img;
            used[img] = true;
            extend(v + 1, perm, used, dist, adj, out);
            used[img] = false;
            perm[v] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn triangle_three_rydberg_coordinates() {
        let g = builtin_graph('A', Optimizer::ThreeRydberg).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges.len(), 3);
        assert_relative_eq!(g.positions[1].y, 6.33 * 3f64.sqrt() / 2.0);
        assert_relative_eq!(g.positions[2].x, 6.33);
    }

    #[test]
    fn missing_two_rydberg_entries() {
        for c in ['G', 'H', 'I', 'J'] {
            assert!(matches!(
                builtin_graph(c, Optimizer::TwoRydberg),
                Err(Error::MissingEmbedding { .. })
            ));
        }
        assert!(matches!(builtin_graph('K', Optimizer::ThreeRydberg), Err(Error::UnknownGraph(_))));
    }

    #[test]
    fn pair_distances() {
        let b = builtin_graph('B', Optimizer::TwoRydberg).unwrap();
        assert_relative_eq!(b.pair_distance(0, 2).unwrap(), 5.26 * 2f64.sqrt(), epsilon = 1e-12);
        let j = builtin_graph('J', Optimizer::ThreeRydberg).unwrap();
        let ring = j.pair_distance(1, 2).unwrap();
        assert_relative_eq!(ring, 2.0 * 4.10 * 36f64.to_radians().sin(), epsilon = 1e-12);
        assert!((ring - 4.82).abs() < 5e-3);
        assert_eq!(b.pair_distance(1, 1), Err(Error::SameVertex(1)));
        assert!(matches!(b.pair_distance(0, 9), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn unit_disk_square_k4() {
        let h = builtin_graph('H', Optimizer::ThreeRydberg).unwrap();
        assert_eq!(unit_disk_edges(&h.positions, 1.1 * h.spacing_a).len(), 4);
        assert_eq!(unit_disk_edges(&h.positions, 1.5 * h.spacing_a).len(), 6);
        let a = builtin_graph('A', Optimizer::TwoRydberg).unwrap();
        assert_eq!(unit_disk_edges(&a.positions, 1.1 * a.spacing_a), a.edges);
    }

    #[test]
    fn rejects_bad_graphs() {
        let p = Position::new(0.0, 0.0, 0.0);
        assert!(ProblemGraph::new("x", vec![p, p], [], 1.0).is_err());
        let q = Position::new(1.0, 0.0, 0.0);
        assert!(ProblemGraph::new("x", vec![p, q], [(0, 0)], 1.0).is_err());
        assert!(ProblemGraph::new("x", vec![p, q], [(0, 2)], 1.0).is_err());
    }

    #[test]
    fn group_orders() {
        let expect = [6, 8, 4, 2, 6, 2, 6, 8, 24, 10];
        for (i, &(c, _)) in BUILTIN_GRAPHS.iter().enumerate() {
            let g = builtin_graph(c, Optimizer::ThreeRydberg).unwrap();
            let grp = automorphisms(&g).unwrap();
            assert_eq!(grp.order(), expect[i], "graph {c}");
            assert!(grp.is_closed());
            assert_eq!(grp.permutations[0], (0..g.n()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn shells() {
        let j = builtin_graph('J', Optimizer::ThreeRydberg).unwrap();
        let s = j.edge_shells();
        assert_eq!(s.len(), 2);
        assert_relative_eq!(s[0], 4.10, epsilon = 1e-12);
        assert_eq!(builtin_graph('E', Optimizer::TwoRydberg).unwrap().edge_shells().len(), 1);
    }
}
