//! Final states read as colorings: decomposition, validity, degeneracy
//! classes and independent-set structure.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::graph::{automorphisms, ProblemGraph};
use crate::hamiltonian::DiagonalModel;
use crate::interactions::LevelScheme;
use crate::state::StateVector;

/// Default probability floor for [`decompose`].
pub const DEFAULT_THRESHOLD: f64 = 1e-3;

/// True iff adjacent vertices carry different labels. Ground (0) is a label.
pub fn is_valid_coloring(c: &[usize], g: &ProblemGraph) -> bool {
    c.len() == g.n() && g.edges.iter().all(|&(u, v)| c[u] != c[v])
}

/// Number of distinct labels used.
pub fn colors_used(c: &[usize]) -> usize {
    let mut seen: Vec<usize> = c.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Basis states with probability at least `threshold`, most likely first.
/// Ties keep ascending index order.
pub fn decompose(state: &StateVector, threshold: f64) -> Result<Vec<(usize, f64)>> {
    if !(0.0..1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let mut out: Vec<(usize, f64)> = state
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm_sqr()))
        .filter(|&(_, p)| p >= threshold && p > 0.0)
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DegeneracyClass {
    pub representative: Vec<usize>,
    /// Sorted basis indices.
    pub members: Vec<usize>,
    /// Diagonal energy at the final detunings, MHz.
    pub energy: f64,
    pub valid: bool,
    /// Index of the symmetry orbit this class was split from.
    pub orbit: usize,
    pub symmetry: String,
}

fn label_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    heap_permute(d, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

/// Partitions every basis state into classes.
///
/// States are first grouped into orbits under graph automorphisms combined
/// with permutations of the `k + 1` labels; each orbit is then split into
/// groups whose diagonal energies at `delta_final` agree within `tol`.
/// Classes are ordered by energy.
pub fn classify_states(
    g: &ProblemGraph,
    levels: &LevelScheme,
    delta_final: &[f64],
    tol: f64,
) -> Result<Vec<DegeneracyClass>> {
    if delta_final.len() != levels.k {
        return Err(Error::DimensionMismatch("delta length differs from k".into()));
    }
    let model = DiagonalModel::new(g, levels, None)?;
    let basis = model.basis;
    let group = automorphisms(g)?;
    let labels = label_permutations(basis.d);
    let symmetry = format!("Aut(G) order {} x label permutations S{}", group.order(), basis.d);
    let dim = basis.dim();
    let mut orbit_of = vec![usize::MAX; dim];
    let mut classes = Vec::new();
    let mut n_orbits = 0;
    for start in 0..dim {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let digits = basis.decode_unchecked(start);
        let mut members = Vec::new();
        let mut img = vec![0usize; basis.n];
        for perm in &group.permutations {
            for sigma in &labels {
                for v in 0..basis.n {
                    img[perm[v]] = sigma[digits[v]];
                }
                let idx = encode(basis, &img);
                if orbit_of[idx] == usize::MAX {
                    orbit_of[idx] = n_orbits;
                    members.push(idx);
                }
            }
        }
        let valid = is_valid_coloring(&digits, g);
        let mut by_energy: Vec<(f64, usize)> =
            members.iter().map(|&i| (model.energy(i, delta_final), i)).collect();
        by_energy.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut group_start = 0;
        for i in 1..=by_energy.len() {
            if i == by_energy.len() || by_energy[i].0 - by_energy[group_start].0 > tol {
                let mut mem: Vec<usize> = by_energy[group_start..i].iter().map(|x| x.1).collect();
                mem.sort_unstable();
                classes.push(DegeneracyClass {
                    representative: basis.decode_unchecked(mem[0]),
                    energy: by_energy[group_start].0,
                    members: mem,
                    valid,
                    orbit: n_orbits,
                    symmetry: symmetry.clone(),
                });
                group_start = i;
            }
        }
        n_orbits += 1;
    }
    classes.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.members[0].cmp(&b.members[0])));
    Ok(classes)
}

fn encode(b: Basis, digits: &[usize]) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * b.d + d)
}

/// Classes of valid colorings only, ordered by energy.
pub fn degeneracy_classes(
    g: &ProblemGraph,
    levels: &LevelScheme,
    delta_final: &[f64],
    tol: f64,
) -> Result<Vec<DegeneracyClass>> {
    Ok(classify_states(g, levels, delta_final, tol)?.into_iter().filter(|c| c.valid).collect())
}

/// Map from basis index to class position; `usize::MAX` when unclassified.
pub fn class_lookup(classes: &[DegeneracyClass], dim: usize) -> Vec<usize> {
    let mut out = vec![usize::MAX; dim];
    for (ci, c) in classes.iter().enumerate() {
        for &m in &c.members {
            out[m] = ci;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassFidelities {
    pub per_class: Vec<f64>,
    /// Sum over classes flagged valid.
    pub valid_total: f64,
    /// Sum over classes flagged invalid.
    pub invalid_total: f64,
    /// Norm not covered by any class.
    pub uncovered: f64,
}

pub fn fidelity_by_class(state: &StateVector, classes: &[DegeneracyClass]) -> ClassFidelities {
    let per_class: Vec<f64> = classes.iter().map(|c| state.weight(&c.members)).collect();
    let valid_total = classes.iter().zip(&per_class).filter(|(c, _)| c.valid).map(|(_, p)| p).sum();
    let invalid_total = classes.iter().zip(&per_class).filter(|(c, _)| !c.valid).map(|(_, p)| p).sum();
    let covered: f64 = per_class.iter().sum();
    ClassFidelities { per_class, valid_total, invalid_total, uncovered: (state.norm_sqr() - covered).max(0.0) }
}

/// Total probability on valid colorings.
pub fn valid_fidelity(state: &StateVector, g: &ProblemGraph) -> f64 {
    let b = state.basis;
    (0..b.dim())
        .filter(|&i| is_valid_coloring(&b.decode_unchecked(i), g))
        .map(|i| state.amps[i].norm_sqr())
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColorClassInfo {
    pub label: usize,
    pub members: Vec<usize>,
    pub independent: bool,
    pub maximal: bool,
    pub maximum: bool,
}

/// Largest graph for subset enumeration.
pub const MIS_LIMIT: usize = 20;

/// All maximum independent sets (vertex lists, lexicographic order).
pub fn maximum_independent_sets(g: &ProblemGraph) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    if n > MIS_LIMIT {
        return Err(Error::TooManyVertices { n, limit: MIS_LIMIT });
    }
    let adj = g.adjacency();
    let mut best = 0;
    let mut sets: Vec<u32> = Vec::new();
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < best || !independent_mask(mask, n, &adj) {
            continue;
        }
        if size > best {
            best = size;
            sets.clear();
        }
        sets.push(mask);
    }
    let mut out: Vec<Vec<usize>> = sets.into_iter().map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect()).collect();
    out.sort();
    Ok(out)
}

fn independent_mask(mask: u32, n: usize, adj: &[Vec<bool>]) -> bool {
    (0..n).all(|u| mask >> u & 1 == 0 || (u + 1..n).all(|v| mask >> v & 1 == 0 || !adj[u][v]))
}

/// Independence, maximality and maximum-size checks for each color class of
/// a valid coloring. Only labels that occur are reported.
pub fn mis_analysis(c: &[usize], g: &ProblemGraph) -> Result<Vec<ColorClassInfo>> {
    if c.len() != g.n() {
        return Err(Error::DimensionMismatch("coloring length differs from vertex count".into()));
    }
    let mis = maximum_independent_sets(g)?[0].len();
    let adj = g.adjacency();
    let mut labels: Vec<usize> = c.to_vec();
    labels.sort_unstable();
    labels.dedup();
    Ok(labels
        .into_iter()
        .map(|l| {
            let members: Vec<usize> = (0..c.len()).filter(|&v| c[v] == l).collect();
            let independent = members.iter().all(|&u| members.iter().all(|&v| !adj[u][v]));
            let maximal = independent
                && (0..c.len()).filter(|v| !members.contains(v)).all(|w| members.iter().any(|&u| adj[u][w]));
            ColorClassInfo { label: l, maximum: independent && members.len() == mis, members, independent, maximal }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, Optimizer, Position};
    use num_complex::Complex64;

    #[test]
    fn validity() {
        let a = builtin_graph('A', Optimizer::TwoRydberg).unwrap();
        assert!(is_valid_coloring(&[1, 2, 3], &a));
        assert!(!is_valid_coloring(&[1, 1, 1], &a));
        let f = builtin_graph('F', Optimizer::TwoRydberg).unwrap();
        // vertices 4 and 5 adjacent and both ground
        assert!(!is_valid_coloring(&[1, 2, 0, 1, 0, 0], &f));
    }

    #[test]
    fn decompose_uniform() {
        let b = Basis::new(3, 1).unwrap();
        let amp = Complex64::new(1.0 / 6f64.sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        for a in amps.iter_mut().take(6) {
            *a = amp;
        }
        let s = StateVector::from_amplitudes(b, amps).unwrap();
        let d = decompose(&s, 0.1).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|x| (x.1 - 1.0 / 6.0).abs() < 1e-12));
        assert_eq!(decompose(&StateVector::basis_state(b, 3), 0.0).unwrap(), [(3, 1.0)]);
        assert!(decompose(&s, 1.0).is_err());
    }

    #[test]
    fn triangle_lowest_class() {
        let a = builtin_graph('A', Optimizer::ThreeRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(3).unwrap();
        let cls = degeneracy_classes(&a, &l, &[5.0, 10.0, 15.0], 1e-3).unwrap();
        assert_eq!(cls[0].members.len(), 6);
        let all = classify_states(&a, &l, &[5.0, 10.0, 15.0], 1e-3).unwrap();
        assert_eq!(all.iter().map(|c| c.members.len()).sum::<usize>(), 64);
    }

    #[test]
    fn mis_flags() {
        let e = builtin_graph('E', Optimizer::TwoRydberg).unwrap();
        assert_eq!(maximum_independent_sets(&e).unwrap(), vec![vec![0, 4, 5]]);
        let info = mis_analysis(&[1, 2, 0, 1, 2, 0], &e).unwrap();
        assert!(info.iter().all(|i| i.independent && i.maximal && !i.maximum));
        let b = builtin_graph('B', Optimizer::TwoRydberg).unwrap();
        assert!(mis_analysis(&[1, 2, 1, 2], &b).unwrap().iter().all(|i| i.maximum));
        let one = ProblemGraph::new("v", vec![Position::new(0.0, 0.0, 0.0)], [], 1.0).unwrap();
        let info = mis_analysis(&[0], &one).unwrap();
        assert!(info[0].maximal && info[0].maximum);
    }

    #[test]
    fn heap_generates_all() {
        let p = label_permutations(4);
        assert_eq!(p.len(), 24);
        let mut q = p.clone();
        q.sort();
        q.dedup();
        assert_eq!(q.len(), 24);
    }
}
