//! Qudit Rydberg Hamiltonian in the product basis.
//!
//! H = Σ_v D^(v) + diag(E), with the single-atom drive
//! D = Σ_i Ω_i/2 (|g⟩⟨r_i| + h.c.) and
//! E(x) = −Σ_v Δ_{x_v} + Σ_{u<v} C6^(x_u x_v) / r_uv⁶ over excited pairs.
//! All values are /2π MHz.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{Basis, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::graph::ProblemGraph;
use crate::interactions::{shift, LevelScheme};
use crate::state::StateVector;

/// Shift (MHz) for every vertex pair and level pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    n: usize,
    k: usize,
    shifts: Vec<f64>,
}

impl PairTable {
    /// Pairs farther apart than `cutoff` (μm) are dropped when one is given.
    pub fn new(g: &ProblemGraph, levels: &LevelScheme, cutoff: Option<f64>) -> Self {
        let (n, k) = (g.n(), levels.k);
        let mut shifts = vec![0.0; n * n * k * k];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let r = g.positions[u].distance(&g.positions[v]);
                if cutoff.is_some_and(|c| r > c) {
                    continue;
                }
                for i in 1..=k {
                    for j in 1..=k {
                        shifts[((u * n + v) * k + i - 1) * k + j - 1] = shift(levels.c6(i, j), r);
                    }
                }
            }
        }
        Self { n, k, shifts }
    }

    /// Shift between vertex `u` in level `i` and `v` in level `j` (1-based).
    #[inline]
    pub fn get(&self, u: usize, v: usize, i: usize, j: usize) -> f64 {
        self.shifts[((u * self.n + v) * self.k + i - 1) * self.k + j - 1]
    }

    /// Interaction part of the energy of a digit string.
    pub fn interaction(&self, digits: &[usize]) -> f64 {
        let mut e = 0.0;
        for u in 0..self.n {
            if digits[u] == 0 {
                continue;
            }
            for v in u + 1..self.n {
                if digits[v] != 0 {
                    e += self.get(u, v, digits[u], digits[v]);
                }
            }
        }
        e
    }
}

/// Diagonal energies split into the Δ-independent interaction part and
/// per-level excitation counts, so that E(Δ) = base − Σ_i n_i Δ_i can be
/// rebuilt cheaply at every time step.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalModel {
    pub basis: Basis,
    pub base: Vec<f64>,
    counts: Vec<u8>,
}

impl DiagonalModel {
    pub fn new(g: &ProblemGraph, levels: &LevelScheme, cutoff: Option<f64>) -> Result<Self> {
        levels.check()?;
        let basis = Basis::new(g.n(), levels.k)?;
        let table = PairTable::new(g, levels, cutoff);
        let (dim, k) = (basis.dim(), levels.k);
        let mut base = Vec::with_capacity(dim);
        let mut counts = vec![0u8; dim * k];
        let mut digits = vec![0usize; basis.n];
        for idx in 0..dim {
            base.push(table.interaction(&digits));
            for &dg in &digits {
                if dg > 0 {
                    counts[idx * k + dg - 1] += 1;
                }
            }
            // increment the mixed-radix counter
            for d in digits.iter_mut() {
                *d += 1;
                if *d < basis.d {
                    break;
                }
                *d = 0;
            }
        }
        Ok(Self { basis, base, counts })
    }

    pub fn k(&self) -> usize {
        self.basis.k()
    }

    /// Number of atoms in Rydberg level `i` (1-based) in state `idx`.
    #[inline]
    pub fn count(&self, idx: usize, i: usize) -> u8 {
        self.counts[idx * self.k() + i - 1]
    }

    #[inline]
    pub fn energy(&self, idx: usize, delta: &[f64]) -> f64 {
        let k = self.k();
        let c = &self.counts[idx * k..idx * k + k];
        self.base[idx] - c.iter().zip(delta).map(|(&n, &d)| n as f64 * d).sum::<f64>()
    }

    pub fn energies_into(&self, delta: &[f64], out: &mut [f64]) {
        for (idx, o) in out.iter_mut().enumerate() {
            *o = self.energy(idx, delta);
        }
    }

    pub fn energies(&self, delta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.basis.dim()];
        self.energies_into(delta, &mut out);
        out
    }

    /// Largest diagonal energy change caused by exciting one atom from the
    /// ground state to any level, with detunings bounded by `delta_max`.
    /// This is the fastest phase the drive has to resolve.
    pub fn max_single_excitation_gap(&self, delta_max: &[f64]) -> f64 {
        let b = self.basis;
        let mut best = 0.0_f64;
        for idx in 0..b.dim() {
            for v in 0..b.n {
                if b.digit(idx, v) != 0 {
                    continue;
                }
                for i in 1..b.d {
                    let j = idx + i * b.stride(v);
                    let gap = (self.base[j] - self.base[idx]).abs() + delta_max[i - 1].abs();
                    best = best.max(gap);
                }
            }
        }
        best
    }
}

/// Diagonal energy of one basis state.
pub fn diagonal_energy(state: usize, g: &ProblemGraph, levels: &LevelScheme, delta: &[f64]) -> Result<f64> {
    if delta.len() != levels.k {
        return Err(Error::DimensionMismatch("delta length differs from k".into()));
    }
    let basis = Basis::new(g.n(), levels.k)?;
    let digits = basis.decode(state)?;
    let table = PairTable::new(g, levels, None);
    let det: f64 = digits.iter().filter(|&&d| d > 0).map(|&d| delta[d - 1]).sum();
    Ok(table.interaction(&digits) - det)
}

/// Diagonal of H over the whole basis, all pairs included.
pub fn build_diagonal(g: &ProblemGraph, levels: &LevelScheme, delta: &[f64]) -> Result<Vec<f64>> {
    if delta.len() != levels.k {
        return Err(Error::DimensionMismatch("delta length differs from k".into()));
    }
    Ok(DiagonalModel::new(g, levels, None)?.energies(delta))
}

/// Single-atom drive D with D[0][i] = D[i][0] = Ω_i/2.
///
/// D has one bright mode b = Σ Ω_i |r_i⟩ / |Ω| coupled to |g⟩ with strength
/// |Ω|/2; every other direction is dark. The propagator therefore has a
/// closed form and no numerical eigensolve is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveGenerator {
    pub omega: Vec<f64>,
    norm: f64,
}

impl DriveGenerator {
    pub fn new(omega: &[f64]) -> Self {
        let norm = libm::sqrt(omega.iter().map(|o| o * o).sum());
        Self { omega: omega.to_vec(), norm }
    }

    /// Local dimension k + 1.
    pub fn d(&self) -> usize {
        self.omega.len() + 1
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.d();
        let mut m = DMatrix::zeros(d, d);
        for (i, &o) in self.omega.iter().enumerate() {
            m[(0, i + 1)] = o / 2.0;
            m[(i + 1, 0)] = o / 2.0;
        }
        m
    }

    /// Eigenvalues in ascending order: −|Ω|/2, 0 (k−1 times), +|Ω|/2.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev = vec![0.0; self.d()];
        ev[0] = -self.norm / 2.0;
        ev[self.d() - 1] = self.norm / 2.0;
        ev
    }

    /// exp(−i 2π D dt) as a row-major (k+1)×(k+1) matrix.
    pub fn propagator(&self, dt: f64) -> Vec<Complex64> {
        let d = self.d();
        let mut u = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            u[i * d + i] = Complex64::new(1.0, 0.0);
        }
        if self.norm == 0.0 {
            return u;
        }
        let theta = core::f64::consts::PI * self.norm * dt;
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        let mut b = vec![0.0; d];
        for (i, &o) in self.omega.iter().enumerate() {
            b[i + 1] = o / self.norm;
        }
        for r in 0..d {
            for col in 0..d {
                let proj = e[r] * e[col] + b[r] * b[col];
                let x = e[r] * b[col] + b[r] * e[col];
                u[r * d + col] += Complex64::new((c - 1.0) * proj, -s * x);
            }
        }
        u
    }
}

/// Precomputed exp(−i 2π D dt) in bright-mode form, applied to every atom
/// in O(k) per amplitude block.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveStep {
    cos: f64,
    sin: f64,
    bright: Vec<f64>,
}

impl DriveStep {
    pub fn new(gen: &DriveGenerator, dt: f64) -> Self {
        if gen.norm == 0.0 {
            return Self { cos: 1.0, sin: 0.0, bright: vec![0.0; gen.omega.len()] };
        }
        let theta = core::f64::consts::PI * gen.norm * dt;
        Self {
            cos: libm::cos(theta),
            sin: libm::sin(theta),
            bright: gen.omega.iter().map(|o| o / gen.norm).collect(),
        }
    }

    pub fn apply_all(&self, amps: &mut [Complex64], basis: Basis) {
        if self.sin == 0.0 && self.cos == 1.0 {
            return;
        }
        let d = basis.d;
        let mis = Complex64::new(0.0, -self.sin);
        for v in 0..basis.n {
            let s = basis.stride(v);
            let block = s * d;
            for start in (0..amps.len()).step_by(block) {
                for base in start..start + s {
                    let g = amps[base];
                    let mut beta = Complex64::new(0.0, 0.0);
                    for (i, &b) in self.bright.iter().enumerate() {
                        beta += amps[base + (i + 1) * s] * b;
                    }
                    amps[base] = g * self.cos + mis * beta;
                    let kick = beta * (self.cos - 1.0) + mis * g;
                    for (i, &b) in self.bright.iter().enumerate() {
                        amps[base + (i + 1) * s] += kick * b;
                    }
                }
            }
        }
    }
}

/// Applies the same single-atom operator `u` (row-major d×d) to every atom.
pub fn apply_local_all(amps: &mut [Complex64], basis: Basis, u: &[Complex64]) {
    let d = basis.d;
    let mut buf = vec![Complex64::new(0.0, 0.0); d];
    for v in 0..basis.n {
        let s = basis.stride(v);
        let block = s * d;
        for start in (0..amps.len()).step_by(block) {
            for off in 0..s {
                let base = start + off;
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = amps[base + j * s];
                }
                for r in 0..d {
                    let row = &u[r * d..r * d + d];
                    amps[base + r * s] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
                }
            }
        }
    }
}

/// exp(−i 2π Σ_v D^(v) dt) applied in place.
pub fn apply_drive_step(state: &mut StateVector, omega: &[f64], dt: f64) -> Result<()> {
    if omega.len() + 1 != state.basis.d {
        return Err(Error::DimensionMismatch("omega length differs from k".into()));
    }
    DriveStep::new(&DriveGenerator::new(omega), dt).apply_all(&mut state.amps, state.basis);
    Ok(())
}

/// out = H ψ for diagonal `energies` and drive `omega`.
pub fn apply_hamiltonian(
    basis: Basis,
    energies: &[f64],
    omega: &[f64],
    psi: &[Complex64],
    out: &mut [Complex64],
) {
    for ((o, &e), &p) in out.iter_mut().zip(energies).zip(psi) {
        *o = p * e;
    }
    let d = basis.d;
    for v in 0..basis.n {
        let s = basis.stride(v);
        for idx in 0..psi.len() {
            if (idx / s) % d != 0 {
                continue;
            }
            for (i, &om) in omega.iter().enumerate() {
                let j = idx + (i + 1) * s;
                let h = om / 2.0;
                out[idx] += psi[j] * h;
                out[j] += psi[idx] * h;
            }
        }
    }
}

/// ⟨ψ|H|ψ⟩ in MHz.
pub fn energy_expectation(basis: Basis, energies: &[f64], omega: &[f64], psi: &[Complex64]) -> f64 {
    let mut hpsi = vec![Complex64::new(0.0, 0.0); psi.len()];
    apply_hamiltonian(basis, energies, omega, psi, &mut hpsi);
    psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Dense real symmetric H for a given set of energies and drive.
pub fn dense_from_parts(basis: Basis, energies: &[f64], omega: &[f64]) -> Result<DMatrix<f64>> {
    let dim = basis.dim();
    if dim > DENSE_LIMIT {
        return Err(Error::DimensionTooLarge { dim, limit: DENSE_LIMIT });
    }
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(energies));
    for v in 0..basis.n {
        let s = basis.stride(v);
        for idx in 0..dim {
            if basis.digit(idx, v) != 0 {
                continue;
            }
            for (i, &om) in omega.iter().enumerate() {
                let j = idx + (i + 1) * s;
                h[(idx, j)] += om / 2.0;
                h[(j, idx)] += om / 2.0;
            }
        }
    }
    Ok(h)
}

/// Full Hamiltonian matrix (MHz) for dimension up to [`DENSE_LIMIT`].
pub fn dense_hamiltonian(
    g: &ProblemGraph,
    levels: &LevelScheme,
    delta: &[f64],
    omega: &[f64],
) -> Result<DMatrix<f64>> {
    if omega.len() != levels.k || delta.len() != levels.k {
        return Err(Error::DimensionMismatch("delta/omega length differs from k".into()));
    }
    let basis = Basis::new(g.n(), levels.k)?;
    if basis.dim() > DENSE_LIMIT {
        return Err(Error::DimensionTooLarge { dim: basis.dim(), limit: DENSE_LIMIT });
    }
    let e = build_diagonal(g, levels, delta)?;
    dense_from_parts(basis, &e, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, Optimizer, Position};
    use approx::assert_relative_eq;

    fn single_atom() -> ProblemGraph {
        ProblemGraph::new("one", vec![Position::new(0.0, 0.0, 0.0)], [], 1.0).unwrap()
    }

    #[test]
    fn single_atom_detuning() {
        let l = LevelScheme::rb_65_70_75(3).unwrap();
        let e = diagonal_energy(1, &single_atom(), &l, &[5.0, 10.0, 15.0]).unwrap();
        assert_eq!(e, -5.0);
        assert_eq!(diagonal_energy(0, &single_atom(), &l, &[5.0, 10.0, 15.0]).unwrap(), 0.0);
    }

    #[test]
    fn triangle_minimum_is_permutations() {
        let g = builtin_graph('A', Optimizer::ThreeRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(3).unwrap();
        let e = build_diagonal(&g, &l, &[5.0, 10.0, 15.0]).unwrap();
        let min = e.iter().cloned().fold(f64::INFINITY, f64::min);
        let b = Basis::new(3, 3).unwrap();
        let mut argmin: Vec<Vec<usize>> =
            (0..e.len()).filter(|&i| e[i] - min < 1e-9).map(|i| b.decode(i).unwrap()).collect();
        assert_eq!(argmin.len(), 6);
        for a in argmin.iter_mut() {
            a.sort();
            assert_eq!(*a, [1, 2, 3]);
        }
    }

    #[test]
    fn drive_pi_pulse() {
        // 2π (Ω/2) dt = π/2  ->  dt = 1/(2Ω)
        let b = Basis::new(1, 1).unwrap();
        let mut s = StateVector::ground(b);
        apply_drive_step(&mut s, &[5.0], 0.1).unwrap();
        assert_relative_eq!(s.amps[1].norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn drive_propagator_matches_eigen() {
        let gen = DriveGenerator::new(&[1.0, 2.0, 5.0]);
        let m = gen.matrix();
        let eig = m.clone().symmetric_eigen();
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(gen.eigenvalues()) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
        let dt = 0.037;
        let u = gen.propagator(dt);
        let d = 4;
        for r in 0..d {
            for c in 0..d {
                let mut x = Complex64::new(0.0, 0.0);
                for q in 0..d {
                    let ph = Complex64::from_polar(1.0, -2.0 * core::f64::consts::PI * eig.eigenvalues[q] * dt);
                    x += ph * eig.eigenvectors[(r, q)] * eig.eigenvectors[(c, q)];
                }
                assert_relative_eq!(u[r * d + c].re, x.re, epsilon = 1e-12);
                assert_relative_eq!(u[r * d + c].im, x.im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bright_form_matches_matrix() {
        let b = Basis::new(3, 3).unwrap();
        let gen = DriveGenerator::new(&[1.0, 2.0, 5.0]);
        let psi: Vec<Complex64> = (0..64).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut x = psi.clone();
        let mut y = psi;
        apply_local_all(&mut x, b, &gen.propagator(0.041));
        DriveStep::new(&gen, 0.041).apply_all(&mut y, b);
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).norm() < 1e-13);
        }
    }

    #[test]
    fn dense_matches_matvec() {
        let g = builtin_graph('A', Optimizer::TwoRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let delta = [3.0, -2.0];
        let omega = [3.0, 7.0];
        let h = dense_hamiltonian(&g, &l, &delta, &omega).unwrap();
        assert_eq!(h, h.transpose());
        let b = Basis::new(3, 2).unwrap();
        let e = build_diagonal(&g, &l, &delta).unwrap();
        let psi: Vec<Complex64> = (0..27).map(|i| Complex64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); 27];
        apply_hamiltonian(b, &e, &omega, &psi, &mut out);
        for r in 0..27 {
            let x: Complex64 = (0..27).map(|c| psi[c] * h[(r, c)]).sum();
            assert_relative_eq!(x.re, out[r].re, epsilon = 1e-10);
            assert_relative_eq!(x.im, out[r].im, epsilon = 1e-10);
        }
    }

    #[test]
    fn cutoff_drops_tails() {
        let g = builtin_graph('B', Optimizer::TwoRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let full = PairTable::new(&g, &l, None);
        let cut = PairTable::new(&g, &l, Some(g.spacing_a * 1.1));
        assert!(full.get(0, 2, 1, 1) > 0.0);
        assert_eq!(cut.get(0, 2, 1, 1), 0.0);
        assert_eq!(cut.get(0, 1, 1, 1), full.get(0, 1, 1, 1));
    }
}
