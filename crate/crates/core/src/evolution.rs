//! Trotterized annealing, the exact-step oracle and instantaneous spectra.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::{Basis, DENSE_LIMIT};
use crate::chebyshev;
use crate::error::{Error, Result};
use crate::graph::ProblemGraph;
use crate::hamiltonian::{
    apply_hamiltonian, dense_from_parts, energy_expectation, DiagonalModel, DriveGenerator, DriveStep,
};
use crate::interactions::{DrivePlan, LevelScheme};
use crate::schedule::{parameters_at, StepRule};
use crate::state::StateVector;
use crate::DEGENERACY_TOL;

/// Default bound on diagonal phase cycles per split substep.
pub const DEFAULT_MAX_PHASE_CYCLES: f64 = 0.2;

/// Default number of trajectory intervals.
pub const DEFAULT_SAMPLES: usize = 100;

/// Largest dimension for which trajectories record the ground-manifold
/// overlap (one dense eigensolve per sample).
pub const DEFAULT_GROUND_TRACK_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOptions {
    /// Trajectory intervals; samples are taken at `samples + 1` step
    /// boundaries including both endpoints.
    pub samples: usize,
    pub rule: StepRule,
    /// Split each Trotter step into enough substeps that the fastest
    /// single-excitation diagonal phase advances by at most this many cycles
    /// per substep. `None` uses one split step per Trotter step.
    pub max_phase_cycles: Option<f64>,
    /// Fixed substep count; overrides `max_phase_cycles`.
    pub substeps: Option<usize>,
    /// Drop interactions beyond this distance (μm).
    pub cutoff: Option<f64>,
    pub ground_track_limit: usize,
    pub degeneracy_tol: f64,
    /// Basis index sets whose total weight is recorded per sample.
    pub tracked: Vec<Vec<usize>>,
}

impl Default for AnnealOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            rule: StepRule::Midpoint,
            max_phase_cycles: Some(DEFAULT_MAX_PHASE_CYCLES),
            substeps: None,
            cutoff: None,
            ground_track_limit: DEFAULT_GROUND_TRACK_LIMIT,
            degeneracy_tol: DEGENERACY_TOL,
            tracked: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectorySample {
    /// μs
    pub time: f64,
    pub norm: f64,
    /// ⟨H(t)⟩, MHz
    pub energy: f64,
    pub ground_overlap: Option<f64>,
    pub tracked: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

#[derive(Debug, Clone)]
pub struct AnnealOutcome {
    pub state: StateVector,
    pub trajectory: Trajectory,
    /// Split substeps used per Trotter step.
    pub substeps: usize,
}

/// Substeps per Trotter step needed to keep the diagonal phase of any
/// single-atom transition below `max_cycles` per substep.
pub fn substeps_for(model: &DiagonalModel, plan: &DrivePlan, max_cycles: f64) -> usize {
    let dt = plan.t_total / plan.trotter_steps as f64;
    let gap = model.max_single_excitation_gap(&plan.delta_max);
    let s = libm::ceil(gap * dt / max_cycles);
    if s.is_finite() && s >= 1.0 {
        s as usize
    } else {
        1
    }
}

fn sample_steps(p: usize, samples: usize) -> Vec<usize> {
    let s = samples.max(1);
    let mut out: Vec<usize> = (0..=s).map(|j| (j * p + s / 2) / s).collect();
    out.dedup();
    out
}

fn prepare(g: &ProblemGraph, levels: &LevelScheme, plan: &DrivePlan, cutoff: Option<f64>) -> Result<DiagonalModel> {
    plan.check_against(levels)?;
    DiagonalModel::new(g, levels, cutoff)
}

/// Anneals from the all-ground state with the split-step propagator.
///
/// Each of the `p` steps freezes Δ(t) and Ω(t) per `opts.rule` and applies
/// `s` Strang substeps of half diagonal phase, drive, half diagonal phase.
pub fn anneal(g: &ProblemGraph, levels: &LevelScheme, plan: &DrivePlan, opts: &AnnealOptions) -> Result<AnnealOutcome> {
    let model = prepare(g, levels, plan, opts.cutoff)?;
    let basis = model.basis;
    let dim = basis.dim();
    let p = plan.trotter_steps;
    let dt = plan.t_total / p as f64;
    let s = match opts.substeps {
        Some(s) => s.max(1),
        None => opts.max_phase_cycles.map_or(1, |c| substeps_for(&model, plan, c)),
    };
    let h = dt / s as f64;
    let mut state = StateVector::ground(basis);
    let mut energies = vec![0.0; dim];
    let mut half = vec![Complex64::new(0.0, 0.0); dim];
    let mut full = vec![Complex64::new(0.0, 0.0); dim];
    let checkpoints = sample_steps(p, opts.samples);
    let mut next = 0;
    let mut traj = Trajectory::default();
    for m in 0..=p {
        if next < checkpoints.len() && checkpoints[next] == m {
            traj.samples.push(sample(&model, plan, opts, &state, m as f64 * dt)?);
            next += 1;
        }
        if m == p {
            break;
        }
        let (delta, omega) = parameters_at(opts.rule.time(m, dt), plan)?;
        model.energies_into(&delta, &mut energies);
        for ((hp, fp), &e) in half.iter_mut().zip(full.iter_mut()).zip(&energies) {
            *hp = Complex64::from_polar(1.0, -PI * e * h);
            *fp = *hp * *hp;
        }
        let u = DriveStep::new(&DriveGenerator::new(&omega), h);
        mul_in_place(&mut state.amps, &half);
        for sub in 0..s {
            u.apply_all(&mut state.amps, basis);
            mul_in_place(&mut state.amps, if sub + 1 == s { &half } else { &full });
        }
    }
    Ok(AnnealOutcome { state, trajectory: traj, substeps: s })
}

fn mul_in_place(a: &mut [Complex64], b: &[Complex64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x *= y;
    }
}

fn sample(
    model: &DiagonalModel,
    plan: &DrivePlan,
    opts: &AnnealOptions,
    state: &StateVector,
    t: f64,
) -> Result<TrajectorySample> {
    let t = t.min(plan.t_total);
    let (delta, omega) = parameters_at(t, plan)?;
    let energies = model.energies(&delta);
    let energy = energy_expectation(model.basis, &energies, &omega, &state.amps);
    let ground_overlap = if model.basis.dim() <= opts.ground_track_limit.min(DENSE_LIMIT) {
        Some(manifold_overlap(model.basis, &energies, &omega, state, opts.degeneracy_tol)?)
    } else {
        None
    };
    Ok(TrajectorySample {
        time: t,
        norm: state.norm(),
        energy,
        ground_overlap,
        tracked: opts.tracked.iter().map(|set| state.weight(set)).collect(),
    })
}

fn eigen(basis: Basis, energies: &[f64], omega: &[f64]) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    Ok(dense_from_parts(basis, energies, omega)?.symmetric_eigen())
}

fn manifold_overlap(basis: Basis, energies: &[f64], omega: &[f64], state: &StateVector, tol: f64) -> Result<f64> {
    let eig = eigen(basis, energies, omega)?;
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for (q, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev - min <= tol {
            let col = eig.eigenvectors.column(q);
            let amp: Complex64 = col.iter().zip(&state.amps).map(|(&v, a)| a * v).sum();
            total += amp.norm_sqr();
        }
    }
    Ok(total)
}

/// Squared projection of `state` onto the degenerate instantaneous ground
/// eigenspace of H(t).
pub fn ground_manifold_overlap(
    state: &StateVector,
    g: &ProblemGraph,
    levels: &LevelScheme,
    plan: &DrivePlan,
    t: f64,
    tol: f64,
) -> Result<f64> {
    let model = prepare(g, levels, plan, None)?;
    if state.basis != model.basis {
        return Err(Error::DimensionMismatch("state basis differs from graph basis".into()));
    }
    let (delta, omega) = parameters_at(t, plan)?;
    manifold_overlap(model.basis, &model.energies(&delta), &omega, state, tol)
}

/// How the oracle exponentiates each frozen Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum OracleMethod {
    /// Dense eigensolve up to [`ORACLE_EIGEN_LIMIT`], Chebyshev above.
    #[default]
    Auto,
    Eigen,
    Chebyshev,
}

pub const ORACLE_EIGEN_LIMIT: usize = 256;

/// Anneals with the exact exponential of the full frozen Hamiltonian in
/// every Trotter step.
pub fn anneal_oracle(
    g: &ProblemGraph,
    levels: &LevelScheme,
    plan: &DrivePlan,
    rule: StepRule,
    method: OracleMethod,
) -> Result<StateVector> {
    let model = prepare(g, levels, plan, None)?;
    let basis = model.basis;
    let dim = basis.dim();
    if dim > DENSE_LIMIT {
        return Err(Error::DimensionTooLarge { dim, limit: DENSE_LIMIT });
    }
    let use_eigen = match method {
        OracleMethod::Eigen => true,
        OracleMethod::Chebyshev => false,
        OracleMethod::Auto => dim <= ORACLE_EIGEN_LIMIT,
    };
    let p = plan.trotter_steps;
    let dt = plan.t_total / p as f64;
    let tau = 2.0 * PI * dt;
    let mut state = StateVector::ground(basis);
    let mut energies = vec![0.0; dim];
    for m in 0..p {
        let (delta, omega) = parameters_at(rule.time(m, dt), plan)?;
        model.energies_into(&delta, &mut energies);
        if use_eigen {
            exact_step(&mut state.amps, &eigen(basis, &energies, &omega)?, tau);
        } else {
            let radius: f64 = basis.n as f64 * omega.iter().map(|o| o / 2.0).sum::<f64>();
            let emin = energies.iter().copied().fold(f64::INFINITY, f64::min) - radius;
            let emax = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max) + radius;
            chebyshev::propagate(&mut state.amps, tau, emin, emax, |x, y| {
                apply_hamiltonian(basis, &energies, &omega, x, y)
            });
        }
    }
    Ok(state)
}

fn exact_step(amps: &mut [Complex64], eig: &SymmetricEigen<f64, nalgebra::Dyn>, tau: f64) {
    let v: &DMatrix<f64> = &eig.eigenvectors;
    let re = DVector::from_iterator(amps.len(), amps.iter().map(|a| a.re));
    let im = DVector::from_iterator(amps.len(), amps.iter().map(|a| a.im));
    let (cr, ci) = (v.tr_mul(&re), v.tr_mul(&im));
    let mut yr = DVector::zeros(amps.len());
    let mut yi = DVector::zeros(amps.len());
    for q in 0..amps.len() {
        let c = Complex64::new(cr[q], ci[q]) * Complex64::from_polar(1.0, -tau * eig.eigenvalues[q]);
        yr[q] = c.re;
        yi[q] = c.im;
    }
    let (or, oi) = (v * yr, v * yi);
    for (q, a) in amps.iter_mut().enumerate() {
        *a = Complex64::new(or[q], oi[q]);
    }
}

/// Lowest eigenvalues of H(t) at a list of times.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumTrace {
    pub times: Vec<f64>,
    /// Ascending per time.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Class id carrying the largest weight of each eigenvector, when a
    /// classification was supplied.
    pub classes: Vec<Vec<Option<usize>>>,
}

/// Dense diagonalization of H(t) at each time; `class_of[idx]` maps basis
/// states to class ids for tagging eigenvectors.
pub fn instantaneous_spectrum(
    g: &ProblemGraph,
    levels: &LevelScheme,
    plan: &DrivePlan,
    times: &[f64],
    m: usize,
    class_of: Option<&[usize]>,
) -> Result<SpectrumTrace> {
    let model = prepare(g, levels, plan, None)?;
    let basis = model.basis;
    if basis.dim() > DENSE_LIMIT {
        return Err(Error::DimensionTooLarge { dim: basis.dim(), limit: DENSE_LIMIT });
    }
    let mut trace = SpectrumTrace { times: times.to_vec(), eigenvalues: Vec::new(), classes: Vec::new() };
    for &t in times {
        let (delta, omega) = parameters_at(t, plan)?;
        let eig = eigen(basis, &model.energies(&delta), &omega)?;
        let mut order: Vec<usize> = (0..basis.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        order.truncate(m);
        trace.eigenvalues.push(order.iter().map(|&q| eig.eigenvalues[q]).collect());
        trace.classes.push(
            order
                .iter()
                .map(|&q| {
                    class_of.and_then(|cls| {
                        let mut weight: Vec<(usize, f64)> = Vec::new();
                        for (idx, &v) in eig.eigenvectors.column(q).iter().enumerate() {
                            let c = cls[idx];
                            match weight.iter_mut().find(|w| w.0 == c) {
                                Some(w) => w.1 += v * v,
                                None => weight.push((c, v * v)),
                            }
                        }
                        weight.into_iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|w| w.0)
                    })
                })
                .collect(),
        );
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, Optimizer, Position};
    use approx::assert_relative_eq;

    fn one_atom() -> ProblemGraph {
        ProblemGraph::new("one", vec![Position::new(0.0, 0.0, 0.0)], [], 1.0).unwrap()
    }

    #[test]
    fn zero_drive_stays_in_ground() {
        let g = builtin_graph('A', Optimizer::TwoRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let plan = DrivePlan::standard(vec![0.0, 0.0], vec![8.0, 19.0]);
        let out = anneal(&g, &l, &plan, &AnnealOptions::default()).unwrap();
        assert_eq!(out.state.amps[0].norm_sqr(), 1.0);
    }

    #[test]
    fn sample_grid() {
        assert_eq!(sample_steps(300, 100).len(), 101);
        assert_eq!(sample_steps(10, 100), (0..=10).collect::<Vec<_>>());
        assert_eq!(*sample_steps(7, 3).last().unwrap(), 7);
    }

    #[test]
    fn single_atom_oracle_against_rk4() {
        // Independent fixed-step RK4 integration of the two-level
        // Schrödinger equation with the same piecewise-constant parameters.
        let g = one_atom();
        let l = LevelScheme::new(vec![1.0], &[], vec![]).unwrap();
        let mut plan = DrivePlan::standard(vec![2.0], vec![6.0]);
        plan.trotter_steps = 60;
        let oracle = anneal_oracle(&g, &l, &plan, StepRule::Midpoint, OracleMethod::Eigen).unwrap();
        let dt = plan.t_total / 60.0;
        let mut psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        for m in 0..60 {
            let (d, o) = parameters_at((m as f64 + 0.5) * dt, &plan).unwrap();
            let f = |y: [Complex64; 2]| {
                let mi = Complex64::new(0.0, -2.0 * PI);
                [mi * (y[1] * (o[0] / 2.0)), mi * (y[0] * (o[0] / 2.0) - y[1] * d[0])]
            };
            let n = 400;
            let h = dt / n as f64;
            for _ in 0..n {
                let k1 = f(psi);
                let k2 = f([psi[0] + k1[0] * (h / 2.0), psi[1] + k1[1] * (h / 2.0)]);
                let k3 = f([psi[0] + k2[0] * (h / 2.0), psi[1] + k2[1] * (h / 2.0)]);
                let k4 = f([psi[0] + k3[0] * h, psi[1] + k3[1] * h]);
                for i in 0..2 {
                    psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
                }
            }
        }
        for i in 0..2 {
            assert_relative_eq!(oracle.amps[i].re, psi[i].re, epsilon = 1e-6);
            assert_relative_eq!(oracle.amps[i].im, psi[i].im, epsilon = 1e-6);
        }
    }

    #[test]
    fn chebyshev_matches_eigen_oracle() {
        let g = builtin_graph('A', Optimizer::ThreeRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(3).unwrap();
        let mut plan = DrivePlan::standard(vec![1.0, 2.0, 5.0], vec![5.0, 10.0, 15.0]);
        plan.trotter_steps = 40;
        let a = anneal_oracle(&g, &l, &plan, StepRule::Midpoint, OracleMethod::Eigen).unwrap();
        let b = anneal_oracle(&g, &l, &plan, StepRule::Midpoint, OracleMethod::Chebyshev).unwrap();
        assert!((a.fidelity(&b) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectrum_at_end_is_diagonal() {
        let g = builtin_graph('A', Optimizer::TwoRydberg).unwrap();
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let plan = DrivePlan::standard(vec![3.0, 7.0], vec![8.0, 19.0]);
        let tr = instantaneous_spectrum(&g, &l, &plan, &[plan.t_total], 5, None).unwrap();
        let mut e = crate::hamiltonian::build_diagonal(&g, &l, &[8.0, 19.0]).unwrap();
        e.sort_by(f64::total_cmp);
        for (a, b) in tr.eigenvalues[0].iter().zip(&e) {
            assert_relative_eq!(*a, *b, epsilon = 1e-9);
        }
    }
}
