//! Emulation of coherent quantum annealing on qudit Rydberg atom arrays for
//! minimum vertex graph coloring.
//!
//! Each vertex of a unit-disk graph is an atom with a ground state `|g>` and
//! `k` same-parity Rydberg levels `|r_1> .. |r_k>`; every level is a color.
//! The crate provides the benchmark graph library, the van der Waals
//! interaction model and encoding-constraint checks, the qudit Hamiltonian in
//! the `(k+1)^N` product basis, split-step and exact annealing propagators,
//! analysis of final states as colorings, and classical reference solvers.
//!
//! Units follow one convention end to end: frequencies and energies are
//! values of `quantity / 2π` in MHz, times are in μs, lengths in μm and
//! dispersion coefficients in GHz·μm⁶. The factor `2π` is applied only inside
//! the propagators.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod basis;
pub mod chebyshev;
pub mod classical;
pub mod error;
pub mod evolution;
pub mod graph;
pub mod hamiltonian;
pub mod interactions;
pub mod presets;
pub mod schedule;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Absolute tolerance (μm) used when comparing interatomic distances.
pub const DISTANCE_TOL: f64 = 1e-6;

/// Default tolerance (MHz) for treating two energies as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-3;
