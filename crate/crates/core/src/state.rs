//! Normalized amplitude vectors over the product basis.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::basis::Basis;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub basis: Basis,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    /// All atoms in the ground state.
    pub fn ground(basis: Basis) -> Self {
        Self::basis_state(basis, 0)
    }

    pub fn basis_state(basis: Basis, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.dim()];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { basis, amps }
    }

    pub fn from_amplitudes(basis: Basis, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch("amplitude count differs from basis dimension".into()));
        }
        Ok(Self { basis, amps })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Total probability on a set of basis indices.
    pub fn weight(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.amps[i].norm_sqr()).sum()
    }

    /// State with vertex labels moved by `perm`: the digit of vertex `v` is
    /// placed on vertex `perm[v]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> StateVector {
        let b = self.basis;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            out[permute_index(b, idx, perm)] = a;
        }
        StateVector { basis: b, amps: out }
    }
}

/// Basis index with digit of vertex `v` moved to vertex `perm[v]`.
pub fn permute_index(b: Basis, idx: usize, perm: &[usize]) -> usize {
    let mut rest = idx;
    let mut out = 0;
    for &p in perm.iter().take(b.n) {
        out += (rest % b.d) * b.stride(p);
        rest /= b.d;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_moves_digits() {
        let b = Basis::new(3, 2).unwrap();
        let idx = b.encode(&[1, 2, 0]).unwrap();
        let moved = permute_index(b, idx, &[1, 2, 0]);
        assert_eq!(b.decode(moved).unwrap(), [0, 1, 2]);
        let s = StateVector::basis_state(b, idx).permute_vertices(&[1, 2, 0]);
        assert_eq!(s.amps[moved], Complex64::new(1.0, 0.0));
    }
}
