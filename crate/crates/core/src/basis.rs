//! Product basis of `N` qudits with `k + 1` local levels.
//!
//! Vertex 0 is the least-significant digit: index = Σ_v d_v (k+1)^v.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest Hilbert space the diagonal builders accept (2^24).
pub const DIMENSION_BUDGET: usize = 1 << 24;

/// Largest space for dense matrices and eigensolves.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Basis {
    /// Number of atoms.
    pub n: usize,
    /// Local dimension `k + 1`.
    pub d: usize,
}

impl Basis {
    /// Basis for `n` atoms with `k` Rydberg levels each, limited to
    /// [`DIMENSION_BUDGET`].
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let d = k + 1;
        let mut dim: usize = 1;
        for _ in 0..n {
            dim = dim
                .checked_mul(d)
                .filter(|&x| x <= DIMENSION_BUDGET)
                .ok_or(Error::DimensionTooLarge { dim: usize::MAX, limit: DIMENSION_BUDGET })?;
        }
        Ok(Self { n, d })
    }

    pub fn k(&self) -> usize {
        self.d - 1
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// Place value of vertex `v`.
    pub fn stride(&self, v: usize) -> usize {
        self.d.pow(v as u32)
    }

    #[inline]
    pub fn digit(&self, index: usize, v: usize) -> usize {
        (index / self.stride(v)) % self.d
    }

    pub fn encode(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.n {
            return Err(Error::DimensionMismatch("digit count differs from atom count".into()));
        }
        let mut idx = 0;
        for &dg in digits.iter().rev() {
            if dg >= self.d {
                return Err(Error::DigitOutOfRange { digit: dg, levels: self.d });
            }
            idx = idx * self.d + dg;
        }
        Ok(idx)
    }

    pub fn decode(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange { index, dim: self.dim() });
        }
        Ok(self.decode_unchecked(index))
    }

    pub(crate) fn decode_unchecked(&self, mut index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            out.push(index % self.d);
            index /= self.d;
        }
        out
    }

    /// Digits in vertex order, e.g. `"0123"` for v1 = 0, v2 = 1, ...
    pub fn label(&self, index: usize) -> String {
        self.decode_unchecked(index)
            .into_iter()
            .map(|d| char::from_digit(d as u32, 36).unwrap_or('?'))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode() {
        let b = Basis::new(3, 3).unwrap();
        assert_eq!(b.encode(&[0, 0, 0]).unwrap(), 0);
        assert_eq!(b.encode(&[1, 2, 3]).unwrap(), 57);
        assert_eq!(b.decode(57).unwrap(), [1, 2, 3]);
        assert_eq!(b.label(57), "123");
        assert_eq!(b.digit(57, 2), 3);
        assert!(b.encode(&[4, 0, 0]).is_err());
        assert!(b.decode(64).is_err());
    }

    #[test]
    fn budget() {
        assert!(Basis::new(12, 3).is_ok());
        assert!(Basis::new(13, 3).is_err());
    }
}
