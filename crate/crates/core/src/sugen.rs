//! Generators of SU(d) in the defining representation.
//!
//! With `P_{jk} = |j><k|`, the family is
//!
//! * `u_{jk} = P_{jk} + P_{kj}` for `1 <= j < k <= d`,
//! * `v_{jk} = -i (P_{jk} - P_{kj})` for `1 <= j < k <= d`,
//! * `w_l = sqrt(2 / (l (l + 1))) (P_{11} + ... + P_{ll} - l P_{l+1,l+1})` for `1 <= l < d`,
//!
//! stored in that order (all `u` in lexicographic `(j, k)`, then all `v`, then
//! all `w`). Every generator is Hermitian and traceless with
//! `Tr(λ_a λ_b) = 2 δ_ab`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::ZERO;

/// Sparse view of one generator: `(row, col, value)` nonzeros.
pub type SparseEntries = Vec<(usize, usize, Complex64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    matrices: Vec<DMatrix<Complex64>>,
    sparse: Vec<SparseEntries>,
}

/// Builds the `d² - 1` generators of SU(d).
pub fn generators(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::Domain(format!("SU(d) needs d >= 2, got {d}")));
    }
    let mut matrices = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();

    for &(j, k) in &pairs {
        let mut m = DMatrix::from_element(d, d, ZERO);
        m[(j, k)] = Complex64::new(1.0, 0.0);
        m[(k, j)] = Complex64::new(1.0, 0.0);
        matrices.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = DMatrix::from_element(d, d, ZERO);
        m[(j, k)] = Complex64::new(0.0, -1.0);
        m[(k, j)] = Complex64::new(0.0, 1.0);
        matrices.push(m);
    }
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = DMatrix::from_element(d, d, ZERO);
        for i in 0..l {
            m[(i, i)] = Complex64::new(scale, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
        matrices.push(m);
    }

    let sparse = matrices
        .iter()
        .map(|m| {
            let mut e = Vec::new();
            for c in 0..d {
                for r in 0..d {
                    if m[(r, c)] != ZERO {
                        e.push((r, c, m[(r, c)]));
                    }
                }
            }
            e
        })
        .collect();
    Ok(GeneratorSet { dim: d, matrices, sparse })
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    pub fn get(&self, a: usize) -> &DMatrix<Complex64> {
        &self.matrices[a]
    }

    pub fn sparse(&self, a: usize) -> &SparseEntries {
        &self.sparse[a]
    }

    pub fn iter(&self) -> impl Iterator<Item = &DMatrix<Complex64>> {
        self.matrices.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d2_is_pauli() {
        let g = generators(2).unwrap();
        assert_eq!(g.len(), 3);
        let sx = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let sy = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let sz = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert_eq!(g.get(0), &sx);
        assert_eq!(g.get(1), &sy);
        assert_eq!(g.get(2), &sz);
    }

    #[test]
    fn d3_diagonal_generators() {
        let g = generators(3).unwrap();
        let w1 = g.get(6);
        let w2 = g.get(7);
        let s3 = 1.0 / 3f64.sqrt();
        let expect1 = [1.0, -1.0, 0.0];
        let expect2 = [s3, s3, -2.0 * s3];
        for i in 0..3 {
            assert!((w1[(i, i)] - c(expect1[i], 0.0)).norm() < 1e-15);
            assert!((w2[(i, i)] - c(expect2[i], 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn d4_family_counts() {
        let g = generators(4).unwrap();
        assert_eq!(g.len(), 15);
        let offdiag_real = g.iter().take(6).all(|m| m.iter().all(|z| z.im == 0.0));
        let offdiag_imag = g.iter().skip(6).take(6).all(|m| m.iter().all(|z| z.re == 0.0));
        let diag = g.iter().skip(12).all(|m| m.is_diagonal());
        assert!(offdiag_real && offdiag_imag && diag);
    }

    #[test]
    fn rejects_d_below_two() {
        assert!(generators(1).is_err());
        assert!(generators(0).is_err());
    }

    trait IsDiag {
        fn is_diagonal(&self) -> bool;
    }
    impl IsDiag for DMatrix<Complex64> {
        fn is_diagonal(&self) -> bool {
            (0..self.nrows()).all(|r| (0..self.ncols()).all(|c| r == c || self[(r, c)] == ZERO))
        }
    }
}
