//! Small dense linear-algebra helpers shared by the models and tests.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>, tol: f64) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    if worst > tol {
        return Err(Error::NotHermitian(worst));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `exp(-i t H)` for Hermitian `H`, through its spectral decomposition.
pub fn unitary_propagator(h: &DMatrix<Complex64>, t: f64) -> Result<DMatrix<Complex64>> {
    let (values, vectors) = hermitian_eigen(h, 1e-10)?;
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
    ));
    Ok(&vectors * phases * vectors.adjoint())
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized vector with independent complex Gaussian entries (uniform on the sphere).
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(d, d, |_, _| random_complex(rng));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column phases so the distribution is Haar
    let mut u = q;
    for c in 0..d {
        let diag = r[(c, c)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..d {
            u[(row, c)] *= phase;
        }
    }
    u
}
