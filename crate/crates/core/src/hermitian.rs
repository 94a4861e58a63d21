//! Dense complex Hermitian matrices.
//!
//! Eigendecomposition is delegated to nalgebra's Hermitian solver. Every
//! constructor that starts from a general complex matrix symmetrizes it as
//! `(A + A†) / 2` so the Hermitian invariant holds to rounding.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

/// Eigenpairs sorted by ascending eigenvalue; column `k` of `vectors`
/// belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: CMatrix::identity(dim, dim),
        }
    }

    /// Symmetrizes `m`. Panics if `m` is not square.
    pub fn from_matrix(m: CMatrix) -> Self {
        assert!(m.is_square(), "Hermitian matrix must be square");
        let inner = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self { inner }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::from_matrix(CMatrix::from_fn(dim, dim, f))
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &CVector) -> Self {
        Self {
            inner: v * v.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Tr(self · other)` for two Hermitian operators, which is real.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        self.inner
            .iter()
            .zip(other.inner.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: &self.inner * Complex64::new(s, 0.0),
        }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    /// Largest deviation from `A = A†`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn eigen(&self) -> Eigen {
        let dim = self.dim();
        if dim == 0 {
            return Eigen {
                values: Vec::new(),
                vectors: CMatrix::zeros(0, 0),
            };
        }
        let decomp = SymmetricEigen::new(self.inner.clone());
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| decomp.eigenvalues[a].total_cmp(&decomp.eigenvalues[b]));
        let values = order.iter().map(|&k| decomp.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(dim, dim, |i, c| decomp.eigenvectors[(i, order[c])]);
        Eigen { values, vectors }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Applies `f` to the spectrum: `Q f(D) Q†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        self.eigen().reconstruct(f)
    }

    /// Conjugation `B · self · B†` for a (possibly rectangular) `B`.
    pub fn congruence(&self, b: &CMatrix) -> Self {
        Self::from_matrix(b * &self.inner * b.adjoint())
    }
}

impl Eigen {
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for c in 0..n {
            let s = Complex64::new(f(self.values[c]), 0.0);
            for r in 0..n {
                scaled[(r, c)] *= s;
            }
        }
        HermitianMatrix::from_matrix(&scaled * self.vectors.adjoint())
    }

    /// `max_k ‖A v_k − λ_k v_k‖`
    pub fn residual(&self, a: &HermitianMatrix) -> f64 {
        (0..self.values.len())
            .map(|k| {
                let v = self.vectors.column(k);
                (a.as_matrix() * v - v * Complex64::new(self.values[k], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = HermitianMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => c(2.0, 0.0),
            (0, 1) => c(0.0, 1.0),
            _ => c(0.0, -1.0),
        });
        let e = h.eigen();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        assert!(e.residual(&h) < 1e-13);
        let back = e.reconstruct(|x| x);
        assert!(back.max_abs_diff(&h) < 1e-14);
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = HermitianMatrix::from_fn(3, |i, j| c((i + j) as f64, i as f64 - j as f64));
        let b = HermitianMatrix::from_fn(3, |i, j| {
            c(1.0 / (1 + i + j) as f64, 0.5 * (j as f64 - i as f64))
        });
        let full = (a.as_matrix() * b.as_matrix()).trace();
        assert!((a.trace_product(&b) - full.re).abs() < 1e-12);
        assert!(full.im.abs() < 1e-12);
    }

    #[test]
    fn symmetrizes_input() {
        let m = CMatrix::from_fn(2, 2, |i, j| c(i as f64, j as f64));
        let h = HermitianMatrix::from_matrix(m);
        assert!(h.hermiticity_error() < 1e-15);
    }
}
