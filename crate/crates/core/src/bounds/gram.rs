use num_complex::Complex64;

use crate::constellation::{coherent_overlap, Constellation};
use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, HermitianMatrix};

/// Eigenvalues below this are a genuine PSD violation rather than rounding.
const PSD_VIOLATION: f64 = -1e-8;

/// `G_ij = ⟨φ_i|φ_j⟩`
pub fn gram_matrix(c: &Constellation) -> HermitianMatrix {
    let pts = c.points();
    HermitianMatrix::from_fn(pts.len(), |i, j| coherent_overlap(pts[i], pts[j]))
}

#[derive(Debug, Clone)]
pub struct GramDecomposition {
    pub gram: HermitianMatrix,
    /// Ascending, clamped at zero.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub eigenvectors: CMatrix,
    /// `Q D^{1/2} Q†`
    pub sqrt: HermitianMatrix,
}

pub fn sqrt_gram(g: &HermitianMatrix) -> Result<GramDecomposition> {
    let eig = g.eigen();
    if let Some(&lowest) = eig.values.first() {
        if lowest < PSD_VIOLATION {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: lowest,
                threshold: PSD_VIOLATION,
            });
        }
    }
    let sqrt = eig.reconstruct(|x| x.max(0.0).sqrt());
    Ok(GramDecomposition {
        gram: g.clone(),
        eigenvalues: eig.values.iter().map(|x| x.max(0.0)).collect(),
        eigenvectors: eig.vectors,
        sqrt,
    })
}

/// Row-stochastic matrix of conditional probabilities `P(j|i)`, indexed
/// `[i][j]` (sent `i`, decided `j`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    rows: Vec<Vec<f64>>,
}

impl ConfusionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        Self { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn prob(&self, sent: usize, decided: usize) -> f64 {
        self.rows[sent][decided]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn max_row_sum_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `1 − Σ_m P_m P(m|m)`
    pub fn error_rate(&self, priors: &[f64]) -> f64 {
        1.0 - priors
            .iter()
            .enumerate()
            .map(|(m, p)| p * self.rows[m][m])
            .sum::<f64>()
    }
}

/// `P(j|i) = |(G^{1/2})_{ji}|²`. Requires equal priors.
pub fn srm_confusion(c: &Constellation) -> Result<ConfusionMatrix> {
    if !c.has_equal_priors() {
        return Err(Error::UnequalPriors);
    }
    let root = sqrt_gram(&gram_matrix(c))?.sqrt;
    let m = c.order();
    let rows = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| Complex64::norm_sqr(&root.get(j, i)))
                .collect()
        })
        .collect();
    Ok(ConfusionMatrix::new(rows))
}

pub fn srm_error_rate(c: &Constellation) -> Result<f64> {
    let confusion = srm_confusion(c)?;
    Ok(confusion.error_rate(c.priors()).max(0.0))
}
