//! Minimum-error discrimination by fixed-point POVM iteration.
//!
//! The iteration `Π_m ← R⁻¹ ρ′_m Π_m ρ′_m R⁻¹`, `R = (Σ_k ρ′_k Π_k ρ′_k)^{1/2}`,
//! keeps `Σ Π_m = I` on the signal support and increases the success
//! probability monotonically. It stops once the dual witness
//! `Γ = ½ Σ_m (ρ′_m Π_m + Π_m ρ′_m)` satisfies `Γ ⪰ ρ′_m` for every `m` up
//! to the requested tolerance, which certifies optimality.
//!
//! All work happens on the support of `Σ_m ρ′_m`. The signal operators
//! vanish on its complement, so the complement only receives an even share
//! of the identity when the POVM is lifted back to the full space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gram::{gram_matrix, sqrt_gram};
use crate::constellation::{density_matrix, truncation_dim, Constellation, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::hermitian::{check_dim, CMatrix, HermitianMatrix};

/// Relative eigenvalue cutoff defining the signal support.
const SUPPORT_CUTOFF: f64 = 1e-14;
/// Iterations between certificate evaluations.
const CHECK_EVERY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelstromOptions {
    /// Fock truncation accuracy.
    pub epsilon: f64,
    /// Dual-feasibility tolerance on `min eig(Γ − ρ′_m)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for HelstromOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            tol: 1e-6,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HelstromSolution {
    pub povm: Vec<HermitianMatrix>,
    /// Dual witness `Γ`, feasible for `X ⪰ ρ′_m`.
    pub lagrange: HermitianMatrix,
    pub p_err: f64,
    /// `max_m max(0, −min eig(Γ − ρ′_m))`
    pub gap: f64,
    pub iterations: usize,
}

impl HelstromSolution {
    /// `1 − Tr(Γ)`
    pub fn dual_error(&self) -> f64 {
        1.0 - self.lagrange.trace()
    }

    pub fn completeness_error(&self) -> f64 {
        let dim = self.lagrange.dim();
        let total = self
            .povm
            .iter()
            .fold(HermitianMatrix::zeros(dim), |acc, p| acc.add(p));
        total.max_abs_diff(&HermitianMatrix::identity(dim))
    }
}

/// `ρ′_m = P_m ρ_m` in a Fock space of dimension `dim`.
pub fn weighted_density_operators(c: &Constellation, dim: usize) -> Vec<HermitianMatrix> {
    c.points()
        .iter()
        .zip(c.priors())
        .map(|(&phi, &p)| density_matrix(phi, dim).scale(p))
        .collect()
}

/// Helstrom limit of a constellation, with operators truncated at
/// `truncation_dim(c, opts.epsilon)`.
pub fn helstrom_error_rate(c: &Constellation, opts: &HelstromOptions) -> Result<HelstromSolution> {
    let dim = truncation_dim(c, opts.epsilon)?;
    helstrom_from_operators(&weighted_density_operators(c, dim), opts.tol, opts.max_iter)
}

/// Helstrom limit of a pure-state constellation computed without Fock
/// truncation: column `m` of `G^{1/2}` represents `|φ_m⟩` exactly in the
/// `M`-dimensional signal span, since `(G^{1/2})† G^{1/2} = G`.
pub fn helstrom_from_gram(
    c: &Constellation,
    tol: f64,
    max_iter: usize,
) -> Result<HelstromSolution> {
    let root = sqrt_gram(&gram_matrix(c))?.sqrt;
    let weighted: Vec<HermitianMatrix> = c
        .priors()
        .iter()
        .enumerate()
        .map(|(m, &p)| HermitianMatrix::outer(&root.as_matrix().column(m).into_owned()).scale(p))
        .collect();
    helstrom_from_operators(&weighted, tol, max_iter)
}

/// Helstrom limit for prior-weighted operators `ρ′_m` (`Σ Tr ρ′_m ≈ 1`).
pub fn helstrom_from_operators(
    weighted: &[HermitianMatrix],
    tol: f64,
    max_iter: usize,
) -> Result<HelstromSolution> {
    if weighted.is_empty() {
        return Err(Error::invalid("operators", "no signal operators"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(
            "tol",
            format!("must be positive, got {tol}"),
        ));
    }
    let dim = weighted[0].dim();
    for op in weighted {
        check_dim(dim, op.dim())?;
    }
    let m = weighted.len();

    let basis = support_basis(weighted);
    let reduced: Vec<HermitianMatrix> = weighted
        .iter()
        .map(|op| op.congruence(&basis.adjoint()))
        .collect();
    let k = basis.ncols();

    let mut povm = completed(pretty_good_measurement(&reduced));
    let mut iterations = 0;
    let mut gap = certificate_gap(&reduced, &povm);
    while gap > tol && iterations < max_iter {
        for _ in 0..CHECK_EVERY.min(max_iter - iterations) {
            povm = completed(fixed_point_step(&reduced, &povm));
            iterations += 1;
        }
        gap = certificate_gap(&reduced, &povm);
    }

    let complement = HermitianMatrix::from_matrix(
        (CMatrix::identity(dim, dim) - &basis * basis.adjoint())
            * Complex64::new(1.0 / m as f64, 0.0),
    );
    let lifted: Vec<HermitianMatrix> = povm
        .iter()
        .map(|p| p.congruence(&basis).add(&complement))
        .collect();
    let lagrange = witness(weighted, &lifted);
    let success: f64 = weighted
        .iter()
        .zip(&lifted)
        .map(|(r, p)| r.trace_product(p))
        .sum();
    let solution = HelstromSolution {
        gap: certificate_gap(weighted, &lifted),
        povm: lifted,
        lagrange,
        p_err: 1.0 - success,
        iterations,
    };
    debug_assert!(k <= dim);

    if solution.gap > tol {
        return Err(Error::NotConverged {
            iterations,
            gap: solution.gap,
            p_err: solution.p_err,
            best: Box::new(solution),
        });
    }
    Ok(solution)
}

/// Orthonormal basis (columns) of the range of `Σ_m ρ′_m`.
fn support_basis(weighted: &[HermitianMatrix]) -> CMatrix {
    let dim = weighted[0].dim();
    let total = weighted
        .iter()
        .fold(HermitianMatrix::zeros(dim), |acc, op| acc.add(op));
    let eig = total.eigen();
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> = (0..dim)
        .filter(|&c| eig.values[c] > SUPPORT_CUTOFF * top)
        .collect();
    DMatrix::from_fn(dim, keep.len(), |r, c| eig.vectors[(r, keep[c])])
}

/// Pseudo-inverse square root on the numerical range.
fn inverse_sqrt(h: &HermitianMatrix) -> HermitianMatrix {
    let eig = h.eigen();
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    eig.reconstruct(|x| {
        if x > SUPPORT_CUTOFF * top {
            1.0 / x.sqrt()
        } else {
            0.0
        }
    })
}

/// `Π_m = S^{-1/2} ρ′_m S^{-1/2}`, `S = Σ ρ′_m`; the square-root measurement
/// for equal-prior pure states.
fn pretty_good_measurement(reduced: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
    let dim = reduced[0].dim();
    let total = reduced
        .iter()
        .fold(HermitianMatrix::zeros(dim), |acc, r| acc.add(r));
    let root = inverse_sqrt(&total);
    let root = root.as_matrix();
    reduced
        .iter()
        .map(|r| HermitianMatrix::from_matrix(root * r.as_matrix() * root))
        .collect()
}

fn fixed_point_step(reduced: &[HermitianMatrix], povm: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
    let dim = reduced[0].dim();
    let sandwiched: Vec<CMatrix> = reduced
        .iter()
        .zip(povm)
        .map(|(r, p)| r.as_matrix() * p.as_matrix() * r.as_matrix())
        .collect();
    let total = sandwiched
        .iter()
        .fold(CMatrix::zeros(dim, dim), |acc, s| acc + s);
    let root = inverse_sqrt(&HermitianMatrix::from_matrix(total));
    let root = root.as_matrix();
    sandwiched
        .iter()
        .map(|s| HermitianMatrix::from_matrix(root * s * root))
        .collect()
}

/// `Π_m ← T^{-1/2} Π_m T^{-1/2}` with `T = Σ Π_m`. The fixed-point map is
/// complete only up to the conditioning of `Σ ρ′Πρ′`; `T ≈ I`, so this
/// restores `Σ Π_m = I` to rounding.
fn completed(povm: Vec<HermitianMatrix>) -> Vec<HermitianMatrix> {
    let dim = povm[0].dim();
    let total = povm
        .iter()
        .fold(HermitianMatrix::zeros(dim), |acc, p| acc.add(p));
    let root = inverse_sqrt(&total);
    povm.iter()
        .map(|p| p.congruence(root.as_matrix()))
        .collect()
}

fn witness(weighted: &[HermitianMatrix], povm: &[HermitianMatrix]) -> HermitianMatrix {
    let dim = weighted[0].dim();
    let total = weighted
        .iter()
        .zip(povm)
        .fold(CMatrix::zeros(dim, dim), |acc, (r, p)| {
            acc + r.as_matrix() * p.as_matrix()
        });
    HermitianMatrix::from_matrix(total)
}

fn certificate_gap(weighted: &[HermitianMatrix], povm: &[HermitianMatrix]) -> f64 {
    let gamma = witness(weighted, povm);
    weighted
        .iter()
        .map(|r| -gamma.sub(r).min_eigenvalue())
        .fold(0.0, f64::max)
}
