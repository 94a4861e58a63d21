//! QAM coherent-state signal sets and their Fock-space representations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{CVector, HermitianMatrix};

/// Field amplitude in photon-number-½ units: `|φ|²` is a mean photon number.
pub type ComplexAmplitude = Complex64;

/// Truncation accuracy used by the bound computations unless overridden.
pub const DEFAULT_EPSILON: f64 = 1e-8;

const PRIOR_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<ComplexAmplitude>,
    priors: Vec<f64>,
    alpha: f64,
}

impl Constellation {
    /// Arbitrary signal set. `alpha` is only informational here.
    pub fn new(points: Vec<ComplexAmplitude>, priors: Vec<f64>, alpha: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("points", "constellation has no points"));
        }
        if points.len() != priors.len() {
            return Err(Error::invalid(
                "priors",
                format!("{} priors for {} points", priors.len(), points.len()),
            ));
        }
        if points
            .iter()
            .any(|p| !p.re.is_finite() || !p.im.is_finite())
        {
            return Err(Error::invalid("points", "non-finite amplitude"));
        }
        if priors.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::invalid("priors", "negative or NaN prior"));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::invalid("priors", format!("priors sum to {total}")));
        }
        Ok(Self {
            points,
            priors,
            alpha,
        })
    }

    /// Equal-prior signal set.
    pub fn uniform(points: Vec<ComplexAmplitude>, alpha: f64) -> Result<Self> {
        let m = points.len();
        Self::new(points, vec![1.0 / m as f64; m], alpha)
    }

    /// Binary antipodal set `{+α, −α}` with equal priors.
    pub fn binary(alpha: f64) -> Self {
        Self::uniform(
            vec![Complex64::new(alpha, 0.0), Complex64::new(-alpha, 0.0)],
            alpha,
        )
        .expect("binary constellation is always valid")
    }

    pub fn points(&self) -> &[ComplexAmplitude] {
        &self.points
    }

    pub fn point(&self, m: usize) -> ComplexAmplitude {
        self.points[m]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn has_equal_priors(&self) -> bool {
        let expected = 1.0 / self.order() as f64;
        self.priors
            .iter()
            .all(|&p| (p - expected).abs() <= PRIOR_SUM_TOL)
    }

    /// `Σ_m P_m |φ_m|²`
    pub fn mean_photon_number(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.priors)
            .map(|(p, w)| w * p.norm_sqr())
            .sum()
    }
}

/// Side length of a square QAM grid. The side must be even so that the
/// odd-integer coordinates are symmetric about the origin.
pub fn qam_side(order: usize) -> Result<usize> {
    let side = (order as f64).sqrt().round() as usize;
    if order < 4 || side * side != order || !side.is_multiple_of(2) {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(side)
}

/// Rectangular `order`-QAM grid `α(p + iq)` with odd `p, q`, ordered with `p`
/// ascending in the outer loop and `q` ascending in the inner loop. Index 0 is
/// the `(−(s−1), −(s−1))` corner.
pub fn qam_points(order: usize, alpha: f64) -> Result<Constellation> {
    let side = qam_side(order)?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    Ok(qam_grid(side, alpha))
}

fn qam_grid(side: usize, alpha: f64) -> Constellation {
    let coords: Vec<f64> = (0..side)
        .map(|k| (2 * k) as f64 - (side - 1) as f64)
        .collect();
    let points = coords
        .iter()
        .flat_map(|&p| {
            coords
                .iter()
                .map(move |&q| Complex64::new(alpha * p, alpha * q))
        })
        .collect();
    Constellation::uniform(points, alpha).expect("grid points are finite")
}

/// Mean photon number of the unit-spaced (`α = 1`) grid: `2(s² − 1)/3`.
fn unit_grid_energy(side: usize) -> f64 {
    2.0 * ((side * side) as f64 - 1.0) / 3.0
}

/// Scale `α` giving the requested mean photon number.
pub fn alpha_for_ns(order: usize, ns: f64) -> Result<f64> {
    let side = qam_side(order)?;
    if !(ns >= 0.0) || !ns.is_finite() {
        return Err(Error::invalid(
            "ns",
            format!("must be nonnegative, got {ns}"),
        ));
    }
    Ok((ns / unit_grid_energy(side)).sqrt())
}

/// QAM constellation at mean photon number `ns`. At `ns = 0` every point
/// collapses onto the vacuum.
pub fn qam_for_ns(order: usize, ns: f64) -> Result<Constellation> {
    let alpha = alpha_for_ns(order, ns)?;
    let side = qam_side(order)?;
    Ok(qam_grid(side, alpha))
}

/// `⟨a|b⟩ = exp(a*·b − |a|²/2 − |b|²/2)`
pub fn coherent_overlap(a: ComplexAmplitude, b: ComplexAmplitude) -> Complex64 {
    (a.conj() * b - 0.5 * (a.norm_sqr() + b.norm_sqr())).exp()
}

/// Truncated photon-number expansion of a coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub coeffs: CVector,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coeffs.dotc(&other.coeffs)
    }
}

/// `c_n = e^{−|φ|²/2} φⁿ / √(n!)`, by the recurrence `c_n = c_{n−1} φ / √n`.
pub fn fock_vector(phi: ComplexAmplitude, dim: usize) -> FockVector {
    let mut coeffs = CVector::zeros(dim);
    if dim > 0 {
        coeffs[0] = Complex64::new((-0.5 * phi.norm_sqr()).exp(), 0.0);
        for n in 1..dim {
            coeffs[n] = coeffs[n - 1] * phi / (n as f64).sqrt();
        }
    }
    FockVector { coeffs }
}

/// `ρ_ij = e^{−|φ|²} φⁱ (φ*)ʲ / √(i! j!)`
pub fn density_matrix(phi: ComplexAmplitude, dim: usize) -> HermitianMatrix {
    HermitianMatrix::outer(&fock_vector(phi, dim).coeffs)
}

/// Smallest `D` such that the photon-number distribution of every point,
/// truncated to `0..D`, carries mass above `1 − ε`.
pub fn truncation_dim(c: &Constellation, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(
            "epsilon",
            format!("must lie in (0, 1), got {epsilon}"),
        ));
    }
    Ok(c.points
        .iter()
        .map(|p| poisson_cutoff(p.norm_sqr(), epsilon))
        .max()
        .unwrap_or(1))
}

fn poisson_cutoff(mean: f64, epsilon: f64) -> usize {
    let mut pmf = (-mean).exp();
    let mut cdf = pmf;
    let mut d = 1;
    while cdf <= 1.0 - epsilon {
        pmf *= mean / d as f64;
        cdf += pmf;
        d += 1;
        // the running sum can stall a few ulps short of 1 for huge means
        if pmf == 0.0 && d as f64 > mean {
            break;
        }
    }
    d
}
