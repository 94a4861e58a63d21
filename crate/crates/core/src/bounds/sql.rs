use statrs::function::erf::erfc;

use crate::constellation::{alpha_for_ns, qam_side};
use crate::error::{Error, Result};

/// Heterodyne (shot-noise limited) symbol error rate of square QAM with
/// nearest-neighbour decisions.
///
/// Heterodyne outcomes are Gaussian around `φ_m` with variance ½ per
/// quadrature, so each quadrature is an independent `s`-PAM decision with
/// half-spacing `α`: `p₁ = (1 − 1/s)·erfc(α)` and `P_e = 1 − (1 − p₁)²`.
pub fn sql_error_rate(order: usize, ns: f64) -> Result<f64> {
    let side = qam_side(order).map_err(|_| Error::UnsupportedOrder(order))?;
    let alpha = alpha_for_ns(order, ns)?;
    let per_quadrature = (1.0 - 1.0 / side as f64) * erfc(alpha);
    Ok(1.0 - (1.0 - per_quadrature).powi(2))
}
