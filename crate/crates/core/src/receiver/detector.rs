//! Photon-counting statistics for on-off and photon-number-resolving
//! detectors with sub-unity efficiency and dark counts.

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    OnOff,
    /// Resolves counts `0..=n_pnr`; anything higher is reported as saturated.
    PnrdFinite(u32),
    PnrdInfinite,
}

impl DetectorKind {
    /// Highest count the detector resolves. On-off is a resolution-0 PNRD.
    pub fn resolution(self) -> Option<u32> {
        match self {
            DetectorKind::OnOff => Some(0),
            DetectorKind::PnrdFinite(k) => Some(k),
            DetectorKind::PnrdInfinite => None,
        }
    }

    /// Number of distinct outcomes, `None` when unbounded.
    pub fn outcome_count(self) -> Option<usize> {
        self.resolution().map(|k| k as usize + 2)
    }
}

impl std::fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DetectorKind::OnOff => write!(f, "onoff"),
            DetectorKind::PnrdFinite(k) => write!(f, "pnrd:{k}"),
            DetectorKind::PnrdInfinite => write!(f, "pnrd:inf"),
        }
    }
}

impl std::str::FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "onoff" | "on-off" | "on_off" => Ok(DetectorKind::OnOff),
            "pnrd:inf" | "pnrd" => Ok(DetectorKind::PnrdInfinite),
            other => other
                .strip_prefix("pnrd:")
                .and_then(|k| k.parse::<u32>().ok())
                .map(DetectorKind::PnrdFinite)
                .ok_or_else(|| Error::Usage(format!("unknown detector `{other}`"))),
        }
    }
}

impl serde::Serialize for DetectorKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for DetectorKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    pub kind: DetectorKind,
    /// Quantum efficiency.
    pub eta: f64,
    /// Mean dark counts per slice.
    pub nu: f64,
}

impl DetectorModel {
    pub fn new(kind: DetectorKind, eta: f64, nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::invalid(
                "eta",
                format!("must lie in [0, 1], got {eta}"),
            ));
        }
        if !(nu >= 0.0) || !nu.is_finite() {
            return Err(Error::invalid(
                "nu",
                format!("must be finite and nonnegative, got {nu}"),
            ));
        }
        Ok(Self { kind, eta, nu })
    }

    pub fn ideal(kind: DetectorKind) -> Self {
        Self {
            kind,
            eta: 1.0,
            nu: 0.0,
        }
    }

    /// `μ = ν + η·I`
    pub fn mean_counts(&self, intensity: f64) -> f64 {
        self.nu + self.eta * intensity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountOutcome {
    Exact(u32),
    /// More counts than the detector resolves.
    Saturated,
}

impl CountOutcome {
    /// Position in the outcome order `exact(0), exact(1), …, saturated`.
    pub fn index(self, resolution: Option<u32>) -> usize {
        match (self, resolution) {
            (CountOutcome::Exact(n), _) => n as usize,
            (CountOutcome::Saturated, Some(k)) => k as usize + 1,
            (CountOutcome::Saturated, None) => usize::MAX,
        }
    }

    pub fn from_index(index: usize, resolution: Option<u32>) -> Self {
        match resolution {
            Some(k) if index > k as usize => CountOutcome::Saturated,
            _ => CountOutcome::Exact(index as u32),
        }
    }
}

/// Count distribution at a given Poisson mean, binned by detector resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountPmf {
    mean: f64,
    resolution: Option<u32>,
}

/// Count distribution of a detector illuminated with `intensity` photons.
pub fn count_pmf(intensity: f64, det: &DetectorModel) -> CountPmf {
    CountPmf::from_mean(det.mean_counts(intensity), det.kind.resolution())
}

impl CountPmf {
    pub fn from_mean(mean: f64, resolution: Option<u32>) -> Self {
        debug_assert!(mean >= 0.0, "negative count mean {mean}");
        Self { mean, resolution }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn resolution(&self) -> Option<u32> {
        self.resolution
    }

    pub fn prob(&self, outcome: CountOutcome) -> f64 {
        match (outcome, self.resolution) {
            (CountOutcome::Exact(n), Some(k)) if n > k => 0.0,
            (CountOutcome::Exact(n), _) => poisson(self.mean, n),
            (CountOutcome::Saturated, Some(k)) => poisson_tail(self.mean, k),
            (CountOutcome::Saturated, None) => 0.0,
        }
    }

    /// Inverse-CDF draw over `exact(0), exact(1), …, saturated`.
    pub fn sample(&self, u: f64) -> CountOutcome {
        inverse_cdf(u, self.mean, self.resolution, |n| poisson(self.mean, n))
    }
}

pub fn sample_count(pmf: &CountPmf, u: f64) -> CountOutcome {
    pmf.sample(u)
}

/// Walks `exact(0), exact(1), …` accumulating `exact_prob` until the CDF
/// passes `u`; falls through to `saturated` past the resolution.
pub(crate) fn inverse_cdf(
    u: f64,
    mean: f64,
    resolution: Option<u32>,
    exact_prob: impl Fn(u32) -> f64,
) -> CountOutcome {
    let mut cdf = 0.0;
    let mut n = 0u32;
    loop {
        if let Some(k) = resolution {
            if n > k {
                return CountOutcome::Saturated;
            }
        }
        let p = exact_prob(n);
        cdf += p;
        // past the mode with vanishing mass left, rounding can keep cdf below u
        if u < cdf || (p == 0.0 && n as f64 > mean) {
            return CountOutcome::Exact(n);
        }
        n += 1;
    }
}

/// `e^{−μ} μⁿ / n!`
pub(crate) fn poisson(mean: f64, n: u32) -> f64 {
    if n == 0 {
        (-mean).exp()
    } else if mean == 0.0 {
        0.0
    } else {
        (n as f64 * mean.ln() - mean - ln_factorial(n as u64)).exp()
    }
}

/// `P(N > k)` for `N ~ Poisson(μ)`, summing whichever side avoids
/// cancellation.
pub(crate) fn poisson_tail(mean: f64, k: u32) -> f64 {
    if k == 0 {
        return -(-mean).exp_m1();
    }
    if mean == 0.0 {
        return 0.0;
    }
    if mean < (k + 1) as f64 {
        let mut term = poisson(mean, k + 1);
        let mut total = 0.0;
        let mut n = k + 1;
        while term > total * 1e-17 {
            total += term;
            n += 1;
            term *= mean / n as f64;
        }
        total
    } else {
        let head: f64 = (0..=k).map(|n| poisson(mean, n)).sum();
        (1.0 - head).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Discrete, DiscreteCDF, Poisson};

    #[test]
    fn dark_vacuum_has_no_counts() {
        for kind in [
            DetectorKind::OnOff,
            DetectorKind::PnrdFinite(3),
            DetectorKind::PnrdInfinite,
        ] {
            let pmf = count_pmf(0.0, &DetectorModel::ideal(kind));
            assert_eq!(pmf.prob(CountOutcome::Exact(0)), 1.0);
            assert_eq!(pmf.prob(CountOutcome::Exact(1)), 0.0);
            assert_eq!(pmf.prob(CountOutcome::Saturated), 0.0);
        }
    }

    #[test]
    fn unit_mean_values() {
        let inf = CountPmf::from_mean(1.0, None);
        assert!((inf.prob(CountOutcome::Exact(0)) - 0.36787944117144233).abs() < 1e-15);
        let fin = CountPmf::from_mean(1.0, Some(2));
        let tail = 1.0 - (-1.0f64).exp() * 2.5;
        assert!((fin.prob(CountOutcome::Saturated) - tail).abs() < 1e-15);
        assert!((fin.prob(CountOutcome::Saturated) - 0.0803013970713942).abs() < 1e-15);
        assert_eq!(fin.prob(CountOutcome::Exact(3)), 0.0);
    }

    #[test]
    fn matches_reference_poisson() {
        for mean in [1e-6, 0.02, 0.7, 3.0, 12.5, 80.0] {
            let reference = Poisson::new(mean).unwrap();
            for k in [0u32, 1, 2, 5, 9] {
                let pmf = CountPmf::from_mean(mean, Some(k));
                for n in 0..=k {
                    let want = reference.pmf(n as u64);
                    let got = pmf.prob(CountOutcome::Exact(n));
                    assert!((got - want).abs() <= 1e-13 * want.max(1e-300), "{mean} {n}");
                }
                let want = reference.sf(k as u64);
                let got = pmf.prob(CountOutcome::Saturated);
                assert!(
                    (got - want).abs() <= 1e-11 * want + 1e-300,
                    "{mean} {k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn total_mass_is_one() {
        for mean in [0.0, 1e-9, 0.3, 4.0, 40.0, 250.0] {
            for k in [0u32, 1, 3, 10] {
                let pmf = CountPmf::from_mean(mean, Some(k));
                let total: f64 = (0..=k)
                    .map(|n| pmf.prob(CountOutcome::Exact(n)))
                    .sum::<f64>()
                    + pmf.prob(CountOutcome::Saturated);
                assert!((total - 1.0).abs() < 1e-12, "{mean} {k}: {total}");
            }
            let pmf = CountPmf::from_mean(mean, None);
            let total: f64 = (0..2000).map(|n| pmf.prob(CountOutcome::Exact(n))).sum();
            assert!((total - 1.0).abs() < 1e-12, "{mean}: {total}");
        }
    }

    #[test]
    fn inverse_cdf_sampling() {
        let all_dark = CountPmf::from_mean(0.0, None);
        for u in [0.0, 0.5, 0.999999] {
            assert_eq!(sample_count(&all_dark, u), CountOutcome::Exact(0));
        }
        let onoff = CountPmf::from_mean(-(0.6f64.ln()), Some(0));
        assert_eq!(onoff.sample(0.59), CountOutcome::Exact(0));
        assert_eq!(onoff.sample(0.61), CountOutcome::Saturated);
        let inf = CountPmf::from_mean(1.0, None);
        assert_eq!(inf.sample(0.5), CountOutcome::Exact(1));
        assert_eq!(inf.sample(0.3), CountOutcome::Exact(0));
        assert_eq!(inf.sample(0.8), CountOutcome::Exact(2));
        assert_eq!(
            CountPmf::from_mean(5.0, Some(2)).sample(0.9),
            CountOutcome::Saturated
        );
        assert!(matches!(inf.sample(1.0 - 1e-17), CountOutcome::Exact(_)));
    }

    #[test]
    fn detector_parsing() {
        assert_eq!(
            "onoff".parse::<DetectorKind>().unwrap(),
            DetectorKind::OnOff
        );
        assert_eq!(
            "pnrd:3".parse::<DetectorKind>().unwrap(),
            DetectorKind::PnrdFinite(3)
        );
        assert_eq!(
            "pnrd:inf".parse::<DetectorKind>().unwrap(),
            DetectorKind::PnrdInfinite
        );
        assert!("pnrd:-1".parse::<DetectorKind>().is_err());
        assert!("apd".parse::<DetectorKind>().is_err());
        for kind in [
            DetectorKind::OnOff,
            DetectorKind::PnrdFinite(7),
            DetectorKind::PnrdInfinite,
        ] {
            assert_eq!(kind.to_string().parse::<DetectorKind>().unwrap(), kind);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DetectorModel::new(DetectorKind::OnOff, 1.2, 0.0).is_err());
        assert!(DetectorModel::new(DetectorKind::OnOff, 0.5, -1e-3).is_err());
        assert!(DetectorModel::new(DetectorKind::OnOff, 0.5, f64::NAN).is_err());
    }
}
