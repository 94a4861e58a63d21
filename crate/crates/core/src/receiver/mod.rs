//! One trial of the adaptive displacement-feedback receiver.
//!
//! The symbol interval is cut into `N` equal slices. In each slice the
//! signal is displaced by a local field that nulls the current MAP
//! hypothesis, the residual light is counted, and the posterior over all
//! hypotheses is updated with the count likelihoods. The MAP hypothesis after
//! the last slice is the decision.

mod detector;

pub use detector::{count_pmf, sample_count, CountOutcome, CountPmf, DetectorKind, DetectorModel};

use rand::Rng;

use crate::constellation::{ComplexAmplitude, Constellation};
use crate::error::{Error, Result};
use detector::inverse_cdf;

/// Longest table of precomputed exact-count likelihoods for
/// infinite-resolution detectors; rarer counts are evaluated on demand.
const MAX_TABLE_COUNTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverParams {
    pub n_partitions: usize,
    /// Beam-splitter transmittance.
    pub tau: f64,
    /// Mode-match factor; 1 is perfect interference.
    pub xi: f64,
    pub detector: DetectorModel,
}

impl ReceiverParams {
    pub fn new(n_partitions: usize, tau: f64, xi: f64, detector: DetectorModel) -> Result<Self> {
        let params = Self {
            n_partitions,
            tau,
            xi,
            detector,
        };
        params.validate()?;
        Ok(params)
    }

    /// `η = 1, ν = 0, τ = 1, ξ = 1`
    pub fn ideal(n_partitions: usize, kind: DetectorKind) -> Self {
        Self {
            n_partitions,
            tau: 1.0,
            xi: 1.0,
            detector: DetectorModel::ideal(kind),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_partitions == 0 {
            return Err(Error::invalid("n_partitions", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::invalid(
                "tau",
                format!("must lie in [0, 1], got {}", self.tau),
            ));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::invalid(
                "xi",
                format!("must lie in [0, 1], got {}", self.xi),
            ));
        }
        DetectorModel::new(self.detector.kind, self.detector.eta, self.detector.nu).map(|_| ())
    }
}

/// `φ_m / √N`
pub fn slice_amplitude(c: &Constellation, m: usize, n_partitions: usize) -> ComplexAmplitude {
    c.point(m) / (n_partitions as f64).sqrt()
}

/// Mean photon number reaching the detector after displacing `phi_slice` by
/// `beta`: `(1 − ξ)·τ·|φ|² + ξ·|√τ·φ − β|²`.
pub fn displaced_intensity(
    phi_slice: ComplexAmplitude,
    beta: ComplexAmplitude,
    tau: f64,
    xi: f64,
) -> f64 {
    (1.0 - xi) * tau * phi_slice.norm_sqr() + xi * (tau.sqrt() * phi_slice - beta).norm_sqr()
}

/// Local oscillator aimed at nulling hypothesis `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalField {
    pub target: usize,
    /// `√τ·φ_target / √N`
    pub amplitude: ComplexAmplitude,
}

pub fn local_field(c: &Constellation, m_star: usize, tau: f64, n_partitions: usize) -> LocalField {
    LocalField {
        target: m_star,
        amplitude: tau.sqrt() * slice_amplitude(c, m_star, n_partitions),
    }
}

/// Mean count for hypothesis `m` while the field nulls `target`.
///
/// With `β = √τ·φ_target/√N` the intensity factors as
/// `τ·[(1 − ξ)|φ_m|² + ξ|φ_m − φ_target|²]/N`, so the mean depends on the
/// efficiency and the transmittance only through the product `η·τ`.
pub fn hypothesis_mean(c: &Constellation, m: usize, target: usize, params: &ReceiverParams) -> f64 {
    let n = params.n_partitions;
    let phi = slice_amplitude(c, m, n);
    let nulled = slice_amplitude(c, target, n);
    let unscaled = (1.0 - params.xi) * phi.norm_sqr() + params.xi * (phi - nulled).norm_sqr();
    params.detector.nu + (params.detector.eta * params.tau) * unscaled
}

/// Count distribution in one slice when `sent` is transmitted and the local
/// field nulls `target`.
pub fn slice_pmf(
    c: &Constellation,
    sent: usize,
    target: usize,
    params: &ReceiverParams,
) -> CountPmf {
    CountPmf::from_mean(
        hypothesis_mean(c, sent, target, params),
        params.detector.kind.resolution(),
    )
}

/// `P(outcome | m)` for every hypothesis `m` under the applied field.
pub fn likelihoods(
    c: &Constellation,
    field: &LocalField,
    outcome: CountOutcome,
    params: &ReceiverParams,
) -> Vec<f64> {
    (0..c.order())
        .map(|m| slice_pmf(c, m, field.target, params).prob(outcome))
        .collect()
}

/// Bayes rule with renormalization.
pub fn bayes_update(priors: &[f64], like: &[f64]) -> Result<Vec<f64>> {
    let mut post = priors.to_vec();
    bayes_update_in_place(&mut post, like)?;
    Ok(post)
}

pub fn bayes_update_in_place(probs: &mut [f64], like: &[f64]) -> Result<()> {
    debug_assert_eq!(probs.len(), like.len());
    let mut total = 0.0;
    for (p, l) in probs.iter_mut().zip(like) {
        *p *= l;
        total += *p;
    }
    if !(total > 0.0) {
        return Err(Error::DegenerateEvidence);
    }
    let inv = 1.0 / total;
    probs.iter_mut().for_each(|p| *p *= inv);
    Ok(())
}

/// Index of the largest entry; ties go to the lowest index.
pub fn map_decision(posteriors: &[f64]) -> usize {
    let mut best = 0;
    for (m, &p) in posteriors.iter().enumerate().skip(1) {
        if p > posteriors[best] {
            best = m;
        }
    }
    best
}

/// Snapshot after one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialState {
    /// 1-based slice index.
    pub slice_index: usize,
    pub beta: ComplexAmplitude,
    pub outcome: CountOutcome,
    pub priors: Vec<f64>,
    pub posteriors: Vec<f64>,
    pub m_star: usize,
}

/// Receiver compiled for a fixed constellation and parameter set. Holds the
/// per-field, per-outcome likelihood vectors so a trial only samples and
/// multiplies.
#[derive(Debug, Clone)]
pub struct AdaptiveReceiver {
    constellation: Constellation,
    params: ReceiverParams,
    resolution: Option<u32>,
    order: usize,
    /// `means[target * M + m]`
    means: Vec<f64>,
    /// `table[target][outcome * M + m]`, outcomes in sampling order.
    table: Vec<Vec<f64>>,
    tabled_outcomes: usize,
}

impl AdaptiveReceiver {
    pub fn new(c: &Constellation, params: &ReceiverParams) -> Result<Self> {
        params.validate()?;
        let order = c.order();
        let resolution = params.detector.kind.resolution();
        let means: Vec<f64> = (0..order)
            .flat_map(|t| (0..order).map(move |m| (t, m)))
            .map(|(t, m)| hypothesis_mean(c, m, t, params))
            .collect();
        let tabled_outcomes = match resolution {
            Some(k) => k as usize + 2,
            None => {
                let top = means.iter().copied().fold(0.0, f64::max);
                ((top + 12.0 * top.sqrt() + 25.0).ceil() as usize).min(MAX_TABLE_COUNTS)
            }
        };
        let table = (0..order)
            .map(|t| {
                let mut row = Vec::with_capacity(tabled_outcomes * order);
                for o in 0..tabled_outcomes {
                    let outcome = CountOutcome::from_index(o, resolution);
                    row.extend((0..order).map(|m| {
                        CountPmf::from_mean(means[t * order + m], resolution).prob(outcome)
                    }));
                }
                row
            })
            .collect();
        Ok(Self {
            constellation: c.clone(),
            params: *params,
            resolution,
            order,
            means,
            table,
            tabled_outcomes,
        })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn params(&self) -> &ReceiverParams {
        &self.params
    }

    pub fn resolution(&self) -> Option<u32> {
        self.resolution
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mean(&self, target: usize, m: usize) -> f64 {
        self.means[target * self.order + m]
    }

    /// Likelihood vector of outcome index `o` while nulling `target`.
    /// Returns a borrowed table row when available, else fills `scratch`.
    pub(crate) fn likelihood_row<'a>(
        &'a self,
        target: usize,
        o: usize,
        scratch: &'a mut Vec<f64>,
    ) -> &'a [f64] {
        if o < self.tabled_outcomes {
            &self.table[target][o * self.order..(o + 1) * self.order]
        } else {
            let outcome = CountOutcome::from_index(o, self.resolution);
            scratch.clear();
            scratch.extend(
                (0..self.order).map(|m| {
                    CountPmf::from_mean(self.mean(target, m), self.resolution).prob(outcome)
                }),
            );
            scratch
        }
    }

    /// Probability of outcome index `o` when `sent` is transmitted.
    pub(crate) fn outcome_prob(&self, target: usize, sent: usize, o: usize) -> f64 {
        if o < self.tabled_outcomes {
            self.table[target][o * self.order + sent]
        } else {
            CountPmf::from_mean(self.mean(target, sent), self.resolution)
                .prob(CountOutcome::from_index(o, self.resolution))
        }
    }

    pub(crate) fn sample_outcome(&self, target: usize, sent: usize, u: f64) -> usize {
        let mean = self.mean(target, sent);
        inverse_cdf(u, mean, self.resolution, |n| {
            self.outcome_prob(target, sent, n as usize)
        })
        .index(self.resolution)
    }

    /// Runs all slices and returns the final decision.
    pub fn run_trial<R: Rng + ?Sized>(&self, sent: usize, rng: &mut R) -> usize {
        let mut posteriors = self.constellation.priors().to_vec();
        let mut scratch = Vec::new();
        let mut target = 0;
        for _ in 0..self.params.n_partitions {
            let o = self.sample_outcome(target, sent, rng.random::<f64>());
            let like = self.likelihood_row(target, o, &mut scratch);
            bayes_update_in_place(&mut posteriors, like)
                .expect("sampled outcome has positive likelihood under the sent hypothesis");
            target = map_decision(&posteriors);
        }
        target
    }

    /// Same draws as [`run_trial`](Self::run_trial), recording every slice.
    pub fn run_trial_traced<R: Rng + ?Sized>(
        &self,
        sent: usize,
        rng: &mut R,
    ) -> (usize, Vec<TrialState>) {
        let c = &self.constellation;
        let n = self.params.n_partitions;
        let mut posteriors = c.priors().to_vec();
        let mut field = local_field(c, 0, self.params.tau, n);
        let mut trace = Vec::with_capacity(n);
        for j in 1..=n {
            let pmf = slice_pmf(c, sent, field.target, &self.params);
            let outcome = pmf.sample(rng.random::<f64>());
            let like = likelihoods(c, &field, outcome, &self.params);
            let priors = posteriors.clone();
            bayes_update_in_place(&mut posteriors, &like)
                .expect("sampled outcome has positive likelihood under the sent hypothesis");
            let m_star = map_decision(&posteriors);
            trace.push(TrialState {
                slice_index: j,
                beta: field.amplitude,
                outcome,
                priors,
                posteriors: posteriors.clone(),
                m_star,
            });
            field = local_field(c, m_star, self.params.tau, n);
        }
        (field.target, trace)
    }
}

/// One adaptive detection of symbol `sent`.
pub fn simulate_trial<R: Rng + ?Sized>(
    c: &Constellation,
    sent: usize,
    params: &ReceiverParams,
    rng: &mut R,
) -> Result<usize> {
    if sent >= c.order() {
        return Err(Error::invalid("sent", format!("index {sent} out of range")));
    }
    Ok(AdaptiveReceiver::new(c, params)?.run_trial(sent, rng))
}

#[cfg(test)]
mod tests;
