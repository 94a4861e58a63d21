//! Symbol-error-rate estimation, exact enumeration for small instances, and
//! parameter sweeps.
//!
//! Every trial draws from its own ChaCha8 stream keyed by
//! `(master seed, point index)` with the trial index as stream id, so counts
//! do not depend on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{helstrom_error_rate, sql_error_rate, srm_error_rate, HelstromOptions};
use crate::constellation::{alpha_for_ns, qam_for_ns, Constellation};
use crate::error::{Error, Result};
use crate::receiver::{
    bayes_update_in_place, map_decision, AdaptiveReceiver, DetectorKind, DetectorModel,
    ReceiverParams,
};

/// Trials per point when `--trials` is not given.
pub const DEFAULT_TRIALS: u64 = 1_000_000;
/// Trials per point for quick runs.
pub const FAST_TRIALS: u64 = 10_000;
/// Upper bound on `(k + 2)^N` for exact enumeration.
pub const PATH_BUDGET: u128 = 100_000;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub ser: f64,
    pub std_err: f64,
    pub seed: u64,
}

impl SerEstimate {
    pub fn new(errors: u64, trials: u64, seed: u64) -> Self {
        let ser = errors as f64 / trials as f64;
        Self {
            errors,
            trials,
            ser,
            std_err: (ser * (1.0 - ser) / trials as f64).sqrt(),
            seed,
        }
    }
}

/// Which symbol each trial transmits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentSymbols {
    /// Drawn from the priors.
    Random,
    /// Always the given index; diagnostic only.
    Fixed(usize),
}

/// Independent stream for one trial.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn draw_symbol<R: Rng>(priors: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cdf = 0.0;
    for (m, p) in priors.iter().enumerate() {
        cdf += p;
        if u < cdf {
            return m;
        }
    }
    priors.len() - 1
}

/// Monte Carlo SER of the adaptive receiver at sweep point `point`.
pub fn estimate_ser_at(
    rx: &AdaptiveReceiver,
    trials: u64,
    seed: u64,
    point: u64,
    sent: SentSymbols,
) -> Result<SerEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    if let SentSymbols::Fixed(m) = sent {
        if m >= rx.order() {
            return Err(Error::invalid("sent", format!("index {m} out of range")));
        }
    }
    let priors = rx.constellation().priors();
    let chunks = trials.div_ceil(CHUNK);
    let errors: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let end = ((chunk + 1) * CHUNK).min(trials);
            (chunk * CHUNK..end)
                .filter(|&t| {
                    let mut rng = trial_rng(seed, point, t);
                    let m = match sent {
                        SentSymbols::Random => draw_symbol(priors, &mut rng),
                        SentSymbols::Fixed(m) => m,
                    };
                    rx.run_trial(m, &mut rng) != m
                })
                .count() as u64
        })
        .sum();
    Ok(SerEstimate::new(errors, trials, seed))
}

pub fn estimate_ser(
    c: &Constellation,
    params: &ReceiverParams,
    trials: u64,
    seed: u64,
) -> Result<SerEstimate> {
    estimate_ser_at(
        &AdaptiveReceiver::new(c, params)?,
        trials,
        seed,
        0,
        SentSymbols::Random,
    )
}

/// Exact SER by enumerating every count sequence. Requires a finite
/// resolution and at most [`PATH_BUDGET`] paths per symbol.
pub fn exact_ser(c: &Constellation, params: &ReceiverParams) -> Result<f64> {
    let rx = AdaptiveReceiver::new(c, params)?;
    (0..c.order())
        .map(|m| Ok(c.priors()[m] * exact_error_given(&rx, m)?))
        .sum()
}

/// Probability that the receiver decides anything other than `sent`.
pub fn exact_error_given(rx: &AdaptiveReceiver, sent: usize) -> Result<f64> {
    let k = rx.resolution().ok_or(Error::InfiniteResolution)?;
    let n = rx.params().n_partitions;
    let outcomes = k as u128 + 2;
    let paths = outcomes.checked_pow(n as u32).unwrap_or(u128::MAX);
    if paths > PATH_BUDGET {
        return Err(Error::PathBudgetExceeded {
            paths,
            budget: PATH_BUDGET,
        });
    }
    let priors = rx.constellation().priors().to_vec();
    Ok(enumerate(rx, sent, outcomes as usize, n, 0, 1.0, &priors))
}

fn enumerate(
    rx: &AdaptiveReceiver,
    sent: usize,
    outcomes: usize,
    slices_left: usize,
    target: usize,
    path_prob: f64,
    posteriors: &[f64],
) -> f64 {
    if slices_left == 0 {
        return if target == sent { 0.0 } else { path_prob };
    }
    let mut scratch = Vec::new();
    let mut error = 0.0;
    for o in 0..outcomes {
        let p = rx.outcome_prob(target, sent, o);
        if p == 0.0 {
            continue;
        }
        let mut next = posteriors.to_vec();
        bayes_update_in_place(&mut next, rx.likelihood_row(target, o, &mut scratch))
            .expect("outcome with positive probability under the sent hypothesis");
        let decision = map_decision(&next);
        error += enumerate(
            rx,
            sent,
            outcomes,
            slices_left - 1,
            decision,
            path_prob * p,
            &next,
        );
    }
    error
}

/// Device imperfection varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Imperfection {
    Eta,
    Nu,
    Tau,
    Xi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceSettings {
    pub eta: f64,
    pub nu: f64,
    pub tau: f64,
    pub xi: f64,
}

impl DeviceSettings {
    pub const IDEAL: DeviceSettings = DeviceSettings {
        eta: 1.0,
        nu: 0.0,
        tau: 1.0,
        xi: 1.0,
    };

    pub fn with(mut self, axis: Imperfection, value: f64) -> Self {
        match axis {
            Imperfection::Eta => self.eta = value,
            Imperfection::Nu => self.nu = value,
            Imperfection::Tau => self.tau = value,
            Imperfection::Xi => self.xi = value,
        }
        self
    }

    pub fn receiver(&self, n_partitions: usize, kind: DetectorKind) -> Result<ReceiverParams> {
        ReceiverParams::new(
            n_partitions,
            self.tau,
            self.xi,
            DetectorModel::new(kind, self.eta, self.nu)?,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundSelection {
    pub sql: bool,
    pub srm: bool,
    pub helstrom: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub order: usize,
    pub ns_grid: Vec<f64>,
    pub partitions: Vec<usize>,
    pub detectors: Vec<DetectorKind>,
    /// Settings of the imperfections that are not swept.
    pub base: DeviceSettings,
    /// Swept imperfection and its values; `None` runs `base` only.
    pub axis: Option<(Imperfection, Vec<f64>)>,
    pub trials: u64,
    pub seed: u64,
    pub bounds: BoundSelection,
    #[serde(skip)]
    pub helstrom: HelstromOptions,
}

impl SweepSpec {
    fn axis_values(&self) -> Vec<(Option<Imperfection>, DeviceSettings)> {
        match &self.axis {
            Some((axis, values)) => values
                .iter()
                .map(|&v| (Some(*axis), self.base.with(*axis, v)))
                .collect(),
            None => vec![(None, self.base)],
        }
    }

    pub fn row_count(&self) -> usize {
        self.ns_grid.len() * self.partitions.len() * self.detectors.len() * self.axis_values().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bounds {
    pub sql: Option<f64>,
    pub srm: Option<f64>,
    pub helstrom: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub order: usize,
    pub ns: f64,
    pub alpha: f64,
    pub n_partitions: usize,
    pub detector: DetectorKind,
    pub devices: DeviceSettings,
    pub varied: Option<Imperfection>,
    pub estimate: SerEstimate,
    pub bounds: Bounds,
}

/// Bound columns at one mean photon number.
pub fn compute_bounds(
    order: usize,
    ns: f64,
    selection: &BoundSelection,
    helstrom: &HelstromOptions,
) -> Result<Bounds> {
    let c = || qam_for_ns(order, ns);
    Ok(Bounds {
        sql: selection
            .sql
            .then(|| sql_error_rate(order, ns))
            .transpose()?,
        srm: selection.srm.then(|| srm_error_rate(&c()?)).transpose()?,
        helstrom: selection
            .helstrom
            .then(|| helstrom_error_rate(&c()?, helstrom).map(|s| s.p_err))
            .transpose()?,
    })
}

/// Runs every `(ns, N, detector, axis value)` combination in that nesting
/// order. The row position is the RNG point index.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let settings = spec.axis_values();
    let mut rows = Vec::with_capacity(spec.row_count());
    for &ns in &spec.ns_grid {
        let c = qam_for_ns(spec.order, ns)?;
        let alpha = alpha_for_ns(spec.order, ns)?;
        let bounds = compute_bounds(spec.order, ns, &spec.bounds, &spec.helstrom)?;
        for &n in &spec.partitions {
            for &kind in &spec.detectors {
                for (varied, devices) in &settings {
                    let rx = AdaptiveReceiver::new(&c, &devices.receiver(n, kind)?)?;
                    let point = rows.len() as u64;
                    let estimate =
                        estimate_ser_at(&rx, spec.trials, spec.seed, point, SentSymbols::Random)?;
                    rows.push(SweepRow {
                        order: spec.order,
                        ns,
                        alpha,
                        n_partitions: n,
                        detector: kind,
                        devices: *devices,
                        varied: *varied,
                        estimate,
                        bounds,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Named figure configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            "fig7" => Ok(Preset::Fig7),
            other => Err(Error::Usage(format!(
                "unknown preset `{other}` (expected fig3..fig7)"
            ))),
        }
    }
}

/// Devices of the PNR-capability study.
pub const FIG7_DEVICES: DeviceSettings = DeviceSettings {
    eta: 0.723,
    nu: 2.7e-5,
    tau: 0.99,
    xi: 0.995,
};

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
        }
    }

    pub fn spec(self, trials: u64, seed: u64) -> SweepSpec {
        let imperfection_study = |axis: Imperfection, values: Vec<f64>| SweepSpec {
            order: 16,
            ns_grid: (1..=15).map(|k| 2.0 * k as f64).collect(),
            partitions: vec![10, 15, 16, 20],
            detectors: vec![DetectorKind::OnOff, DetectorKind::PnrdInfinite],
            base: DeviceSettings::IDEAL,
            axis: Some((axis, values)),
            trials,
            seed,
            bounds: BoundSelection {
                sql: true,
                srm: true,
                helstrom: false,
            },
            helstrom: HelstromOptions::default(),
        };
        match self {
            Preset::Fig3 => imperfection_study(Imperfection::Eta, vec![1.0, 0.9, 0.8, 0.7]),
            Preset::Fig4 => imperfection_study(Imperfection::Nu, vec![0.0, 1e-4, 1e-3, 1e-2]),
            Preset::Fig5 => imperfection_study(Imperfection::Tau, vec![1.0, 0.9, 0.8, 0.7]),
            Preset::Fig6 => imperfection_study(Imperfection::Xi, vec![1.0, 0.999, 0.99, 0.95]),
            Preset::Fig7 => SweepSpec {
                order: 16,
                ns_grid: (5..=30).map(f64::from).collect(),
                partitions: vec![10],
                detectors: vec![
                    DetectorKind::OnOff,
                    DetectorKind::PnrdFinite(1),
                    DetectorKind::PnrdFinite(2),
                    DetectorKind::PnrdFinite(3),
                    DetectorKind::PnrdFinite(5),
                    DetectorKind::PnrdInfinite,
                ],
                base: FIG7_DEVICES,
                axis: None,
                trials,
                seed,
                bounds: BoundSelection {
                    sql: true,
                    srm: true,
                    helstrom: false,
                },
                helstrom: HelstromOptions::default(),
            },
        }
    }
}
