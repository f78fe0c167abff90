//! Trials, aggregation, scaling fits and the bid-concentration probe.

mod fit;
mod summary;
mod trial;

pub use fit::{fit_exponent, PowerFit};
pub use summary::{pairwise_sum, run_experiment, summarize, Benchmark, ExperimentSummary};
pub use trial::{
    run_trial, run_trial_observed, ClassWins, ProbeConfig, SlotRecord, TrialConfig, TrialResult,
    WinCount,
};

use alloc::vec::Vec;

use thiserror::Error;

use crate::benchmarks::BenchError;
use crate::bidders::{Algorithm, BidderError};
use crate::distributions::DiscreteJointSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Bidder(#[from] BidderError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("fit: {0}")]
    Fit(&'static str),
    #[error("the probe needs a constant-value spec")]
    NeedsConstantValue,
}

/// Pooled below-band statistics over slots `t >= tau_min`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationReport {
    pub below_band: u64,
    pub probed_slots: u64,
    /// `below_band / probed_slots`; `None` if no trial reached `theta*`.
    pub fraction: Option<f64>,
    pub mean_tau_min: Option<f64>,
    /// Trials whose bid never reached `theta*`. Their slots are not pooled.
    pub trials_without_tau: u64,
}

/// Pools trials that carry band counts.
pub fn concentration_from_trials(results: &[TrialResult]) -> ConcentrationReport {
    let mut sorted: Vec<&TrialResult> = results.iter().collect();
    sorted.sort_by_key(|r| r.trial_index);
    let below_band = sorted.iter().map(|r| r.below_band_count).sum();
    let probed_slots: u64 = sorted.iter().map(|r| r.probed_slots).sum();
    let taus: Vec<f64> = sorted.iter().filter_map(|r| r.tau_min).map(|t| t as f64).collect();
    ConcentrationReport {
        below_band,
        probed_slots,
        fraction: (probed_slots > 0).then(|| below_band as f64 / probed_slots as f64),
        mean_tau_min: (!taus.is_empty()).then(|| pairwise_sum(&taus) / taus.len() as f64),
        trials_without_tau: (sorted.len() - taus.len()) as u64,
    }
}

/// Runs `trials` sequential AC trials with the band probe at `delta`.
pub fn concentration_probe(
    spec: &DiscreteJointSpec,
    horizon: u64,
    delta: f64,
    trials: u64,
    master_seed: u64,
) -> Result<ConcentrationReport, SimError> {
    if spec.constant_value().is_none() {
        return Err(SimError::NeedsConstantValue);
    }
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let cfg = TrialConfig::new(spec.clone(), Algorithm::Ac, horizon, master_seed)?.with_band_delta(delta);
    let results: Vec<TrialResult> = (0..trials).map(|i| run_trial(&cfg, i)).collect();
    Ok(concentration_from_trials(&results))
}
