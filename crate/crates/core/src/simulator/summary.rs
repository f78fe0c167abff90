//! Aggregation across trials.

use alloc::string::String;
use alloc::vec::Vec;

use super::{run_trial, SimError, TrialConfig, TrialResult};
use crate::benchmarks::{solve_lp_discrete, solve_theta_star, LpParams};
use crate::distributions::DiscreteJointSpec;

/// Which optimum regret is measured against.
#[derive(Clone, Debug, PartialEq)]
pub enum Benchmark {
    /// Closed-form per-slot rate with the formula it comes from.
    Analytic { rate: f64, formula: &'static str },
    /// `T * opt_rate` of the balanced threshold policy (constant value).
    ThetaStar,
    /// `T * value_rate` of the discrete-value LP on exact parameters.
    Lp,
    /// A given total.
    Fixed(f64),
    None,
}

impl Benchmark {
    /// Benchmark total for horizon `t`.
    pub fn value(&self, spec: &DiscreteJointSpec, t: u64) -> Result<Option<f64>, SimError> {
        let t = t as f64;
        Ok(match self {
            Benchmark::Analytic { rate, .. } => Some(t * rate),
            Benchmark::ThetaStar => Some(t * solve_theta_star(spec)?.opt_rate),
            Benchmark::Lp => Some(t * solve_lp_discrete(&LpParams::from_spec(spec)).value_rate),
            Benchmark::Fixed(v) => Some(*v),
            Benchmark::None => None,
        })
    }

    /// Short label for reports.
    pub fn label(&self) -> String {
        match self {
            Benchmark::Analytic { formula, .. } => alloc::format!("analytic:{formula}"),
            Benchmark::ThetaStar => "theta_star".into(),
            Benchmark::Lp => "lp".into(),
            Benchmark::Fixed(_) => "fixed".into(),
            Benchmark::None => "none".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub trials: u64,
    pub horizon: u64,
    pub mean_value: f64,
    /// Half-width `1.96 sd / sqrt(n)`; NaN for a single trial.
    pub ci95_value: f64,
    pub mean_wins: f64,
    pub mean_lost: f64,
    pub benchmark_value: Option<f64>,
    pub regret: Option<f64>,
    pub competitive_ratio: Option<f64>,
    pub mean_ccv_final: f64,
    pub max_ccv_max: f64,
    pub violation_fraction: f64,
    /// Mean over trials where `tau_min` occurred.
    pub mean_tau_min: Option<f64>,
    pub trials_without_tau: u64,
    pub learn_anomalies: u64,
}

/// Pairwise sum; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Aggregates results in trial-index order, whatever order they arrive in.
pub fn summarize(results: &[TrialResult], benchmark_value: Option<f64>) -> ExperimentSummary {
    assert!(!results.is_empty(), "summarize needs at least one trial");
    let mut sorted: Vec<&TrialResult> = results.iter().collect();
    sorted.sort_by_key(|r| r.trial_index);
    let n = sorted.len();
    let col = |f: &dyn Fn(&TrialResult) -> f64| sorted.iter().map(|r| f(r)).collect::<Vec<f64>>();

    let values = col(&|r| r.total_value);
    let mean_value = mean(&values);
    let ci95_value = if n > 1 {
        let dev: Vec<f64> = values.iter().map(|x| (x - mean_value) * (x - mean_value)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        1.96 * libm::sqrt(var) / libm::sqrt(n as f64)
    } else {
        f64::NAN
    };
    let taus: Vec<f64> = sorted.iter().filter_map(|r| r.tau_min).map(|t| t as f64).collect();
    let violations = sorted.iter().filter(|r| r.ccv_final > 0.0).count();
    let mean_wins = mean(&col(&|r| r.wins as f64));
    ExperimentSummary {
        trials: n as u64,
        horizon: sorted[0].horizon,
        mean_value,
        ci95_value,
        mean_wins,
        mean_lost: sorted[0].horizon as f64 - mean_wins,
        benchmark_value,
        regret: benchmark_value.map(|b| b - mean_value),
        competitive_ratio: benchmark_value.filter(|&b| b > 0.0).map(|b| mean_value / b),
        mean_ccv_final: mean(&col(&|r| r.ccv_final)),
        max_ccv_max: sorted.iter().map(|r| r.ccv_max).fold(f64::NEG_INFINITY, f64::max),
        violation_fraction: violations as f64 / n as f64,
        mean_tau_min: (!taus.is_empty()).then(|| mean(&taus)),
        trials_without_tau: (n - taus.len()) as u64,
        learn_anomalies: sorted.iter().map(|r| r.learn_anomalies).sum(),
    }
}

/// Runs trials `0..trials` sequentially and summarizes them.
pub fn run_experiment(cfg: &TrialConfig, trials: u64, benchmark: &Benchmark) -> Result<ExperimentSummary, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let bench = benchmark.value(&cfg.spec, cfg.horizon)?;
    let results: Vec<TrialResult> = (0..trials).map(|i| run_trial(cfg, i)).collect();
    Ok(summarize(&results, bench))
}
