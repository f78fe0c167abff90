//! Parallel trial execution.
//!
//! Trials are independent and are merged by trial index before anything is
//! aggregated, so the worker count never changes a result.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use rosbid_core::simulator::{
    concentration_from_trials, run_trial, summarize, Benchmark, ConcentrationReport, ExperimentSummary, SimError,
    TrialConfig, TrialResult,
};

pub struct Runner {
    pool: ThreadPool,
}

impl Runner {
    /// `workers = 0` uses one thread per available core.
    pub fn new(workers: usize) -> Runner {
        let pool = ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
        Runner { pool }
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Results for trials `0..trials`, in index order.
    pub fn trials(&self, cfg: &TrialConfig, trials: u64) -> Vec<TrialResult> {
        self.pool.install(|| (0..trials).into_par_iter().map(|i| run_trial(cfg, i)).collect())
    }

    pub fn experiment(
        &self,
        cfg: &TrialConfig,
        trials: u64,
        benchmark: &Benchmark,
    ) -> Result<ExperimentSummary, SimError> {
        if trials == 0 {
            return Err(SimError::NoTrials);
        }
        let bench = benchmark.value(&cfg.spec, cfg.horizon)?;
        Ok(summarize(&self.trials(cfg, trials), bench))
    }

    /// Band probe for AC at `delta`. `cfg` must carry `theta*`.
    pub fn concentration(&self, cfg: &TrialConfig, delta: f64, trials: u64) -> Result<ConcentrationReport, SimError> {
        if trials == 0 {
            return Err(SimError::NoTrials);
        }
        if cfg.probes.theta_star.is_none() {
            return Err(SimError::NeedsConstantValue);
        }
        let cfg = cfg.clone().with_band_delta(delta);
        Ok(concentration_from_trials(&self.trials(&cfg, trials)))
    }
}
