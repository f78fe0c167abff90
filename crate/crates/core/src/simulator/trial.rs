//! One seeded trial.

use crate::auction::{evaluate_threshold, Bid, SlotOutcome, ThresholdAtom, Value};
use crate::benchmarks::solve_theta_star;
use crate::bidders::{Algorithm, BidderError, BidderSession, Feedback, FeedbackMode, SessionOptions};
use crate::distributions::DiscreteJointSpec;
use crate::money::Money;
use crate::rng::{SeededSampler, ENV_STREAM};

use super::SimError;

/// Probe settings. Probes are active only when `theta_star` is set.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ProbeConfig {
    pub theta_star: Option<f64>,
    /// Band width for the concentration count: a slot is below the band
    /// when its bid is under `(1 - delta) theta*`.
    pub band_delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub spec: DiscreteJointSpec,
    pub algorithm: Algorithm,
    pub horizon: u64,
    pub master_seed: u64,
    pub feedback: FeedbackMode,
    pub alpha: Option<f64>,
    pub probes: ProbeConfig,
}

impl TrialConfig {
    /// Config with default feedback and, for constant-value specs, `theta*`
    /// filled in for the probes.
    pub fn new(
        spec: DiscreteJointSpec,
        algorithm: Algorithm,
        horizon: u64,
        master_seed: u64,
    ) -> Result<TrialConfig, SimError> {
        let theta_star = solve_theta_star(&spec).ok().map(|s| s.theta_star);
        let cfg = TrialConfig {
            spec,
            algorithm,
            horizon,
            master_seed,
            feedback: algorithm.default_feedback(),
            alpha: None,
            probes: ProbeConfig { theta_star, band_delta: None },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_feedback(mut self, mode: FeedbackMode) -> Result<TrialConfig, SimError> {
        self.feedback = mode;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<TrialConfig, SimError> {
        self.alpha = Some(alpha);
        self.validate()?;
        Ok(self)
    }

    pub fn with_band_delta(mut self, delta: f64) -> TrialConfig {
        self.probes.band_delta = Some(delta);
        self
    }

    fn session(&self, trial_index: u64) -> Result<BidderSession, BidderError> {
        let opts = SessionOptions {
            feedback: Some(self.feedback),
            alpha: self.alpha,
            master_seed: self.master_seed,
            trial_index,
        };
        BidderSession::new(self.algorithm, self.horizon, opts)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.session(0).map(|_| ()).map_err(SimError::from)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WinCount {
    pub offered: u64,
    pub won: u64,
}

/// Slots with `t >= tau_min`, split by `theta` against `theta*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassWins {
    pub below: WinCount,
    pub at: WinCount,
    pub above: WinCount,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub trial_index: u64,
    pub horizon: u64,
    pub total_value: f64,
    pub wins: u64,
    pub ccv_final: f64,
    /// Largest `CCV(t)` over `t = 1..=T`.
    pub ccv_max: f64,
    /// First slot whose bid reached `theta*`.
    pub tau_min: Option<u64>,
    pub class_wins: ClassWins,
    pub below_band_count: u64,
    /// Slots with `t >= tau_min`.
    pub probed_slots: u64,
    pub learn_anomalies: u64,
}

impl TrialResult {
    pub fn lost(&self) -> u64 {
        self.horizon - self.wins
    }
}

/// Everything known about one slot after it has been played.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotRecord {
    pub t: u64,
    pub v: Value,
    pub theta: ThresholdAtom,
    pub bid: Bid,
    pub outcome: SlotOutcome,
    pub margin_before: Money,
    pub ccv_after: Money,
}

pub fn run_trial(cfg: &TrialConfig, trial_index: u64) -> TrialResult {
    run_trial_observed(cfg, trial_index, |_| {})
}

/// [`run_trial`] with a callback after every slot.
pub fn run_trial_observed(cfg: &TrialConfig, trial_index: u64, mut on_slot: impl FnMut(&SlotRecord)) -> TrialResult {
    let mut env = SeededSampler::new(cfg.master_seed, trial_index, ENV_STREAM);
    let mut session = cfg.session(trial_index).expect("validated config");
    let atoms = cfg.spec.atoms();
    let star = cfg.probes.theta_star;
    let band = match (star, cfg.probes.band_delta) {
        (Some(s), Some(d)) => Some((1.0 - d) * s),
        _ => None,
    };

    let mut value = Money::ZERO;
    let mut wins = 0u64;
    let mut ccv_max: Option<Money> = None;
    let mut tau_min = None;
    let mut class_wins = ClassWins::default();
    let mut below_band_count = 0u64;
    let mut probed_slots = 0u64;

    for t in 1..=cfg.horizon {
        let atom = &atoms[cfg.spec.index_for(env.uniform())];
        let (v, theta) = (atom.v, atom.theta);
        let margin_before = session.accounts().margin();
        let bid = session.bid(v, t);
        let outcome = evaluate_threshold(theta, v, bid);
        session.observe(v, bid, &Feedback::new(&outcome, theta, cfg.feedback));

        if outcome.won {
            wins += 1;
            value += v.money();
        }
        let ccv = session.accounts().ccv();
        ccv_max = Some(ccv_max.map_or(ccv, |m| m.max(ccv)));

        if let Some(s) = star {
            if tau_min.is_none() && bid.get() >= s {
                tau_min = Some(t);
            }
            if tau_min.is_some() {
                probed_slots += 1;
                let th = theta.get();
                let class = if th < s {
                    &mut class_wins.below
                } else if th == s {
                    &mut class_wins.at
                } else {
                    &mut class_wins.above
                };
                class.offered += 1;
                class.won += outcome.won as u64;
                if band.is_some_and(|b| bid.get() < b) {
                    below_band_count += 1;
                }
            }
        }
        on_slot(&SlotRecord { t, v, theta, bid, outcome, margin_before, ccv_after: ccv });
    }

    TrialResult {
        trial_index,
        horizon: cfg.horizon,
        total_value: value.to_f64(),
        wins,
        ccv_final: session.accounts().ccv().to_f64(),
        ccv_max: ccv_max.unwrap_or(Money::ZERO).to_f64(),
        tau_min,
        class_wins,
        below_band_count,
        probed_slots,
        learn_anomalies: session.learn_state().map_or(0, |s| s.anomalies()),
    }
}
