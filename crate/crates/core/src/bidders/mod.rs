//! Online bidding algorithms.
//!
//! Every algorithm runs as a [`BidderSession`]: for each slot the caller
//! passes the value to [`BidderSession::bid`], runs the auction, and hands
//! the outcome back through [`BidderSession::observe`].

mod learn;

pub use learn::{ClassTally, LearnPhase, LearnPolicy, LearnState};

use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::auction::{Accounts, Bid, SlotOutcome, ThresholdAtom, Value};
use crate::money::Money;
use crate::rng::{SeededSampler, ALGO_STREAM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Bid the value.
    As,
    /// Bid value plus the whole margin.
    Ab,
    /// Bid value plus margin over `sqrt(T)`.
    Ac,
    /// Primal-dual: `v + v / lambda`, `lambda = exp(alpha * CCV)`.
    Apd,
    /// Learn the light parameters on the first half, then follow the LP.
    Learn,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::As, Algorithm::Ab, Algorithm::Ac, Algorithm::Apd, Algorithm::Learn];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::As => "as",
            Algorithm::Ab => "ab",
            Algorithm::Ac => "ac",
            Algorithm::Apd => "apd",
            Algorithm::Learn => "learn",
        }
    }

    pub fn default_feedback(self) -> FeedbackMode {
        match self {
            Algorithm::Learn => FeedbackMode::Full,
            _ => FeedbackMode::Bandit,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BidderError;

    fn from_str(s: &str) -> Result<Algorithm, BidderError> {
        let lower = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| BidderError::UnknownAlgorithm(s.into()))
    }
}

/// What the bidder learns after each slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeedbackMode {
    /// Allocation and payment at the submitted bid only.
    Bandit,
    /// Also the slot's threshold.
    Full,
}

impl FromStr for FeedbackMode {
    type Err = BidderError;

    fn from_str(s: &str) -> Result<FeedbackMode, BidderError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bandit" => Ok(FeedbackMode::Bandit),
            "full" => Ok(FeedbackMode::Full),
            _ => Err(BidderError::UnknownFeedback(s.into())),
        }
    }
}

impl fmt::Display for FeedbackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeedbackMode::Bandit => "bandit",
            FeedbackMode::Full => "full",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feedback {
    pub allocation: f64,
    pub payment: Money,
    pub revealed_theta: Option<ThresholdAtom>,
}

impl Feedback {
    pub fn new(outcome: &SlotOutcome, theta: ThresholdAtom, mode: FeedbackMode) -> Feedback {
        Feedback {
            allocation: outcome.allocation,
            payment: outcome.payment,
            revealed_theta: (mode == FeedbackMode::Full).then_some(theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BidderError {
    #[error("unknown algorithm '{0}' (expected as, ab, ac, apd or learn)")]
    UnknownAlgorithm(alloc::string::String),
    #[error("unknown feedback mode '{0}' (expected bandit or full)")]
    UnknownFeedback(alloc::string::String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("learn needs full feedback: the cost above the value is not observable otherwise")]
    LearnNeedsFullFeedback,
    #[error("alpha must be finite and non-negative, got {0}")]
    Alpha(f64),
}

/// Per-session knobs. `None` picks the default.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SessionOptions {
    pub feedback: Option<FeedbackMode>,
    pub alpha: Option<f64>,
    pub master_seed: u64,
    pub trial_index: u64,
}

/// Exponent clamp for `lambda`.
const LAMBDA_EXP_CLAMP: f64 = 50.0;

#[derive(Clone, Debug)]
pub struct BidderSession {
    algorithm: Algorithm,
    horizon: u64,
    sqrt_horizon: f64,
    learn_until: u64,
    alpha: f64,
    feedback: FeedbackMode,
    accounts: Accounts,
    learn: Option<LearnState>,
    rng: SeededSampler,
}

impl BidderSession {
    pub fn new(algorithm: Algorithm, horizon: u64, options: SessionOptions) -> Result<BidderSession, BidderError> {
        if horizon == 0 {
            return Err(BidderError::ZeroHorizon);
        }
        let feedback = options.feedback.unwrap_or(algorithm.default_feedback());
        if algorithm == Algorithm::Learn && feedback != FeedbackMode::Full {
            return Err(BidderError::LearnNeedsFullFeedback);
        }
        let sqrt_horizon = libm::sqrt(horizon as f64);
        let alpha = options.alpha.unwrap_or(1.0 / sqrt_horizon);
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(BidderError::Alpha(alpha));
        }
        let learn_until = horizon / 2;
        let learn = (algorithm == Algorithm::Learn).then(|| {
            let mut s = LearnState::new();
            if learn_until == 0 {
                s.commit();
            }
            s
        });
        Ok(BidderSession {
            algorithm,
            horizon,
            sqrt_horizon,
            learn_until,
            alpha,
            feedback,
            accounts: Accounts::new(),
            learn,
            rng: SeededSampler::new(options.master_seed, options.trial_index, ALGO_STREAM),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn feedback_mode(&self) -> FeedbackMode {
        self.feedback
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn accounts(&self) -> &Accounts {
        &self.accounts
    }

    pub fn learn_state(&self) -> Option<&LearnState> {
        self.learn.as_ref()
    }

    /// `exp(alpha * CCV)` with the exponent clamped to `[-50, 50]`.
    pub fn lambda(&self) -> f64 {
        let x = (self.alpha * self.accounts.ccv().to_f64()).clamp(-LAMBDA_EXP_CLAMP, LAMBDA_EXP_CLAMP);
        libm::exp(x)
    }

    /// Bid for slot `t` (1-based) given its value.
    pub fn bid(&mut self, v: Value, t: u64) -> Bid {
        debug_assert!(t >= 1 && t <= self.horizon, "slot {t} outside 1..={}", self.horizon);
        match self.algorithm {
            Algorithm::As => value_bid(v),
            Algorithm::Ab => Bid::from_money_floor(v.money() + self.accounts.margin()),
            Algorithm::Ac => Bid::from_money_floor(v.money() + self.ac_overbid()),
            Algorithm::Apd => {
                let x = v.get();
                Bid::new(x + x / self.lambda()).unwrap_or(Bid::ONE)
            }
            Algorithm::Learn => self.learn_bid(v, t),
        }
    }

    /// `Margin / sqrt(T)`, rounded down.
    pub fn ac_overbid(&self) -> Money {
        let m = self.accounts.margin();
        if m.is_positive() {
            Money::from_f64(m.to_f64() / self.sqrt_horizon)
        } else {
            Money::ZERO
        }
    }

    fn learn_bid(&mut self, v: Value, t: u64) -> Bid {
        if t <= self.learn_until {
            return value_bid(v);
        }
        let state = self.learn.as_mut().expect("learn session");
        match state.policy().and_then(|p| p.q(v)) {
            None => {
                state.note_anomaly();
                value_bid(v)
            }
            Some(q) if q >= 1.0 => Bid::ONE,
            Some(q) if q <= 0.0 => value_bid(v),
            Some(q) => {
                if self.rng.coin(q) {
                    Bid::ONE
                } else {
                    value_bid(v)
                }
            }
        }
    }

    /// Feeds back the outcome of the current slot.
    pub fn observe(&mut self, v: Value, _b: Bid, fb: &Feedback) {
        let cv = if fb.allocation > 0.0 {
            fb.payment - Money::from_f64(v.get() * fb.allocation)
        } else {
            fb.payment
        };
        self.accounts.record(cv);
        let t = self.accounts.slot_index();
        if let Some(state) = self.learn.as_mut() {
            if t <= self.learn_until {
                state.record(v, fb.revealed_theta);
                if t == self.learn_until {
                    state.commit();
                }
            }
        }
    }
}

fn value_bid(v: Value) -> Bid {
    Bid::new(v.get()).expect("values are valid bids")
}
