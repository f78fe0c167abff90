//! Auto-bidding under a strict return-on-spend constraint (ROSC).
//!
//! This crate is `no_std` (it needs `alloc`) and holds everything that is
//! pure computation:
//!
//! - [`auction`]: threshold allocation/payment evaluation, the Myerson
//!   residual check, and the CV/CCV/Margin ledger.
//! - [`distributions`]: finite i.i.d. joint laws over `(value, threshold)`,
//!   the canned adversarial constructions, and their analytic moments.
//! - [`bidders`]: the online bidding algorithms behind one
//!   observe → bid → feedback contract.
//! - [`benchmarks`]: offline optimum solvers and brute-force oracles.
//! - [`simulator`]: seeded trials, aggregation and scaling-law fits.
//!
//! IO, parallel execution and the command line live in the `rosbid` crate.

#![no_std]

extern crate alloc;

pub mod auction;
pub mod benchmarks;
pub mod bidders;
pub mod distributions;
mod money;
pub mod rng;
pub mod simulator;

pub use auction::{Accounts, Bid, SlotOutcome, ThresholdAtom, Value};
pub use bidders::{Algorithm, BidderSession, Feedback, FeedbackMode};
pub use distributions::{Construction, ConstructionParams, DiscreteJointSpec};
pub use money::Money;
pub use rng::SeededSampler;
