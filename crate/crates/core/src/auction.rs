//! The single-slot auction model and the constraint ledger.
//!
//! A slot is described by a value `v` and, for threshold auctions, a hidden
//! threshold `theta`: the bidder wins iff its bid is at least `theta` (and
//! positive), and then pays exactly `theta`. The per-slot constraint
//! contribution is `cv = payment - v * allocation`; the ledger keeps its
//! running sum `ccv` and the slack `margin = max(0, -ccv)`.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("value {0} is not in [0, 1]")]
    Value(f64),
    #[error("bid {0} must be finite and non-negative")]
    Bid(f64),
    #[error("threshold {0} is not in [0, 1]")]
    Threshold(f64),
    #[error("bid grid must be sorted ascending within [0, 1]; offending entry {0}")]
    Grid(f64),
    #[error("allocation step curve: {0}")]
    Curve(&'static str),
}

/// Per-slot ad value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Value(f64);

impl Value {
    pub fn new(v: f64) -> Result<Value, ModelError> {
        if v.is_finite() && (0.0..=1.0).contains(&v) {
            Ok(Value(v))
        } else {
            Err(ModelError::Value(v))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn money(self) -> Money {
        Money::from_f64(self.0)
    }
}

/// A non-negative, finite bid.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Bid(f64);

impl Bid {
    pub const ZERO: Bid = Bid(0.0);
    pub const ONE: Bid = Bid(1.0);

    pub fn new(b: f64) -> Result<Bid, ModelError> {
        if b.is_finite() && b >= 0.0 {
            Ok(Bid(b))
        } else {
            Err(ModelError::Bid(b))
        }
    }

    /// Bid that does not exceed the exact amount `m`. Negative amounts bid 0.
    pub fn from_money_floor(m: Money) -> Bid {
        if m.is_negative() {
            Bid::ZERO
        } else {
            Bid(m.to_f64_floor())
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Bid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Threshold `theta` of a threshold-type allocation/payment pair.
///
/// `theta = 0` is admitted as the degenerate "wins at any positive bid"
/// atom; the allocation at bid 0 is still 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ThresholdAtom(f64);

impl ThresholdAtom {
    pub fn new(theta: f64) -> Result<ThresholdAtom, ModelError> {
        if theta.is_finite() && (0.0..=1.0).contains(&theta) {
            Ok(ThresholdAtom(theta))
        } else {
            Err(ModelError::Threshold(theta))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn money(self) -> Money {
        Money::from_f64(self.0)
    }

    /// Win rule: `b >= theta` and `b > 0`.
    #[inline]
    pub fn wins(self, b: Bid) -> bool {
        b.0 > 0.0 && b.0 >= self.0
    }
}

/// Result of one slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotOutcome {
    pub bid: Bid,
    pub won: bool,
    pub allocation: f64,
    pub payment: Money,
    pub cv: Money,
}

/// Evaluates a threshold auction at bid `b`.
pub fn evaluate_threshold(theta: ThresholdAtom, v: Value, b: Bid) -> SlotOutcome {
    if theta.wins(b) {
        let payment = theta.money();
        SlotOutcome {
            bid: b,
            won: true,
            allocation: 1.0,
            payment,
            cv: payment - v.money(),
        }
    } else {
        SlotOutcome {
            bid: b,
            won: false,
            allocation: 0.0,
            payment: Money::ZERO,
            cv: Money::ZERO,
        }
    }
}

/// A monotone allocation rule with its expected-payment function.
pub trait AllocationRule {
    /// `x(b)`, non-decreasing with `x(0) = 0`.
    fn allocation(&self, b: f64) -> f64;
    /// `p(b)`.
    fn payment(&self, b: f64) -> f64;
    /// `int_0^b x(u) du`.
    fn allocation_integral(&self, b: f64) -> f64;
    /// `b x(b) - int_0^b x(u) du`. Step rules override this with the sum of
    /// `at_i (x_i - x_{i-1})` over breakpoints `at_i <= b`, which is the same
    /// quantity after integrating by parts and carries no cancellation error.
    fn implied_payment(&self, b: f64) -> f64 {
        b * self.allocation(b) - self.allocation_integral(b)
    }
}

impl AllocationRule for ThresholdAtom {
    fn allocation(&self, b: f64) -> f64 {
        if b > 0.0 && b >= self.0 {
            1.0
        } else {
            0.0
        }
    }

    fn payment(&self, b: f64) -> f64 {
        self.0 * self.allocation(b)
    }

    fn allocation_integral(&self, b: f64) -> f64 {
        (b - self.0).max(0.0)
    }

    fn implied_payment(&self, b: f64) -> f64 {
        self.0 * self.allocation(b)
    }
}

/// Right-continuous piecewise-constant allocation curve with a payment level
/// per step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepCurve {
    // (breakpoint, allocation from here on, payment from here on), sorted.
    steps: Vec<(f64, f64, f64)>,
}

impl StepCurve {
    /// Builds a curve with explicit per-step payments.
    pub fn new(steps: Vec<(f64, f64, f64)>) -> Result<StepCurve, ModelError> {
        let mut prev_at = 0.0;
        let mut prev_x = 0.0;
        for (i, &(at, x, p)) in steps.iter().enumerate() {
            if !(at.is_finite() && x.is_finite() && p.is_finite()) {
                return Err(ModelError::Curve("non-finite entry"));
            }
            if at <= 0.0 {
                return Err(ModelError::Curve("breakpoints must be positive so that x(0) = 0"));
            }
            if i > 0 && at <= prev_at {
                return Err(ModelError::Curve("breakpoints must be strictly increasing"));
            }
            if !(0.0..=1.0).contains(&x) || x < prev_x {
                return Err(ModelError::Curve("allocation must be non-decreasing in [0, 1]"));
            }
            if p < 0.0 {
                return Err(ModelError::Curve("payment must be non-negative"));
            }
            prev_at = at;
            prev_x = x;
        }
        Ok(StepCurve { steps })
    }

    /// Builds a curve whose payments satisfy the Myerson identity: the
    /// payment on step `j` is the sum of `at_i * (x_i - x_{i-1})` for `i <= j`.
    pub fn truthful(steps: &[(f64, f64)]) -> Result<StepCurve, ModelError> {
        let mut out = Vec::with_capacity(steps.len());
        let mut prev_x = 0.0;
        let mut pay = 0.0;
        for &(at, x) in steps {
            pay += at * (x - prev_x);
            out.push((at, x, pay));
            prev_x = x;
        }
        StepCurve::new(out)
    }

    fn step_at(&self, b: f64) -> Option<&(f64, f64, f64)> {
        self.steps.iter().rev().find(|s| s.0 <= b)
    }
}

impl AllocationRule for StepCurve {
    fn allocation(&self, b: f64) -> f64 {
        self.step_at(b).map_or(0.0, |s| s.1)
    }

    fn payment(&self, b: f64) -> f64 {
        self.step_at(b).map_or(0.0, |s| s.2)
    }

    fn allocation_integral(&self, b: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &(at, x, _)) in self.steps.iter().enumerate() {
            if at >= b {
                break;
            }
            let end = self.steps.get(i + 1).map_or(b, |n| n.0.min(b));
            acc += x * (end - at);
        }
        acc
    }

    fn implied_payment(&self, b: f64) -> f64 {
        let mut prev_x = 0.0;
        let mut pay = 0.0;
        for &(at, x, _) in self.steps.iter().take_while(|s| s.0 <= b) {
            pay += at * (x - prev_x);
            prev_x = x;
        }
        pay
    }
}

/// Largest Myerson residual `|p(b) - (b x(b) - int_0^b x)|` over `grid`.
pub fn check_myerson<R: AllocationRule + ?Sized>(rule: &R, grid: &[f64]) -> Result<f64, ModelError> {
    let mut prev = 0.0;
    for &b in grid {
        if !b.is_finite() || !(0.0..=1.0).contains(&b) || b < prev {
            return Err(ModelError::Grid(b));
        }
        prev = b;
    }
    Ok(grid
        .iter()
        .map(|&b| {
            (rule.payment(b) - rule.implied_payment(b)).abs()
        })
        .fold(0.0, f64::max))
}

/// Running CCV / Margin ledger.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Accounts {
    ccv: Money,
    margin: Money,
    slot_index: u64,
}

impl Accounts {
    pub fn new() -> Accounts {
        Accounts::default()
    }

    pub fn ccv(&self) -> Money {
        self.ccv
    }

    pub fn margin(&self) -> Money {
        self.margin
    }

    pub fn slot_index(&self) -> u64 {
        self.slot_index
    }

    /// Adds one slot's contribution in place.
    pub fn record(&mut self, cv: Money) {
        self.ccv += cv;
        self.margin = (-self.ccv).max(Money::ZERO);
        self.slot_index += 1;
    }
}

/// Pure form of [`Accounts::record`].
pub fn update_accounts(acc: Accounts, outcome: &SlotOutcome) -> Accounts {
    let mut next = acc;
    next.record(outcome.cv);
    next
}
