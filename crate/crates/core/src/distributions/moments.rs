//! Exact expectations over a joint law.

use alloc::vec::Vec;

use super::{DiscreteJointSpec, DistError};
use crate::auction::Bid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentCase {
    /// `mu_L + mu_R <= 0`: winning every slot would violate the constraint.
    I,
    /// `mu_L + mu_R > 0`: bidding 1 always is feasible.
    II,
}

/// How slots are split around `theta*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conditioning {
    /// below: `theta < theta*`, above: `theta >= theta*`.
    Strict,
    /// below: `theta <= theta*`, above: `theta > theta*`.
    Weak,
}

impl Conditioning {
    fn below(self, theta: f64, star: f64) -> bool {
        match self {
            Conditioning::Strict => theta < star,
            Conditioning::Weak => theta <= star,
        }
    }
}

/// Mass and mean gap `E[v - theta | theta]` at one threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdMoment {
    pub theta: f64,
    pub prob: f64,
    pub mean_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub mu_l: f64,
    pub mu_r: f64,
    pub thresholds: Vec<ThresholdMoment>,
    /// `mu_L + mu_r_below`; `None` when `mu_r_below` is.
    pub delta_drift: Option<f64>,
    /// `E[1{v < theta}(v - theta) | theta < theta*]`.
    pub mu_r_below: Option<f64>,
    /// `E[1{v < theta}(v - theta) | theta >= theta*]`.
    pub mu_r_above: Option<f64>,
    pub case: MomentCase,
}

/// Conditional mean of the negative part over the atoms selected by `keep`,
/// or `None` for an empty event.
fn conditional_negative(spec: &DiscreteJointSpec, keep: impl Fn(f64) -> bool) -> Option<f64> {
    let mut mass = 0.0;
    let mut sum = 0.0;
    for a in spec.atoms() {
        if keep(a.theta.get()) {
            mass += a.prob;
            sum += a.prob * (a.v.get() - a.theta.get()).min(0.0);
        }
    }
    (mass > 0.0).then(|| sum / mass)
}

/// `mu_L`, `mu_R`, the per-threshold table and, given `theta*`, the drift
/// quantities. Conditioning on `theta*` needs a constant value.
pub fn moments(spec: &DiscreteJointSpec, theta_star: Option<f64>) -> Result<MomentReport, DistError> {
    let mut mu_l = 0.0;
    let mut mu_r = 0.0;
    let mut thresholds: Vec<ThresholdMoment> = Vec::new();
    for a in spec.atoms() {
        let (v, th) = (a.v.get(), a.theta.get());
        if v >= th {
            mu_l += a.prob * (v - th);
        } else {
            mu_r += a.prob * (v - th);
        }
        match thresholds.iter_mut().find(|t| t.theta == th) {
            Some(t) => {
                t.mean_gap += a.prob * (v - th);
                t.prob += a.prob;
            }
            None => thresholds.push(ThresholdMoment { theta: th, prob: a.prob, mean_gap: a.prob * (v - th) }),
        }
    }
    for t in &mut thresholds {
        t.mean_gap /= t.prob;
    }
    thresholds.sort_by(|x, y| x.theta.total_cmp(&y.theta));

    let (mu_r_below, mu_r_above) = match theta_star {
        None => (None, None),
        Some(star) => {
            if spec.constant_value().is_none() {
                return Err(DistError::NotConstantValue);
            }
            let c = Conditioning::Strict;
            (
                conditional_negative(spec, |th| c.below(th, star)),
                conditional_negative(spec, |th| !c.below(th, star)),
            )
        }
    };
    let case = if mu_l + mu_r <= 0.0 { MomentCase::I } else { MomentCase::II };
    Ok(MomentReport {
        mu_l,
        mu_r,
        thresholds,
        delta_drift: mu_r_below.map(|m| mu_l + m),
        mu_r_below,
        mu_r_above,
        case,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConventionCheck {
    pub conditioning: Conditioning,
    pub mu_r_below: Option<f64>,
    pub mu_r_above: Option<f64>,
    /// `|mu_r_above| <= |mu_r_below|`, when both are defined.
    pub updown_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionReport {
    pub theta_star: f64,
    pub delta_drift: Option<f64>,
    pub drift_positive: Option<bool>,
    pub conventions: [ConventionCheck; 2],
}

/// Drift sign and the up/down comparison under both conditionings.
/// Informational only.
pub fn check_assumptions(spec: &DiscreteJointSpec, theta_star: f64) -> Result<AssumptionReport, DistError> {
    let m = moments(spec, Some(theta_star))?;
    let check = |c: Conditioning| {
        let below = conditional_negative(spec, |th| c.below(th, theta_star));
        let above = conditional_negative(spec, |th| !c.below(th, theta_star));
        let updown_holds = match (below, above) {
            (Some(b), Some(a)) => Some(a.abs() <= b.abs()),
            _ => None,
        };
        ConventionCheck { conditioning: c, mu_r_below: below, mu_r_above: above, updown_holds }
    };
    Ok(AssumptionReport {
        theta_star,
        delta_drift: m.delta_drift,
        drift_positive: m.delta_drift.map(|d| d > 0.0),
        conventions: [check(Conditioning::Strict), check(Conditioning::Weak)],
    })
}

/// `KL(spec1 || spec2)` of the per-slot laws.
pub fn per_slot_kl(spec1: &DiscreteJointSpec, spec2: &DiscreteJointSpec) -> Result<f64, DistError> {
    let mut kl = 0.0;
    for a in spec1.atoms() {
        let q = spec2
            .atoms()
            .iter()
            .find(|b| b.v == a.v && b.theta == a.theta)
            .map(|b| b.prob)
            .ok_or(DistError::Support(a.v.get(), a.theta.get()))?;
        kl += a.prob * libm::log(a.prob / q);
    }
    Ok(kl.max(0.0))
}

/// Expected per-slot `cv` when bidding `b` in every slot.
pub fn expected_cv_fixed_bid(spec: &DiscreteJointSpec, b: Bid) -> f64 {
    spec.atoms()
        .iter()
        .filter(|a| a.theta.wins(b))
        .map(|a| a.prob * (a.theta.get() - a.v.get()))
        .sum()
}
