//! Explore-then-commit learner over discrete value classes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::auction::{ThresholdAtom, Value};
use crate::benchmarks::{solve_lp_discrete, LpClass, LpParams, LpSolution};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ClassTally {
    pub count: u64,
    pub below_count: u64,
    pub below_sum: f64,
    pub above_count: u64,
    pub above_sum: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnPhase {
    Learning,
    Decision,
}

/// Committed per-class overbid probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnPolicy {
    /// Estimated light parameters, one per value class seen, largest value first.
    pub params: Option<LpParams>,
    pub solution: Option<LpSolution>,
    q: BTreeMap<u64, f64>,
}

impl LearnPolicy {
    /// Overbid probability for value `v`, if the class was seen while learning.
    pub fn q(&self, v: Value) -> Option<f64> {
        self.q.get(&v.get().to_bits()).copied()
    }

    pub fn classes(&self) -> usize {
        self.q.len()
    }
}

#[derive(Clone, Debug)]
pub struct LearnState {
    phase: LearnPhase,
    // Keyed by the bit pattern of v; for v >= 0 this orders numerically.
    tallies: BTreeMap<u64, ClassTally>,
    policy: Option<LearnPolicy>,
    anomalies: u64,
}

impl LearnState {
    pub fn new() -> LearnState {
        LearnState { phase: LearnPhase::Learning, tallies: BTreeMap::new(), policy: None, anomalies: 0 }
    }

    pub fn phase(&self) -> LearnPhase {
        self.phase
    }

    pub fn policy(&self) -> Option<&LearnPolicy> {
        self.policy.as_ref()
    }

    pub fn anomalies(&self) -> u64 {
        self.anomalies
    }

    pub fn tally(&self, v: Value) -> Option<&ClassTally> {
        self.tallies.get(&v.get().to_bits())
    }

    pub(crate) fn note_anomaly(&mut self) {
        self.anomalies += 1;
    }

    /// Records one learning-phase slot. `theta` is the revealed threshold.
    pub(crate) fn record(&mut self, v: Value, theta: Option<ThresholdAtom>) {
        let t = self.tallies.entry(v.get().to_bits()).or_default();
        t.count += 1;
        if let Some(th) = theta {
            let (v, th) = (v.get(), th.get());
            if th <= v {
                t.below_count += 1;
                t.below_sum += v - th;
            } else {
                t.above_count += 1;
                t.above_sum += th - v;
            }
        }
    }

    /// Estimates the light parameters from the tallies.
    pub fn estimates(&self) -> Option<LpParams> {
        let total: u64 = self.tallies.values().map(|t| t.count).sum();
        if total == 0 {
            return None;
        }
        let classes: Vec<LpClass> = self
            .tallies
            .iter()
            .rev()
            .map(|(&bits, t)| {
                let n = t.count as f64;
                LpClass {
                    value: f64::from_bits(bits),
                    prob: n / total as f64,
                    below_prob: t.below_count as f64 / n,
                    above_prob: t.above_count as f64 / n,
                    below_gain: if t.below_count > 0 { t.below_sum / t.below_count as f64 } else { 0.0 },
                    // No sample above v leaves r undefined; above_prob = 0 then
                    // keeps the class at q = 0.
                    above_cost: if t.above_count > 0 { t.above_sum / t.above_count as f64 } else { 0.0 },
                }
            })
            .collect();
        LpParams::new(classes).ok()
    }

    /// Solves the LP on the estimates and switches to the decision phase.
    pub(crate) fn commit(&mut self) {
        let params = self.estimates();
        let solution = params.as_ref().map(solve_lp_discrete);
        let mut q = BTreeMap::new();
        if let (Some(p), Some(s)) = (&params, &solution) {
            for (c, &qk) in p.classes().iter().zip(&s.q) {
                q.insert(c.value.to_bits(), qk);
            }
        }
        self.policy = Some(LearnPolicy { params, solution, q });
        self.phase = LearnPhase::Decision;
    }
}

impl Default for LearnState {
    fn default() -> LearnState {
        LearnState::new()
    }
}
