//! Finite-support i.i.d. laws over `(value, threshold)` pairs.

mod canned;
mod moments;

pub use canned::{
    CannedInput, Construction, ConstructionParams, FeasibilityCheck, FeasibilityReport,
};
pub use moments::{
    check_assumptions, expected_cv_fixed_bid, moments, per_slot_kl, AssumptionReport,
    Conditioning, ConventionCheck, MomentCase, MomentReport, ThresholdMoment,
};

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::auction::{ModelError, ThresholdAtom, Value};
use crate::rng::SeededSampler;

/// Probability mass must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("spec has no atoms")]
    Empty,
    #[error("probability {0} is not in (0, 1]")]
    Prob(f64),
    #[error("probabilities sum to {0}, not 1")]
    ProbSum(f64),
    #[error("duplicate atom (v = {0}, theta = {1})")]
    Duplicate(f64, f64),
    #[error("parameter {name} = {value}: {reason}")]
    Param { name: &'static str, value: f64, reason: &'static str },
    #[error("unknown construction '{0}'")]
    UnknownConstruction(String),
    #[error("value is not constant across atoms")]
    NotConstantValue,
    #[error("atom (v = {0}, theta = {1}) of the first law is outside the support of the second")]
    Support(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub v: Value,
    pub theta: ThresholdAtom,
    pub prob: f64,
}

impl Atom {
    pub fn new(v: f64, theta: f64, prob: f64) -> Result<Atom, DistError> {
        Ok(Atom { v: Value::new(v)?, theta: ThresholdAtom::new(theta)?, prob })
    }

    fn key(&self) -> (u64, u64) {
        (self.v.get().to_bits(), self.theta.get().to_bits())
    }
}

/// A validated joint law with a precomputed cumulative table.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteJointSpec {
    label: String,
    atoms: Vec<Atom>,
    cumulative: Vec<f64>,
}

impl DiscreteJointSpec {
    /// Validates and stores `atoms` in the given order.
    pub fn new(label: impl Into<String>, atoms: Vec<Atom>) -> Result<DiscreteJointSpec, DistError> {
        if atoms.is_empty() {
            return Err(DistError::Empty);
        }
        for (i, a) in atoms.iter().enumerate() {
            if !(a.prob.is_finite() && a.prob > 0.0 && a.prob <= 1.0) {
                return Err(DistError::Prob(a.prob));
            }
            if atoms[..i].iter().any(|b| b.key() == a.key()) {
                return Err(DistError::Duplicate(a.v.get(), a.theta.get()));
            }
        }
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for a in &atoms {
            acc += a.prob;
            cumulative.push(acc);
        }
        if (acc - 1.0).abs() > PROB_SUM_TOL {
            return Err(DistError::ProbSum(acc));
        }
        Ok(DiscreteJointSpec { label: label.into(), atoms, cumulative })
    }

    /// Builds a spec from raw `(v, theta, prob)` rows, merging repeated
    /// pairs and dropping zero-probability rows.
    pub fn merged(
        label: impl Into<String>,
        rows: &[(f64, f64, f64)],
    ) -> Result<DiscreteJointSpec, DistError> {
        let mut atoms: Vec<Atom> = Vec::with_capacity(rows.len());
        for &(v, theta, prob) in rows {
            if !prob.is_finite() || prob < 0.0 {
                return Err(DistError::Prob(prob));
            }
            let atom = Atom::new(v, theta, prob)?;
            if prob == 0.0 {
                continue;
            }
            match atoms.iter_mut().find(|a| a.key() == atom.key()) {
                Some(a) => a.prob += prob,
                None => atoms.push(atom),
            }
        }
        DiscreteJointSpec::new(label, atoms)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Index of the atom selected by a uniform draw `u` in `[0, 1)`.
    pub fn index_for(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.atoms.len() - 1)
    }

    /// Draws one `(v, theta)` pair, consuming one uniform from `sampler`.
    pub fn sample(&self, sampler: &mut SeededSampler) -> (Value, ThresholdAtom) {
        let a = &self.atoms[self.index_for(sampler.uniform())];
        (a.v, a.theta)
    }

    /// The common value when every atom has the same `v`.
    pub fn constant_value(&self) -> Option<Value> {
        let v = self.atoms[0].v;
        self.atoms.iter().all(|a| a.v == v).then_some(v)
    }

    /// Distinct values, largest first.
    pub fn value_classes(&self) -> Vec<f64> {
        let mut vs: Vec<f64> = self.atoms.iter().map(|a| a.v.get()).collect();
        vs.sort_by(|a, b| b.total_cmp(a));
        vs.dedup();
        vs
    }
}
