//! Named input constructions.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{DiscreteJointSpec, DistError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// `v = 1/2`, `theta = 1/2 ± eps` with equal probability.
    Warmup,
    /// `v = 1/2`, `theta ∈ {0.4, 0.6, 0.7}` uniformly.
    Example1,
    /// `v = 1/2`, `theta ∈ {0, 1}` uniformly; `theta = 0` wins at any positive bid.
    Lemma4,
    /// Two-value pair of inputs differing on the `v = 0.9` branch.
    Thm1,
    /// Four-threshold pair of inputs differing in the `{A, B}` weights.
    Thm2,
    /// Three value classes for exercising the learning algorithm.
    LearnalgDemo,
}

impl Construction {
    pub const ALL: [Construction; 6] = [
        Construction::Warmup,
        Construction::Example1,
        Construction::Lemma4,
        Construction::Thm1,
        Construction::Thm2,
        Construction::LearnalgDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Warmup => "warmup",
            Construction::Example1 => "example1",
            Construction::Lemma4 => "lemma4",
            Construction::Thm1 => "thm1",
            Construction::Thm2 => "thm2",
            Construction::LearnalgDemo => "learnalg_demo",
        }
    }

    /// Builds the construction. `thm1` and `thm2` yield a pair.
    pub fn build(self, params: &ConstructionParams) -> Result<CannedInput, DistError> {
        params.validate()?;
        let label = self.name();
        let p = params;
        Ok(match self {
            Construction::Warmup => {
                check_unit("epsilon", p.epsilon, 0.5)?;
                CannedInput::Single(DiscreteJointSpec::merged(
                    label,
                    &[(0.5, 0.5 - p.epsilon, 0.5), (0.5, 0.5 + p.epsilon, 0.5)],
                )?)
            }
            Construction::Example1 => CannedInput::Single(DiscreteJointSpec::merged(
                label,
                &[(0.5, 0.4, 1.0 / 3.0), (0.5, 0.6, 1.0 / 3.0), (0.5, 0.7, 1.0 / 3.0)],
            )?),
            Construction::Lemma4 => CannedInput::Single(DiscreteJointSpec::merged(
                label,
                &[(0.5, 0.0, 0.5), (0.5, 1.0, 0.5)],
            )?),
            Construction::Thm1 => {
                check_unit("epsilon", p.epsilon, 0.5)?;
                if p.delta > p.r {
                    return Err(DistError::Param {
                        name: "delta",
                        value: p.delta,
                        reason: "must not exceed r (the probability r - delta would be negative)",
                    });
                }
                let hi = 0.9 + p.a + p.b;
                if hi > 1.0 {
                    return Err(DistError::Param {
                        name: "a + b",
                        value: p.a + p.b,
                        reason: "threshold 0.9 + a + b exceeds 1",
                    });
                }
                let low = [(0.5, 0.5 - p.epsilon, 0.25), (0.5, 0.5 + p.epsilon, 0.25)];
                let build = |label: &str, r: f64| {
                    let rows = [low[0], low[1], (0.9, 0.9 + p.a, r / 2.0), (0.9, hi, (1.0 - r) / 2.0)];
                    DiscreteJointSpec::merged(label, &rows)
                };
                CannedInput::Pair(build("thm1/input1", p.r)?, build("thm1/input2", p.r - p.delta)?)
            }
            Construction::Thm2 => {
                let [a, b, c, d] = p.thm2_thresholds();
                let qb = (p.m1() + p.delta - a) / (b - a);
                if !(0.0..=1.0).contains(&qb) {
                    return Err(DistError::Param {
                        name: "delta",
                        value: p.delta,
                        reason: "m1 + delta must lie in [A, B]",
                    });
                }
                let input1 =
                    DiscreteJointSpec::merged("thm2/input1", &[(0.5, a, 0.25), (0.5, b, 0.25), (0.5, c, 0.25), (0.5, d, 0.25)])?;
                let input2 = DiscreteJointSpec::merged(
                    "thm2/input2",
                    &[(0.5, a, (1.0 - qb) / 2.0), (0.5, b, qb / 2.0), (0.5, c, 0.25), (0.5, d, 0.25)],
                )?;
                CannedInput::Pair(input1, input2)
            }
            Construction::LearnalgDemo => CannedInput::Single(DiscreteJointSpec::merged(
                label,
                &[
                    (0.9, 0.7, 0.3 * 0.6),
                    (0.9, 1.0, 0.3 * 0.4),
                    (0.6, 0.4, 0.3 * 0.5),
                    (0.6, 0.9, 0.3 * 0.5),
                    (0.3, 0.2, 0.4 * 0.5),
                    (0.3, 0.8, 0.4 * 0.5),
                ],
            )?),
        })
    }

    /// Closed-form per-slot optimum for the lower-bound constructions, with
    /// the formula for the horizon total.
    pub fn analytic_opt_rate(self) -> Option<(f64, &'static str)> {
        match self {
            Construction::Warmup => Some((0.5, "T/2")),
            Construction::Lemma4 => Some((0.5, "T/2")),
            Construction::Example1 => Some((0.5 * 2.0 / 3.0, "T*v*2/3")),
            _ => None,
        }
    }
}

fn check_unit(name: &'static str, x: f64, max: f64) -> Result<(), DistError> {
    if x > max {
        return Err(DistError::Param { name, value: x, reason: "thresholds would leave [0, 1]" });
    }
    Ok(())
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = DistError;

    fn from_str(s: &str) -> Result<Construction, DistError> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| DistError::UnknownConstruction(s.into()))
    }
}

/// Output of [`Construction::build`].
#[derive(Clone, Debug, PartialEq)]
pub enum CannedInput {
    Single(DiscreteJointSpec),
    Pair(DiscreteJointSpec, DiscreteJointSpec),
}

impl CannedInput {
    /// The single spec, or the first input of a pair.
    pub fn primary(&self) -> &DiscreteJointSpec {
        match self {
            CannedInput::Single(s) | CannedInput::Pair(s, _) => s,
        }
    }

    pub fn into_primary(self) -> DiscreteJointSpec {
        match self {
            CannedInput::Single(s) | CannedInput::Pair(s, _) => s,
        }
    }

    pub fn pair(&self) -> Option<(&DiscreteJointSpec, &DiscreteJointSpec)> {
        match self {
            CannedInput::Pair(a, b) => Some((a, b)),
            CannedInput::Single(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstructionParams {
    pub epsilon: f64,
    pub delta: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub w: f64,
}

impl ConstructionParams {
    /// Defaults for horizon `t`: `eps = delta = 1/sqrt(T)`, `r = 0.4`,
    /// `a = 0.8 eps`, `b = eps/3`, `u = 0.3`, `w = 0.2`.
    pub fn for_horizon(t: u64) -> ConstructionParams {
        let eps = 1.0 / libm::sqrt(t.max(1) as f64);
        ConstructionParams { epsilon: eps, delta: eps, r: 0.4, a: 0.8 * eps, b: eps / 3.0, u: 0.3, w: 0.2 }
    }

    /// `(A + B) / 2` for the four-threshold construction.
    pub fn m1(&self) -> f64 {
        (self.u + self.w) / 2.0
    }

    /// `[A, B, C, D] = [1/2 - u, 1/2 - w, 1/2 + m1 - delta, 1/2 + m1]`.
    pub fn thm2_thresholds(&self) -> [f64; 4] {
        let m1 = self.m1();
        [0.5 - self.u, 0.5 - self.w, 0.5 + m1 - self.delta, 0.5 + m1]
    }

    /// Structural checks only; side conditions go in [`Self::feasibility`].
    pub fn validate(&self) -> Result<(), DistError> {
        let positive = [("epsilon", self.epsilon), ("delta", self.delta), ("a", self.a)];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(DistError::Param { name, value, reason: "must be positive" });
            }
        }
        if !(self.b.is_finite() && self.b >= 0.0) {
            return Err(DistError::Param { name: "b", value: self.b, reason: "must be non-negative" });
        }
        if !(self.r.is_finite() && self.r > 0.0 && self.r < 1.0) {
            return Err(DistError::Param { name: "r", value: self.r, reason: "must lie in (0, 1)" });
        }
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(DistError::Param { name: "w", value: self.w, reason: "must be positive" });
        }
        if !(self.u.is_finite() && self.u > self.w && self.u < 0.5) {
            return Err(DistError::Param { name: "u", value: self.u, reason: "need w < u < 1/2" });
        }
        Ok(())
    }

    /// Evaluates the side conditions of the two-value construction.
    pub fn feasibility(&self) -> FeasibilityReport {
        let e = self.epsilon;
        let tol = 1e-12;
        let mut checks = Vec::new();
        let mut push = |name: &'static str, lhs: f64, rhs: f64, holds: bool| {
            checks.push(FeasibilityCheck { name, lhs, rhs, holds });
        };
        push("a > 2*eps/3", self.a, 2.0 * e / 3.0, self.a > 2.0 * e / 3.0);
        push("r < 1/2", self.r, 0.5, self.r < 0.5);
        push("0.9 + a + b <= 1", 0.9 + self.a + self.b, 1.0, 0.9 + self.a + self.b <= 1.0);
        let l1 = self.a + (1.0 - self.r) * self.b;
        push("a + (1 - r) b = eps", l1, e, (l1 - e).abs() <= tol);
        let l2 = self.a + (1.0 - self.r + self.delta) * self.b;
        push("a + (1 - r + delta) b = 4 eps", l2, 4.0 * e, (l2 - 4.0 * e).abs() <= tol);
        FeasibilityReport { checks }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub checks: Vec<FeasibilityCheck>,
}

impl FeasibilityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.holds { "ok" } else { "FAILS" };
            writeln!(f, "{}: lhs={:?} rhs={:?} {}", c.name, c.lhs, c.rhs, mark)?;
        }
        Ok(())
    }
}

impl fmt::Display for CannedInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut one = |s: &DiscreteJointSpec| -> fmt::Result {
            writeln!(f, "label: {}", s.label())?;
            for a in s.atoms() {
                writeln!(f, "{:?} {:?} {:?}", a.v.get(), a.theta.get(), a.prob)?;
            }
            Ok(())
        };
        match self {
            CannedInput::Single(s) => one(s),
            CannedInput::Pair(a, b) => {
                one(a)?;
                one(b)
            }
        }
    }
}
