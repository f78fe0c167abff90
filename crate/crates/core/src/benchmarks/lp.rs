//! The discrete-value fractional knapsack and its grid oracle.

use alloc::vec;
use alloc::vec::Vec;

use super::BenchError;
use crate::distributions::DiscreteJointSpec;

/// One value class of the light parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpClass {
    pub value: f64,
    /// `p_k`
    pub prob: f64,
    /// `P(theta <= v | v)`
    pub below_prob: f64,
    /// `P(theta > v | v)`
    pub above_prob: f64,
    /// `E[v - theta | theta <= v]`
    pub below_gain: f64,
    /// `E[theta - v | theta > v]`
    pub above_cost: f64,
}

impl LpClass {
    fn objective(&self) -> f64 {
        self.prob * self.above_prob * self.value
    }

    fn cost(&self) -> f64 {
        self.prob * self.above_prob * self.above_cost
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpParams {
    classes: Vec<LpClass>,
}

impl LpParams {
    /// Validates classes ordered by strictly decreasing value.
    pub fn new(classes: Vec<LpClass>) -> Result<LpParams, BenchError> {
        if classes.is_empty() {
            return Err(BenchError::Lp("no classes"));
        }
        let unit = |x: f64| x.is_finite() && (0.0..=1.0).contains(&x);
        for (i, c) in classes.iter().enumerate() {
            if !unit(c.value) || !unit(c.prob) || !unit(c.below_prob) || !unit(c.above_prob) {
                return Err(BenchError::Lp("values and probabilities must lie in [0, 1]"));
            }
            if !(c.below_gain.is_finite() && c.below_gain >= 0.0 && c.above_cost.is_finite() && c.above_cost >= 0.0) {
                return Err(BenchError::Lp("gains and costs must be finite and non-negative"));
            }
            if i > 0 && c.value >= classes[i - 1].value {
                return Err(BenchError::Lp("values must be strictly decreasing"));
            }
        }
        let total: f64 = classes.iter().map(|c| c.prob).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(BenchError::Lp("class probabilities must sum to 1"));
        }
        Ok(LpParams { classes })
    }

    /// Exact parameters of a joint law.
    pub fn from_spec(spec: &DiscreteJointSpec) -> LpParams {
        let classes = spec
            .value_classes()
            .into_iter()
            .map(|v| {
                let (mut p, mut pb, mut pa, mut gain, mut cost) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for a in spec.atoms().iter().filter(|a| a.v.get() == v) {
                    let th = a.theta.get();
                    p += a.prob;
                    if th <= v {
                        pb += a.prob;
                        gain += a.prob * (v - th);
                    } else {
                        pa += a.prob;
                        cost += a.prob * (th - v);
                    }
                }
                LpClass {
                    value: v,
                    prob: p,
                    below_prob: pb / p,
                    above_prob: pa / p,
                    below_gain: if pb > 0.0 { gain / pb } else { 0.0 },
                    above_cost: if pa > 0.0 { cost / pa } else { 0.0 },
                }
            })
            .collect();
        LpParams { classes }
    }

    pub fn classes(&self) -> &[LpClass] {
        &self.classes
    }

    /// `B = sum p w_left l`.
    pub fn budget(&self) -> f64 {
        self.classes.iter().map(|c| c.prob * c.below_prob * c.below_gain).sum()
    }

    /// Objective of a given `q`.
    pub fn value_rate(&self, q: &[f64]) -> f64 {
        let base: f64 = self.classes.iter().map(|c| c.prob * c.below_prob * c.value).sum();
        base + self.classes.iter().zip(q).map(|(c, &q)| c.objective() * q).sum::<f64>()
    }

    /// Overbidding spend of a given `q`.
    pub fn spend(&self, q: &[f64]) -> f64 {
        self.classes.iter().zip(q).map(|(c, &q)| c.cost() * q).sum()
    }

    /// Largest `r_k`.
    pub fn r_max(&self) -> f64 {
        self.classes.iter().map(|c| c.above_cost).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    /// Overbid probability per class, in class order.
    pub q: Vec<f64>,
    /// Ratio `v/r` of the class where the budget ran out; `+inf` if it never did.
    pub sigma_star: f64,
    pub value_rate: f64,
    pub budget: f64,
    pub spent: f64,
}

impl LpSolution {
    pub fn fractional_count(&self) -> usize {
        self.q.iter().filter(|&&q| q > 0.0 && q < 1.0).count()
    }
}

/// Greedy solution: fill classes by decreasing `v/r` (ties to larger `v`).
pub fn solve_lp_discrete(params: &LpParams) -> LpSolution {
    let cls = params.classes();
    let budget = params.budget();
    let mut q = vec![0.0; cls.len()];
    let mut order: Vec<usize> = Vec::new();
    for (k, c) in cls.iter().enumerate() {
        if c.objective() <= 0.0 && c.cost() <= 0.0 {
            continue;
        }
        if c.above_prob > 0.0 && c.cost() == 0.0 {
            q[k] = 1.0;
        } else if c.above_prob > 0.0 {
            order.push(k);
        }
    }
    let ratio = |k: usize| cls[k].value / cls[k].above_cost;
    order.sort_by(|&i, &j| ratio(j).total_cmp(&ratio(i)).then(cls[j].value.total_cmp(&cls[i].value)));

    let mut remaining = budget;
    let mut sigma_star = f64::INFINITY;
    for &k in &order {
        let cost = cls[k].cost();
        if cost <= remaining {
            q[k] = 1.0;
            remaining -= cost;
        } else {
            q[k] = (remaining / cost).clamp(0.0, 1.0);
            sigma_star = ratio(k);
            break;
        }
    }
    LpSolution { value_rate: params.value_rate(&q), spent: params.spend(&q), q, sigma_star, budget }
}

/// Feasibility slack used by both solvers.
pub const LP_FEAS_TOL: f64 = 1e-12;

/// Best objective over the grid `{0, step, 2 step, ...} ∩ [0, 1]` per
/// coordinate, found by branch and bound with an LP-relaxation bound.
pub fn brute_force_lp(params: &LpParams, grid_step: f64) -> Result<f64, BenchError> {
    if params.classes().len() > 5 {
        return Err(BenchError::Lp("grid oracle supports at most 5 classes"));
    }
    if !((1e-3..=1.0).contains(&grid_step)) {
        return Err(BenchError::Lp("grid step must lie in [1e-3, 1]"));
    }
    let n = libm::floor(1.0 / grid_step + 1e-9) as i64;
    let items: Vec<(f64, f64)> = params
        .classes()
        .iter()
        .map(|c| if c.above_prob > 0.0 { (c.objective(), c.cost()) } else { (0.0, 0.0) })
        .collect();
    let base = params.value_rate(&vec![0.0; items.len()]);
    let mut search = GridSearch { items: &items, step: grid_step, n, best: 0.0 };
    search.descend(0, params.budget() + LP_FEAS_TOL, 0.0);
    Ok(base + search.best)
}

struct GridSearch<'a> {
    items: &'a [(f64, f64)],
    step: f64,
    n: i64,
    best: f64,
}

impl GridSearch<'_> {
    /// Largest grid index affordable for item `k` with `room` left.
    fn max_index(&self, k: usize, room: f64) -> i64 {
        let a = self.items[k].1;
        if a <= 0.0 {
            return self.n;
        }
        let mut i = (libm::floor(room / (a * self.step)) as i64).clamp(0, self.n);
        while i > 0 && a * (i as f64 * self.step) > room {
            i -= 1;
        }
        while i < self.n && a * ((i + 1) as f64 * self.step) <= room {
            i += 1;
        }
        i
    }

    /// Upper bound with item `k` at grid index `i` and the rest relaxed.
    fn bound(&self, k: usize, i: i64, room: f64, acc: f64) -> f64 {
        let (c, a) = self.items[k];
        let x = i as f64 * self.step;
        acc + c * x + relaxation(&self.items[k + 1..], room - a * x)
    }

    fn descend(&mut self, k: usize, room: f64, acc: f64) {
        if k == self.items.len() {
            self.best = self.best.max(acc);
            return;
        }
        if room < 0.0 {
            return;
        }
        let hi = self.max_index(k, room);
        if k + 1 == self.items.len() {
            let x = hi as f64 * self.step;
            self.best = self.best.max(acc + self.items[k].0 * x);
            return;
        }
        // The bound is concave in i: locate its peak, then walk outwards
        // while it can still beat the incumbent.
        let (mut lo, mut up) = (0i64, hi);
        while up - lo > 2 {
            let m1 = lo + (up - lo) / 3;
            let m2 = up - (up - lo) / 3;
            if self.bound(k, m1, room, acc) < self.bound(k, m2, room, acc) {
                lo = m1 + 1;
            } else {
                up = m2;
            }
        }
        let peak = (lo..=up)
            .max_by(|&x, &y| self.bound(k, x, room, acc).total_cmp(&self.bound(k, y, room, acc)))
            .unwrap_or(0);
        let (c, a) = self.items[k];
        let visit = |this: &mut Self, i: i64| -> bool {
            if this.bound(k, i, room, acc) <= this.best {
                return false;
            }
            let x = i as f64 * this.step;
            this.descend(k + 1, room - a * x, acc + c * x);
            true
        };
        let mut i = peak;
        while i >= 0 && visit(self, i) {
            i -= 1;
        }
        let mut i = peak + 1;
        while i <= hi && visit(self, i) {
            i += 1;
        }
    }
}

/// `max sum c x` over `x ∈ [0,1]^m`, `sum a x <= room`, by enumerating the
/// vertices of the box cut by the budget plane.
fn relaxation(items: &[(f64, f64)], room: f64) -> f64 {
    if room < 0.0 {
        return f64::NEG_INFINITY;
    }
    let m = items.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << m) {
        let (mut c, mut a) = (0.0, 0.0);
        for (j, &(cj, aj)) in items.iter().enumerate() {
            if mask >> j & 1 == 1 {
                c += cj;
                a += aj;
            }
        }
        if a > room {
            continue;
        }
        best = best.max(c);
        for (j, &(cj, aj)) in items.iter().enumerate() {
            if mask >> j & 1 == 0 && aj > 0.0 {
                let x = ((room - a) / aj).min(1.0);
                best = best.max(c + cj * x);
            }
        }
    }
    best
}
