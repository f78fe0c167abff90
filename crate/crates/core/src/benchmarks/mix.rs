//! The three-option overbidding mix on the second two-value input.

use crate::auction::Value;
use crate::distributions::ConstructionParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixSolution {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub objective_rate: f64,
}

/// Per-option objective and cost coefficients plus the constant terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixLp {
    pub base: f64,
    pub gain: [f64; 3],
    pub cost: [f64; 3],
    pub budget: f64,
}

impl MixLp {
    pub fn new(p: &ConstructionParams, v1: Value, v2: Value) -> MixLp {
        let (v1, v2) = (v1.get(), v2.get());
        let lo = p.r - p.delta;
        let hi = 1.0 - p.r + p.delta;
        MixLp {
            base: v1 / 4.0,
            gain: [v1 / 4.0, v2 * lo / 2.0, v2 * hi / 2.0],
            cost: [p.epsilon / 4.0, p.a * lo / 2.0, (p.a + p.b) * hi / 2.0],
            budget: p.epsilon / 4.0,
        }
    }

    pub fn objective(&self, g: [f64; 3]) -> f64 {
        self.base + (0..3).map(|i| self.gain[i] * g[i]).sum::<f64>()
    }

    pub fn spend(&self, g: [f64; 3]) -> f64 {
        (0..3).map(|i| self.cost[i] * g[i]).sum()
    }

    pub fn feasible(&self, g: [f64; 3]) -> bool {
        g.iter().all(|x| (0.0..=1.0).contains(x)) && self.spend(g) <= self.budget + 1e-12
    }
}

/// Exact LP optimum by vertex enumeration. Vertices with `g3 = 0` are
/// visited first and only a strictly better vertex replaces the incumbent.
pub fn solve_thm1_mix(params: &ConstructionParams, v1: Value, v2: Value) -> MixSolution {
    let lp = MixLp::new(params, v1, v2);
    let mut best: Option<([f64; 3], f64)> = None;
    let mut offer = |g: [f64; 3]| {
        if lp.feasible(g) {
            let obj = lp.objective(g);
            if best.is_none_or(|(_, b)| obj > b) {
                best = Some((g, obj));
            }
        }
    };
    for g3 in [0.0, 1.0] {
        // box corners
        for mask in 0..4u32 {
            offer([(mask & 1) as f64, (mask >> 1 & 1) as f64, g3]);
        }
        // one of g1, g2 solves the budget equation
        for free in 0..2 {
            for other in [0.0, 1.0] {
                let mut g = [0.0, 0.0, g3];
                g[1 - free] = other;
                if lp.cost[free] > 0.0 {
                    g[free] = (lp.budget - lp.spend(g)) / lp.cost[free];
                    offer(g);
                }
            }
        }
    }
    // g3 solves the budget equation
    for mask in 0..4u32 {
        let mut g = [(mask & 1) as f64, (mask >> 1 & 1) as f64, 0.0];
        if lp.cost[2] > 0.0 {
            g[2] = (lp.budget - lp.spend(g)) / lp.cost[2];
            offer(g);
        }
    }
    // g = 0 is always feasible, so some vertex was accepted.
    let (g, objective_rate) = best.unwrap_or(([0.0; 3], lp.base));
    MixSolution { g1: g[0], g2: g[1], g3: g[2], objective_rate }
}

/// Grid oracle: two coordinates on a `step` grid, the third set to its
/// best continuous value, over all three choices of the continuous one.
pub fn grid_search_thm1_mix(params: &ConstructionParams, v1: Value, v2: Value, step: f64) -> f64 {
    let lp = MixLp::new(params, v1, v2);
    let n = libm::floor(1.0 / step + 1e-9) as usize;
    let mut best = lp.base;
    for cont in 0..3 {
        let (i, j) = match cont {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for x in 0..=n {
            for y in 0..=n {
                let mut g = [0.0; 3];
                g[i] = (x as f64 * step).min(1.0);
                g[j] = (y as f64 * step).min(1.0);
                let room = lp.budget - lp.spend(g);
                if room < -1e-12 {
                    continue;
                }
                g[cont] = if lp.cost[cont] > 0.0 { (room.max(0.0) / lp.cost[cont]).min(1.0) } else { 1.0 };
                best = best.max(lp.objective(g));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> Value {
        Value::new(x).unwrap()
    }

    fn regime(eps: f64, r: f64, delta: f64, a: f64) -> ConstructionParams {
        let b = (4.0 * eps - a) / (1.0 - r + delta);
        ConstructionParams { epsilon: eps, delta, r, a, b, u: 0.3, w: 0.2 }
    }

    #[test]
    fn g3_vanishes_in_regime() {
        let p = regime(0.01, 0.4, 0.01, 0.008);
        let s = solve_thm1_mix(&p, v(0.5), v(0.9));
        assert_eq!(s.g3, 0.0);
        let lp = MixLp::new(&p, v(0.5), v(0.9));
        assert!(lp.spend([s.g1, s.g2, s.g3]) <= lp.budget + 1e-12);
        let grid = grid_search_thm1_mix(&p, v(0.5), v(0.9), 1e-2);
        assert!((grid - s.objective_rate).abs() < 1e-9);
    }

    #[test]
    fn zero_budget_only_free_options() {
        let mut p = regime(0.01, 0.4, 0.01, 0.008);
        p.epsilon = 0.0;
        let s = solve_thm1_mix(&p, v(0.5), v(0.9));
        // With eps = 0 the first option costs nothing.
        assert_eq!((s.g1, s.g2, s.g3), (1.0, 0.0, 0.0));
        assert!((s.objective_rate - 0.25).abs() < 1e-15);
    }

    #[test]
    fn objective_formula() {
        let p = regime(0.01, 0.4, 0.01, 0.008);
        let lp = MixLp::new(&p, v(0.5), v(0.9));
        let want = 0.125 + 0.125 + 0.9 * 0.39 / 2.0 + 0.9 * 0.61 / 2.0;
        assert!((lp.objective([1.0, 1.0, 1.0]) - want).abs() < 1e-15);
    }
}
