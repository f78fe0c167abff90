//! Offline optimum for the repeated identical auction (constant `v`).

use alloc::vec::Vec;

use super::BenchError;
use crate::distributions::DiscreteJointSpec;

/// Which branch produced the solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaStarKind {
    /// Budget `mu_L` spent on thresholds above `v`.
    Balanced,
    /// `mu_L + mu_R > 0`: every slot can be won.
    AllSlots,
    /// Nothing above `v` is affordable (no mass above `v`, or `mu_L = 0`).
    NothingAbove,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaStarSolution {
    pub value: f64,
    pub theta_star: f64,
    pub pi_star: f64,
    /// `pi* / P(theta = theta*)`; `None` when `theta*` carries no mass.
    pub rho_star: Option<f64>,
    pub opt_rate: f64,
    /// `P(theta < theta*)`.
    pub win_prob_below: f64,
    /// `P(theta = theta*)`.
    pub prob_at: f64,
    pub kind: ThetaStarKind,
    /// `pi* E[1{theta=theta*}(v-theta*)] + E[1{v<theta<theta*}(v-theta)] + mu_L`.
    pub residual: f64,
}

const EXHAUST_TOL: f64 = 1e-12;

/// Greedy balance: pay for thresholds above `v` in ascending order until the
/// positive contribution `mu_L` is used up.
pub fn solve_theta_star(spec: &DiscreteJointSpec) -> Result<ThetaStarSolution, BenchError> {
    let v = spec.constant_value().ok_or(BenchError::NotConstantValue)?.get();

    // Distinct thresholds with their mass, ascending.
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for a in spec.atoms() {
        let th = a.theta.get();
        match levels.iter_mut().find(|l| l.0 == th) {
            Some(l) => l.1 += a.prob,
            None => levels.push((th, a.prob)),
        }
    }
    levels.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mu_l: f64 = levels.iter().filter(|l| l.0 <= v).map(|l| l.1 * (v - l.0)).sum();
    let mu_r: f64 = levels.iter().filter(|l| l.0 > v).map(|l| l.1 * (v - l.0)).sum();
    let above: Vec<(f64, f64)> = levels.iter().copied().filter(|l| l.0 > v).collect();

    let (theta_star, pi_star, kind) = if above.is_empty() || mu_l <= 0.0 {
        (v, 1.0, ThetaStarKind::NothingAbove)
    } else if mu_l + mu_r > 0.0 {
        (1.0, 1.0, ThetaStarKind::AllSlots)
    } else {
        let tol = EXHAUST_TOL * mu_l.max(1.0);
        let mut remaining = mu_l;
        let mut pick = (above[above.len() - 1].0, 1.0);
        for &(th, p) in &above {
            let cost = p * (th - v);
            if cost <= remaining + tol {
                remaining -= cost;
                if remaining <= tol {
                    pick = (th, 1.0);
                    break;
                }
            } else {
                pick = (th, remaining / cost);
                break;
            }
        }
        (pick.0, pick.1, ThetaStarKind::Balanced)
    };

    let mass = |f: &dyn Fn(f64) -> bool| levels.iter().filter(|l| f(l.0)).map(|l| l.1).sum::<f64>();
    let win_prob_below = mass(&|th| th < theta_star);
    let prob_at = mass(&|th| th == theta_star);
    let between: f64 = levels
        .iter()
        .filter(|l| l.0 > v && l.0 < theta_star)
        .map(|l| l.1 * (v - l.0))
        .sum();
    let residual = pi_star * prob_at * (v - theta_star) + between + mu_l;
    Ok(ThetaStarSolution {
        value: v,
        theta_star,
        pi_star,
        rho_star: (prob_at > 0.0).then(|| pi_star / prob_at),
        opt_rate: v * (win_prob_below + pi_star * prob_at),
        win_prob_below,
        prob_at,
        kind,
        residual,
    })
}

/// `T * opt_rate`.
pub fn opt_value_repeated(spec: &DiscreteJointSpec, horizon: u64) -> Result<f64, BenchError> {
    Ok(horizon as f64 * solve_theta_star(spec)?.opt_rate)
}
