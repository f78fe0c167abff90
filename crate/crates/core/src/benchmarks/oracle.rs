//! Realization-knowing benchmarks for tiny horizons.

use alloc::vec::Vec;

use super::BenchError;
use crate::auction::{ThresholdAtom, Value};
use crate::distributions::DiscreteJointSpec;
use crate::money::Money;

pub const MAX_ORACLE_SLOTS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePathOpt {
    pub value: f64,
    /// Indices of the won slots, ascending.
    pub win_set: Vec<usize>,
}

/// Best subset of slots whose summed `theta - v` is at most 0. Exhaustive.
pub fn brute_force_sample_path_opt(
    realization: &[(Value, ThresholdAtom)],
) -> Result<SamplePathOpt, BenchError> {
    let n = realization.len();
    if n > MAX_ORACLE_SLOTS {
        return Err(BenchError::TooManySlots(n));
    }
    let vals: Vec<Money> = realization.iter().map(|(v, _)| v.money()).collect();
    let costs: Vec<Money> = realization.iter().map(|(v, th)| th.money() - v.money()).collect();
    let mut best = (Money::ZERO, 0u32);
    for mask in 1u32..(1u32 << n) {
        let (mut value, mut cost) = (Money::ZERO, Money::ZERO);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                value += vals[i];
                cost += costs[i];
            }
        }
        if !cost.is_positive() && value > best.0 {
            best = (value, mask);
        }
    }
    Ok(SamplePathOpt {
        value: best.0.to_f64(),
        win_set: (0..n).filter(|i| best.1 >> i & 1 == 1).collect(),
    })
}

/// Exact expectations over all `T`-slot realizations of a constant-value law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealizationBenchmark {
    /// Knows each realization, constraint holds in expectation.
    pub expected_constraint: f64,
    /// Knows each realization, constraint holds on every realization.
    pub per_realization: f64,
}

/// Largest horizon accepted by [`realization_benchmark`].
pub const MAX_ENUM_HORIZON: u64 = 16;

/// Enumerates every count vector of the atoms with its multinomial weight.
/// For a realization the cheapest way to win `k` slots costs `m_k` (sum of
/// the `k` smallest `theta - v`). The expectation-constrained optimum is the
/// LP `max E[v k(w)]` s.t. `E[m_{k(w)}] <= 0` over randomized choices of
/// `k(w)`, solved through its Lagrangian dual
/// `min_{lambda >= 0} sum_w P(w) max_k (v k - lambda m_k(w))`.
pub fn realization_benchmark(spec: &DiscreteJointSpec, horizon: u64) -> Result<RealizationBenchmark, BenchError> {
    let v = spec.constant_value().ok_or(BenchError::NotConstantValue)?.get();
    if horizon > MAX_ENUM_HORIZON {
        return Err(BenchError::TooManySlots(horizon as usize));
    }
    let t = horizon as usize;
    let mut atoms: Vec<(f64, f64)> = spec.atoms().iter().map(|a| (a.theta.get() - v, a.prob)).collect();
    atoms.sort_by(|x, y| x.0.total_cmp(&y.0));

    // (weight, m_0..=m_T) per realization class
    let mut rows: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut counts = alloc::vec![0usize; atoms.len()];
    let mut fact = alloc::vec![1.0f64; t + 1];
    for i in 1..=t {
        fact[i] = fact[i - 1] * i as f64;
    }
    enumerate(&mut counts, 0, t, &mut |c| {
        let mut w = fact[t];
        let mut m = Vec::with_capacity(t + 1);
        m.push(0.0);
        let mut acc = 0.0;
        for (j, &n) in c.iter().enumerate() {
            w *= libm::pow(atoms[j].1, n as f64) / fact[n];
            for _ in 0..n {
                acc += atoms[j].0;
                m.push(acc);
            }
        }
        rows.push((w, m));
    });

    let per_realization = rows
        .iter()
        .map(|(w, m)| {
            let k = m.iter().rposition(|&x| x <= 1e-12).unwrap_or(0);
            w * v * k as f64
        })
        .sum();

    // Dual function and its right slope.
    let dual = |lambda: f64| -> (f64, f64) {
        let mut g = 0.0;
        let mut slope = 0.0;
        for (w, m) in &rows {
            let mut best = (f64::NEG_INFINITY, 0.0);
            for (k, &mk) in m.iter().enumerate() {
                let val = v * k as f64 - lambda * mk;
                // ties: prefer the cheaper choice (right derivative)
                if val > best.0 + 1e-15 || (val >= best.0 - 1e-15 && -mk > best.1) {
                    best = (val, -mk);
                }
            }
            g += w * best.0;
            slope += w * best.1;
        }
        (g, slope)
    };
    let mut breaks: Vec<f64> = Vec::new();
    for (_, m) in &rows {
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if m[j] > m[i] {
                    breaks.push(v * (j - i) as f64 / (m[j] - m[i]));
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut best = dual(0.0);
    if best.1 < 0.0 && !breaks.is_empty() {
        // first breakpoint whose right slope is non-negative
        let (mut lo, mut hi) = (0usize, breaks.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if dual(breaks[mid]).1 >= 0.0 {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        for &l in &breaks[lo.saturating_sub(1)..(lo + 2).min(breaks.len())] {
            let d = dual(l);
            if d.0 < best.0 {
                best = d;
            }
        }
    }
    Ok(RealizationBenchmark { expected_constraint: best.0, per_realization })
}

fn enumerate(counts: &mut [usize], at: usize, left: usize, f: &mut impl FnMut(&[usize])) {
    if at + 1 == counts.len() {
        counts[at] = left;
        f(counts);
        return;
    }
    for n in 0..=left {
        counts[at] = n;
        enumerate(counts, at + 1, left - n, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::solve_theta_star;
    use crate::distributions::{Construction, ConstructionParams};

    fn slots(v: f64, thetas: &[f64]) -> Vec<(Value, ThresholdAtom)> {
        thetas.iter().map(|&t| (Value::new(v).unwrap(), ThresholdAtom::new(t).unwrap())).collect()
    }

    #[test]
    fn all_cheap_wins_all() {
        let r = brute_force_sample_path_opt(&slots(0.5, &[0.1, 0.2, 0.5])).unwrap();
        assert_eq!(r.value, 1.5);
        assert_eq!(r.win_set, alloc::vec![0, 1, 2]);
    }

    #[test]
    fn two_slot_example() {
        let r = brute_force_sample_path_opt(&slots(0.5, &[0.4, 0.7])).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.win_set, alloc::vec![0]);
    }

    #[test]
    fn single_expensive_slot() {
        let r = brute_force_sample_path_opt(&slots(0.5, &[0.6])).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.win_set.is_empty());
    }

    #[test]
    fn rejects_long_paths() {
        assert_eq!(
            brute_force_sample_path_opt(&slots(0.5, &[0.5; 21])),
            Err(BenchError::TooManySlots(21))
        );
    }

    #[test]
    fn lemma4_two_slots() {
        let spec = Construction::Lemma4.build(&ConstructionParams::for_horizon(4)).unwrap().into_primary();
        let b = realization_benchmark(&spec, 2).unwrap();
        // Per-realization: {0,0} -> 1, {0,1} -> 1, {1,1} -> 0.
        assert!((b.per_realization - 0.75).abs() < 1e-15);
        // In expectation every slot is affordable.
        assert!((b.expected_constraint - 1.0).abs() < 1e-12);
        let star = solve_theta_star(&spec).unwrap();
        assert!(2.0 * star.opt_rate > b.per_realization);
    }

    #[test]
    fn example1_matches_theta_star_policy() {
        let spec = Construction::Example1.build(&ConstructionParams::for_horizon(4)).unwrap().into_primary();
        let star = solve_theta_star(&spec).unwrap();
        for t in 1..=8 {
            let b = realization_benchmark(&spec, t).unwrap();
            assert!(t as f64 * star.opt_rate <= b.expected_constraint + 1e-9);
            assert!(b.per_realization <= b.expected_constraint + 1e-12);
        }
    }

    #[test]
    fn cheapest_k_matches_subset_search() {
        // m_k from sorting equals the subset minimum on a small realization.
        let costs = [0.2, -0.1, 0.05, 0.3, -0.05];
        let mut sorted = costs;
        sorted.sort_by(f64::total_cmp);
        for k in 0..=costs.len() {
            let mut best = f64::INFINITY;
            for mask in 0u32..32 {
                if mask.count_ones() as usize == k {
                    let c: f64 = (0..5).filter(|i| mask >> i & 1 == 1).map(|i| costs[i]).sum();
                    best = best.min(c);
                }
            }
            let greedy: f64 = sorted[..k].iter().sum();
            assert!((best - greedy).abs() < 1e-15);
        }
    }
}
