//! Brute-force cross-checks that share no code path with the analytical solver
//! beyond pointwise evaluation of the objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modification::Strategy;
use crate::objective::{eval, upper_breakpoint};
use crate::pcs::{Pcs, WeightSet};
use crate::solver::{SolveSummary, TIE_TOL};

pub const MIN_GRID_SAMPLES: usize = 1000;
pub const MIN_STRATEGY_RESOLUTION: usize = 100;
pub const DEFAULT_TRIALS: usize = 1000;
/// Tolerance between the objective at an optimal weight set and `epsilon_star`.
pub const WEIGHT_MATCH_TOL: f64 = 1e-6;
pub const LOWER_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub grid_min_value: f64,
    /// Grid points at (or, for isolated minima, adjacent to) a global minimum.
    pub grid_argmins: Vec<f64>,
    /// Maximal runs of consecutive argmin grid points, as `(first, last)`.
    pub clusters: Vec<(f64, f64)>,
    pub step: f64,
    pub range: (f64, f64),
    /// Upper bound on `|f'|` over the range.
    pub slope_bound: f64,
}

impl GridReport {
    /// Whether `x` lies within one grid step of some argmin.
    pub fn near_argmin(&self, x: f64) -> bool {
        let reach = self.step * (1.0 + 1e-9);
        self.clusters.iter().any(|&(lo, hi)| x >= lo - reach && x <= hi + reach)
    }
}

/// Bound on the slope of `f`: each middle term contributes at most
/// `max(1, 1/min a_bi, 1/min a_iw)`, the best-worst term 1.
pub fn slope_bound(pcs: &Pcs) -> f64 {
    let mut min_entry = 1.0f64;
    for i in pcs.middle() {
        min_entry = min_entry.min(pcs.a_bi(i)).min(pcs.a_iw(i));
    }
    pcs.middle().count() as f64 * (1.0 / min_entry).max(1.0) + 1.0
}

/// Evaluate `f` on `samples` evenly spaced points of `[1, u + 2]`.
///
/// A grid point is an argmin when it is within the tie tolerance of the grid
/// minimum, or when it is a local minimum of the sampled sequence lying
/// within `slope_bound * step` of it. The second rule keeps an isolated true
/// minimizer visible when it falls between grid points.
pub fn grid_min(pcs: &Pcs, samples: usize) -> Result<GridReport> {
    if samples < MIN_GRID_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least {MIN_GRID_SAMPLES} samples, got {samples}"
        )));
    }
    let lo = 1.0;
    let hi = upper_breakpoint(pcs) + 2.0;
    let step = (hi - lo) / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples { hi } else { lo + k as f64 * step })
        .collect();
    let values: Vec<f64> = xs.iter().map(|&x| eval(pcs, x)).collect();
    let grid_min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let slope = slope_bound(pcs);
    let slack = slope * step;
    let is_local_min = |k: usize| {
        let left = k == 0 || values[k] <= values[k - 1];
        let right = k + 1 == values.len() || values[k] <= values[k + 1];
        left && right
    };
    let selected: Vec<usize> = (0..samples)
        .filter(|&k| {
            let gap = values[k] - grid_min_value;
            gap <= TIE_TOL || (gap <= slack && is_local_min(k))
        })
        .collect();
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    let mut prev: Option<usize> = None;
    for &k in &selected {
        match (prev, clusters.last_mut()) {
            (Some(p), Some(last)) if k == p + 1 => last.1 = xs[k],
            _ => clusters.push((xs[k], xs[k])),
        }
        prev = Some(k);
    }
    Ok(GridReport {
        grid_min_value,
        grid_argmins: selected.iter().map(|&k| xs[k]).collect(),
        clusters,
        step,
        range: (lo, hi),
        slope_bound: slope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVerification {
    pub seed: u64,
    pub trials: usize,
    /// Objective value of each supplied weight set.
    pub weight_set_deviations: Vec<f64>,
    /// Smallest objective value over the random trials.
    pub min_random_deviation: f64,
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> WeightSet {
    // 1 - U[0, 1) lies in (0, 1], so every weight is strictly positive
    let raw: Vec<f64> = (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    WeightSet::normalized(&raw).expect("positive vector normalizes")
}

/// Check that each supplied weight set attains `epsilon_star` and that no
/// random positive weight vector beats it.
pub fn verify_weights(
    pcs: &Pcs,
    summary: &SolveSummary,
    weight_sets: &[WeightSet],
    trials: usize,
    seed: u64,
) -> Result<WeightVerification> {
    let eps = summary.epsilon_star;
    let mut weight_set_deviations = Vec::with_capacity(weight_sets.len());
    for w in weight_sets {
        let td = pcs.total_deviation(w)?;
        if (td - eps).abs() > WEIGHT_MATCH_TOL {
            return Err(Error::VerificationFailed(format!(
                "weights {:?} give total deviation {td}, expected {eps}",
                w.as_slice()
            )));
        }
        weight_set_deviations.push(td);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_random_deviation = f64::INFINITY;
    for _ in 0..trials {
        let w = random_weights(&mut rng, pcs.n());
        let td = pcs.total_deviation(&w)?;
        if td < eps - LOWER_BOUND_TOL {
            return Err(Error::VerificationFailed(format!(
                "random weights {:?} give total deviation {td} below epsilon* = {eps}",
                w.as_slice()
            )));
        }
        min_random_deviation = min_random_deviation.min(td);
    }
    Ok(WeightVerification {
        seed,
        trials,
        weight_set_deviations,
        min_random_deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyGridReport {
    pub min_deviation: f64,
    /// Best strategy of each separate near-optimal cluster, ascending in `x`.
    pub argmins: Vec<Strategy>,
    pub step_x: f64,
    pub step_y: f64,
}

impl StrategyGridReport {
    pub fn step(&self) -> f64 {
        self.step_x.max(self.step_y)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| if k + 1 == n { hi } else { lo + k as f64 * step })
        .collect()
}

/// Search perturbations `(x, y)` of `(a, b)` on `[-a + 1e-6, c] x [-b + 1e-6, c]`,
/// with `z = (a + x)(b + y) - c`.
///
/// For a fixed grid `x` the cost is convex piecewise linear in `y` with kinks
/// at `y = 0` and `(a + x)(b + y) = c`, so its minimum over the `y` range is
/// taken at a kink or a range end; those are evaluated exactly. The same is
/// done with the roles of `x` and `y` swapped. The result is never worse than
/// the plain two-dimensional grid of the same resolution.
pub fn strategy_grid(a: f64, b: f64, c: f64, resolution: usize) -> Result<StrategyGridReport> {
    if resolution < MIN_STRATEGY_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least {MIN_STRATEGY_RESOLUTION}, got {resolution}"
        )));
    }
    if !(a > 0.0 && b > 0.0 && c >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need a, b > 0 and c >= 1, got ({a}, {b}, {c})"
        )));
    }
    let (x_lo, y_lo) = (-a + 1e-6, -b + 1e-6);
    let xs = linspace(x_lo, c, resolution);
    let ys = linspace(y_lo, c, resolution);
    let step_x = (c - x_lo) / (resolution - 1) as f64;
    let step_y = (c - y_lo) / (resolution - 1) as f64;
    let cost = |x: f64, y: f64| x.abs() + y.abs() + ((a + x) * (b + y) - c).abs();

    let mut candidates: Vec<(f64, f64, f64)> = Vec::with_capacity(8 * resolution);
    for &x in &xs {
        for y in [0.0, c / (a + x) - b, y_lo, c] {
            if (y_lo..=c).contains(&y) {
                candidates.push((cost(x, y), x, y));
            }
        }
    }
    for &y in &ys {
        for x in [0.0, c / (b + y) - a, x_lo, c] {
            if (x_lo..=c).contains(&x) {
                candidates.push((cost(x, y), x, y));
            }
        }
    }
    let min_deviation = candidates.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);

    let step = step_x.max(step_y);
    let mut near: Vec<(f64, f64, f64)> = candidates
        .into_iter()
        .filter(|t| t.0 <= min_deviation + 2.0 * step)
        .collect();
    near.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)).then(p.2.total_cmp(&q.2)));
    // greedy clustering around the best remaining candidate
    let radius = 20.0 * step;
    let mut reps: Vec<(f64, f64, f64)> = Vec::new();
    for t in near {
        if !reps
            .iter()
            .any(|r| (r.1 - t.1).abs() <= radius && (r.2 - t.2).abs() <= radius)
        {
            reps.push(t);
        }
    }
    reps.sort_by(|p, q| p.1.total_cmp(&q.1).then(p.2.total_cmp(&q.2)));
    let argmins = reps
        .into_iter()
        .map(|(_, x, y)| Strategy {
            x,
            y,
            z: (a + x) * (b + y) - c,
        })
        .collect();
    Ok(StrategyGridReport {
        min_deviation,
        argmins,
        step_x,
        step_y,
    })
}
