//! Global minimization of the objective over the candidate set, plateau
//! detection, and assembly of every optimal best-to-worst value.

use serde::Serialize;

use crate::error::Result;
use crate::objective::{candidate_set, eval, segment_decomposition, CandidateSet, PiecewiseSegment};
use crate::pcs::Pcs;

/// Absolute tolerance under which two objective values count as tied.
pub const TIE_TOL: f64 = 1e-9;

/// One component of the set of optimal `a_bw` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AbwItem {
    Point(f64),
    /// Closed interval on which the objective is constant and minimal.
    Interval {
        lo: f64,
        hi: f64,
    },
}

impl AbwItem {
    pub fn lo(&self) -> f64 {
        match *self {
            AbwItem::Point(x) => x,
            AbwItem::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            AbwItem::Point(x) => x,
            AbwItem::Interval { hi, .. } => hi,
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo() + self.hi())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x <= self.hi()
    }
}

impl std::fmt::Display for AbwItem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AbwItem::Point(x) => write!(f, "{{{x}}}"),
            AbwItem::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// Every minimizer of the objective, as sorted disjoint points and closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalAbwSet {
    items: Vec<AbwItem>,
}

impl OptimalAbwSet {
    pub fn items(&self) -> &[AbwItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.items.iter().any(|it| it.contains(x))
    }

    pub fn has_plateau(&self) -> bool {
        self.items.iter().any(|it| matches!(it, AbwItem::Interval { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub epsilon_star: f64,
    pub optimal_abw: OptimalAbwSet,
    /// `(x_j, f(x_j))` for every candidate, ascending in `x_j`.
    pub candidate_values: Vec<(f64, f64)>,
}

impl SolveSummary {
    pub fn candidates(&self) -> impl Iterator<Item = f64> + '_ {
        self.candidate_values.iter().map(|&(x, _)| x)
    }
}

/// Minimum of `f` over the candidate set and every candidate within [`TIE_TOL`] of it.
pub fn minimize_on_candidates(pcs: &Pcs) -> (f64, Vec<f64>) {
    let values = candidate_values(pcs, &candidate_set(pcs));
    let min = values.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    let minimizers = values
        .iter()
        .filter(|&&(_, v)| v - min <= TIE_TOL)
        .map(|&(x, _)| x)
        .collect();
    (min, minimizers)
}

fn candidate_values(pcs: &Pcs, candidates: &CandidateSet) -> Vec<(f64, f64)> {
    candidates.as_slice().iter().map(|&x| (x, eval(pcs, x))).collect()
}

/// Group minimizing candidates into points and plateaus.
///
/// Two consecutive minimizing candidates are joined when the segment between
/// them has vanishing square-root and linear coefficients.
pub fn detect_plateaus(pcs: &Pcs, minimizers: &[f64]) -> Result<OptimalAbwSet> {
    let candidates = candidate_set(pcs);
    let segments = segment_decomposition(pcs);
    plateaus(candidates.as_slice(), &segments, minimizers)
}

fn plateaus(xs: &[f64], segments: &[PiecewiseSegment], minimizers: &[f64]) -> Result<OptimalAbwSet> {
    let is_min: Vec<bool> = xs.iter().map(|x| minimizers.contains(x)).collect();
    let constant_between = |j: usize| -> Result<bool> {
        let mid = 0.5 * (xs[j] + xs[j + 1]);
        match segments.iter().find(|s| s.contains(mid)) {
            Some(s) => s.is_constant(),
            None => Ok(false),
        }
    };
    let mut items = Vec::new();
    let mut j = 0;
    while j < xs.len() {
        if !is_min[j] {
            j += 1;
            continue;
        }
        let start = j;
        while j + 1 < xs.len() && is_min[j + 1] && constant_between(j)? {
            j += 1;
        }
        items.push(if start == j {
            AbwItem::Point(xs[j])
        } else {
            AbwItem::Interval {
                lo: xs[start],
                hi: xs[j],
            }
        });
        j += 1;
    }
    Ok(OptimalAbwSet { items })
}

pub fn solve(pcs: &Pcs) -> Result<SolveSummary> {
    let candidates = candidate_set(pcs);
    let candidate_values = candidate_values(pcs, &candidates);
    let epsilon_star = candidate_values.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    let minimizers: Vec<f64> = candidate_values
        .iter()
        .filter(|&&(_, v)| v - epsilon_star <= TIE_TOL)
        .map(|&(x, _)| x)
        .collect();
    let segments = segment_decomposition(pcs);
    let optimal_abw = plateaus(candidates.as_slice(), &segments, &minimizers)?;
    Ok(SolveSummary {
        epsilon_star,
        optimal_abw,
        candidate_values,
    })
}
