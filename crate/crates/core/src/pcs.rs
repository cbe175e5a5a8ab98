//! Pairwise comparison systems: validation, consistency, exact weights of a
//! consistent system, and the raw total-deviation objective.
//!
//! Criterion indices in this module are 0-based. [`RawPcs`] carries the
//! 1-based `best`/`worst` numbering used by input documents.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for equality tests on non-integer (relaxed or derived) data.
pub const RELAXED_REL_TOL: f64 = 1e-12;

/// Absolute tolerance on the sum of a [`WeightSet`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Which comparison scale the entries must come from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Integers in `1..=9`; every equality test is exact.
    #[default]
    Strict,
    /// Reals `>= 1`. Best effort: equality tests use a relative tolerance.
    Relaxed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Relaxed => "relaxed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scale {
    Strict,
    Relaxed,
    /// Produced by modification; entries may fall below 1.
    Derived,
}

/// Unvalidated comparison system, as read from a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPcs {
    pub n: usize,
    /// 1-based index of the best criterion.
    pub best: usize,
    /// 1-based index of the worst criterion.
    pub worst: usize,
    pub best_to_other: Vec<f64>,
    pub other_to_worst: Vec<f64>,
    #[serde(default)]
    pub mode: Mode,
}

/// A validated pairwise comparison system.
///
/// Immutable after construction. The best-to-worst comparison `a_bw` is kept
/// once; the accessors route both redundant slots through it.
#[derive(Debug, Clone, PartialEq)]
pub struct Pcs {
    best: usize,
    worst: usize,
    a_bw: f64,
    best_to_other: Vec<f64>,
    other_to_worst: Vec<f64>,
    scale: Scale,
}

/// Position of a middle criterion relative to `a_bw`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Consistent,
    Downside,
    Upside,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Consistent => "consistent",
            Classification::Downside => "downside",
            Classification::Upside => "upside",
        })
    }
}

/// Validate a raw system. See [`Pcs::validate`].
pub fn validate(raw: &RawPcs) -> Result<Pcs> {
    Pcs::validate(raw)
}

impl Pcs {
    pub fn validate(raw: &RawPcs) -> Result<Pcs> {
        let n = raw.n;
        if n < 2 {
            return Err(Error::BadIndex(format!("n = {n}, need at least 2 criteria")));
        }
        for (vector, v) in [
            ("best_to_other", &raw.best_to_other),
            ("other_to_worst", &raw.other_to_worst),
        ] {
            if v.len() != n {
                return Err(Error::BadLength {
                    vector,
                    found: v.len(),
                    expected: n,
                });
            }
        }
        if raw.best == raw.worst {
            return Err(Error::BadIndex(format!(
                "best and worst are both criterion {}",
                raw.best
            )));
        }
        for (name, idx) in [("best", raw.best), ("worst", raw.worst)] {
            if idx < 1 || idx > n {
                return Err(Error::BadIndex(format!("{name} = {idx} not in 1..={n}")));
            }
        }
        let best = raw.best - 1;
        let worst = raw.worst - 1;
        let a_bb = raw.best_to_other[best];
        if a_bb != 1.0 {
            return Err(Error::SelfComparisonNotOne {
                which: "best",
                value: a_bb,
            });
        }
        let a_ww = raw.other_to_worst[worst];
        if a_ww != 1.0 {
            return Err(Error::SelfComparisonNotOne {
                which: "worst",
                value: a_ww,
            });
        }
        let a_bw = raw.best_to_other[worst];
        if a_bw != raw.other_to_worst[best] {
            return Err(Error::MismatchedBw {
                best_to_worst: a_bw,
                worst_from_best: raw.other_to_worst[best],
            });
        }
        for (vector, v) in [
            ("best_to_other", &raw.best_to_other),
            ("other_to_worst", &raw.other_to_worst),
        ] {
            for (index, &value) in v.iter().enumerate() {
                let ok = match raw.mode {
                    Mode::Strict => value.fract() == 0.0 && (1.0..=9.0).contains(&value),
                    Mode::Relaxed => value.is_finite() && value >= 1.0,
                };
                if !ok {
                    return Err(Error::OutOfScale {
                        vector,
                        index: index + 1,
                        value,
                        mode: raw.mode.as_str(),
                    });
                }
            }
        }
        Ok(Pcs {
            best,
            worst,
            a_bw,
            best_to_other: raw.best_to_other.clone(),
            other_to_worst: raw.other_to_worst.clone(),
            scale: match raw.mode {
                Mode::Strict => Scale::Strict,
                Mode::Relaxed => Scale::Relaxed,
            },
        })
    }

    /// Build a system from modified comparison values (0-based indices).
    ///
    /// Entries only need to be positive and finite; the two copies of `a_bw`
    /// must agree within [`RELAXED_REL_TOL`].
    pub fn modified(best: usize, worst: usize, best_to_other: Vec<f64>, other_to_worst: Vec<f64>) -> Result<Pcs> {
        let n = best_to_other.len();
        if n < 2 {
            return Err(Error::BadIndex(format!("n = {n}, need at least 2 criteria")));
        }
        if other_to_worst.len() != n {
            return Err(Error::BadLength {
                vector: "other_to_worst",
                found: other_to_worst.len(),
                expected: n,
            });
        }
        if best == worst || best >= n || worst >= n {
            return Err(Error::BadIndex(format!(
                "best = {best}, worst = {worst} (0-based, n = {n})"
            )));
        }
        for (vector, v) in [("best_to_other", &best_to_other), ("other_to_worst", &other_to_worst)] {
            for (index, &value) in v.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::OutOfScale {
                        vector,
                        index: index + 1,
                        value,
                        mode: "positive",
                    });
                }
            }
        }
        if (best_to_other[best] - 1.0).abs() > RELAXED_REL_TOL {
            return Err(Error::SelfComparisonNotOne {
                which: "best",
                value: best_to_other[best],
            });
        }
        if (other_to_worst[worst] - 1.0).abs() > RELAXED_REL_TOL {
            return Err(Error::SelfComparisonNotOne {
                which: "worst",
                value: other_to_worst[worst],
            });
        }
        let a_bw = best_to_other[worst];
        if !rel_eq(a_bw, other_to_worst[best]) {
            return Err(Error::MismatchedBw {
                best_to_worst: a_bw,
                worst_from_best: other_to_worst[best],
            });
        }
        Ok(Pcs {
            best,
            worst,
            a_bw,
            best_to_other,
            other_to_worst,
            scale: Scale::Derived,
        })
    }

    pub fn n(&self) -> usize {
        self.best_to_other.len()
    }

    pub fn best(&self) -> usize {
        self.best
    }

    pub fn worst(&self) -> usize {
        self.worst
    }

    pub fn a_bw(&self) -> f64 {
        self.a_bw
    }

    /// Comparison of the best criterion against criterion `i`.
    pub fn a_bi(&self, i: usize) -> f64 {
        if i == self.best {
            1.0
        } else if i == self.worst {
            self.a_bw
        } else {
            self.best_to_other[i]
        }
    }

    /// Comparison of criterion `i` against the worst criterion.
    pub fn a_iw(&self, i: usize) -> f64 {
        if i == self.worst {
            1.0
        } else if i == self.best {
            self.a_bw
        } else {
            self.other_to_worst[i]
        }
    }

    pub fn best_to_other(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.a_bi(i)).collect()
    }

    pub fn other_to_worst(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.a_iw(i)).collect()
    }

    /// Indices of the middle criteria (everything but best and worst), ascending.
    pub fn middle(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| i != self.best && i != self.worst)
    }

    /// Scale the input was validated against. Derived systems report `Relaxed`.
    pub fn mode(&self) -> Mode {
        match self.scale {
            Scale::Strict => Mode::Strict,
            Scale::Relaxed | Scale::Derived => Mode::Relaxed,
        }
    }

    /// True for systems produced by modification rather than validation.
    pub fn is_derived(&self) -> bool {
        self.scale == Scale::Derived
    }

    /// True when equality tests on this system's data are exact.
    pub fn is_exact(&self) -> bool {
        self.scale == Scale::Strict
    }

    /// Compare two values derived from this system's entries, honouring the
    /// exactness of the active scale.
    pub fn compare(&self, a: f64, b: f64) -> Ordering {
        if self.is_exact() {
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        } else if rel_eq(a, b) {
            Ordering::Equal
        } else {
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        }
    }

    pub fn values_eq(&self, a: f64, b: f64) -> bool {
        self.compare(a, b) == Ordering::Equal
    }

    /// Product `a_bi * a_iw` for criterion `i`.
    pub fn product(&self, i: usize) -> f64 {
        self.a_bi(i) * self.a_iw(i)
    }

    pub fn is_consistent(&self) -> bool {
        self.first_inconsistent().is_none()
    }

    fn first_inconsistent(&self) -> Option<usize> {
        self.middle().find(|&i| !self.values_eq(self.product(i), self.a_bw))
    }

    pub fn classify(&self, i: usize) -> Result<Classification> {
        if i >= self.n() {
            return Err(Error::BadIndex(format!("criterion {i} out of range")));
        }
        if i == self.best || i == self.worst {
            return Err(Error::BadIndex(format!(
                "criterion {} is the best or worst criterion",
                i + 1
            )));
        }
        Ok(match self.compare(self.product(i), self.a_bw) {
            Ordering::Equal => Classification::Consistent,
            Ordering::Less => Classification::Downside,
            Ordering::Greater => Classification::Upside,
        })
    }

    /// The unique weights reproducing every comparison of a consistent system:
    /// `w_j = a_jw / sum_i a_iw`.
    pub fn consistent_weights(&self) -> Result<WeightSet> {
        if let Some(i) = self.first_inconsistent() {
            return Err(Error::NotConsistent {
                criterion: i + 1,
                product: self.product(i),
                a_bw: self.a_bw,
            });
        }
        let column = self.other_to_worst();
        let total: f64 = column.iter().sum();
        Ok(WeightSet(column.into_iter().map(|a| a / total).collect()))
    }

    /// Sum of absolute deviations between weight ratios and comparisons.
    pub fn total_deviation(&self, w: &WeightSet) -> Result<f64> {
        let w = w.as_slice();
        if w.len() != self.n() {
            return Err(Error::BadLength {
                vector: "weights",
                found: w.len(),
                expected: self.n(),
            });
        }
        let (wb, ww) = (w[self.best], w[self.worst]);
        if ww == 0.0 {
            return Err(Error::ZeroWeight(self.worst + 1));
        }
        let mut total = (wb / ww - self.a_bw).abs();
        for i in self.middle() {
            if w[i] == 0.0 {
                return Err(Error::ZeroWeight(i + 1));
            }
            total += (wb / w[i] - self.a_bi(i)).abs() + (w[i] / ww - self.a_iw(i)).abs();
        }
        Ok(total)
    }
}

pub fn is_consistent(pcs: &Pcs) -> bool {
    pcs.is_consistent()
}

pub fn consistent_weights(pcs: &Pcs) -> Result<WeightSet> {
    pcs.consistent_weights()
}

pub fn classify_criterion(pcs: &Pcs, i: usize) -> Result<Classification> {
    pcs.classify(i)
}

pub fn total_deviation(pcs: &Pcs, w: &WeightSet) -> Result<f64> {
    pcs.total_deviation(w)
}

pub(crate) fn rel_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= RELAXED_REL_TOL * a.abs().max(b.abs())
}

/// A nonnegative weight vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSet(Vec<f64>);

impl WeightSet {
    pub fn new(weights: Vec<f64>) -> Result<WeightSet> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights("weights must be finite and nonnegative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(WeightSet(weights))
    }

    /// Normalize a nonnegative vector with positive sum.
    pub fn normalized(raw: &[f64]) -> Result<WeightSet> {
        let sum: f64 = raw.iter().sum();
        if !(sum.is_finite() && sum > 0.0) || raw.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidWeights("cannot normalize vector".into()));
        }
        Ok(WeightSet(raw.iter().map(|w| w / sum).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for WeightSet {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
