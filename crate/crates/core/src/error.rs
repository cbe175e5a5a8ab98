use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a_b[worst] = {best_to_worst} but a_w[best] = {worst_from_best}; both denote a_bw")]
    MismatchedBw { best_to_worst: f64, worst_from_best: f64 },
    #[error("self comparison of the {which} criterion must be 1, found {value}")]
    SelfComparisonNotOne { which: &'static str, value: f64 },
    #[error("entry {vector}[{index}] = {value} is outside the {mode} scale")]
    OutOfScale {
        vector: &'static str,
        index: usize,
        value: f64,
        mode: &'static str,
    },
    #[error("bad criterion index: {0}")]
    BadIndex(String),
    #[error("{vector} has length {found}, expected {expected}")]
    BadLength {
        vector: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("comparison system is not consistent (criterion {criterion}: {product} != {a_bw})")]
    NotConsistent { criterion: usize, product: f64, a_bw: f64 },
    #[error("weight of criterion {0} is zero but appears in a denominator")]
    ZeroWeight(usize),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("{0} is outside the domain [1, inf)")]
    DomainError(f64),
    #[error("cannot decide whether segment [{lo}, {hi}] is constant: coefficients ({sqrt:e}, {linear:e}) are within float noise")]
    PlateauUndecidable { lo: f64, hi: f64, sqrt: f64, linear: f64 },
    #[error("branch of criterion {criterion} changes inside interval [{lo}, {hi}]")]
    BranchUnstable { criterion: usize, lo: f64, hi: f64 },
    #[error("{x} is outside the family domain {domain}")]
    OutOfFamilyDomain { x: f64, domain: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
