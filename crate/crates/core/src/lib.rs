//! Exact analytical solver for the taxicab (L1) Best-Worst Method.
//!
//! Given a pairwise comparison system, [`solve`] returns the minimal total
//! deviation and every optimal best-to-worst value; [`build_families`] turns
//! those into optimally modified systems and their weight sets. The
//! [`oracle`] module holds brute-force cross-checks.
//!
//! ```
//! use taxicab_bwm::{build_families, instantiate, solve, weights_from_modified, Mode, Pcs, RawPcs};
//!
//! let pcs = Pcs::validate(&RawPcs {
//!     n: 5,
//!     best: 1,
//!     worst: 5,
//!     best_to_other: vec![1., 2., 3., 5., 8.],
//!     other_to_worst: vec![8., 3., 4., 3., 1.],
//!     mode: Mode::Strict,
//! })?;
//! let summary = solve(&pcs)?;
//! assert!((summary.epsilon_star - 3.0667).abs() < 1e-4);
//! let families = build_families(&pcs, &summary.optimal_abw)?;
//! let modified = instantiate(&families.families[0], 8.0)?;
//! let weights = weights_from_modified(&modified)?;
//! assert!((weights[0] - 0.4545).abs() < 1e-4);
//! # Ok::<(), taxicab_bwm::Error>(())
//! ```

mod coeff;
pub mod error;
pub mod modification;
pub mod objective;
pub mod oracle;
pub mod pcs;
pub mod solver;

pub use coeff::Coeff;
pub use error::{Error, Result};
pub use modification::{
    branches_for, build_families, eta, instantiate, preference_flags, strategy_deviation, weights_from_modified,
    BranchChoices, BranchTag, CriterionBranch, Diagnostic, EntryForm, Eta, FamilyEnumeration, ModifiedPcsFamily,
    SqrtAffine, Strategy, StrategyOutcome, WeightFormula,
};
pub use objective::{candidate_set, f, f_b, f_i, segment_decomposition, CandidateSet, PiecewiseSegment};
pub use oracle::{grid_min, strategy_grid, verify_weights, GridReport, StrategyGridReport, WeightVerification};
pub use pcs::{
    classify_criterion, consistent_weights, is_consistent, total_deviation, validate, Classification, Mode, Pcs,
    RawPcs, WeightSet,
};
pub use solver::{detect_plateaus, minimize_on_candidates, solve, AbwItem, OptimalAbwSet, SolveSummary, TIE_TOL};
