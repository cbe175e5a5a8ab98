//! Optimally modified comparison systems.
//!
//! Once an optimal best-to-worst value `x` is known, each middle criterion is
//! repaired independently: its pair `(a_bi, a_iw)` is moved to the closest
//! pair (in L1) with product `x`. The repair takes one of four shapes
//! ([`BranchTag`]); an upside criterion with `a_bi = a_iw` admits two.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::pcs::{rel_eq, Pcs, WeightSet, RELAXED_REL_TOL};
use crate::solver::{AbwItem, OptimalAbwSet};

/// Enumeration stops materializing families beyond this count.
pub const MAX_FAMILIES: usize = 1024;

/// How a middle criterion's pair is modified to reach product `x`.
///
/// Declaration order is the tie-break order used when sorting families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchTag {
    /// `(a_bi, a_iw)` already multiplies to `x`.
    Unchanged,
    /// Both entries become `sqrt(x)`.
    BothToSqrt,
    /// Keep `a_bi`, set `a_iw = x / a_bi`.
    FixBestSide,
    /// Keep `a_iw`, set `a_bi = x / a_iw`.
    FixWorstSide,
}

impl BranchTag {
    /// Modified `(a_bi, a_iw)` at `x`.
    pub fn apply(self, a_bi: f64, a_iw: f64, x: f64) -> (f64, f64) {
        match self {
            BranchTag::Unchanged => (a_bi, a_iw),
            BranchTag::BothToSqrt => {
                let r = x.sqrt();
                (r, r)
            }
            BranchTag::FixBestSide => (a_bi, x / a_bi),
            BranchTag::FixWorstSide => (x / a_iw, a_iw),
        }
    }

    /// Symbolic form of the modified `(a_bi, a_iw)` as functions of `x`.
    pub fn forms(self, a_bi: f64, a_iw: f64) -> (EntryForm, EntryForm) {
        match self {
            BranchTag::Unchanged => (EntryForm::Original, EntryForm::Original),
            BranchTag::BothToSqrt => (EntryForm::Sqrt, EntryForm::Sqrt),
            BranchTag::FixBestSide => (EntryForm::Original, EntryForm::XOver(a_bi)),
            BranchTag::FixWorstSide => (EntryForm::XOver(a_iw), EntryForm::Original),
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchTag::Unchanged => "unchanged",
            BranchTag::BothToSqrt => "both_to_sqrt",
            BranchTag::FixBestSide => "fix_best_side",
            BranchTag::FixWorstSide => "fix_worst_side",
        })
    }
}

/// A modified entry as a function of the best-to-worst value `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntryForm {
    /// The input comparison is kept.
    Original,
    Sqrt,
    XOver(f64),
}

impl EntryForm {
    /// Descriptor string; `original` names the kept entry, e.g. `"a_bi"`.
    pub fn describe(&self, original: &str) -> String {
        match self {
            EntryForm::Original => original.to_string(),
            EntryForm::Sqrt => "sqrt(x)".to_string(),
            EntryForm::XOver(d) => format!("x/{d}"),
        }
    }
}

/// Repair case table, with comparisons delegated to `cmp`.
fn branches_with(a_bi: f64, a_iw: f64, x: f64, cmp: impl Fn(f64, f64) -> Ordering) -> Vec<BranchTag> {
    use BranchTag::*;
    match cmp(a_bi * a_iw, x) {
        Ordering::Equal => vec![Unchanged],
        Ordering::Less => {
            // a < sqrt(x)  <=>  a^2 < x
            let bi_below = cmp(a_bi * a_bi, x) == Ordering::Less;
            let iw_below = cmp(a_iw * a_iw, x) == Ordering::Less;
            match (bi_below, iw_below) {
                (true, true) => vec![BothToSqrt],
                (true, false) => vec![FixWorstSide],
                (false, true) => vec![FixBestSide],
                // both >= sqrt(x) contradicts a_bi * a_iw < x
                (false, false) => vec![BothToSqrt],
            }
        }
        Ordering::Greater => match cmp(a_bi, a_iw) {
            Ordering::Less => vec![FixWorstSide],
            Ordering::Greater => vec![FixBestSide],
            Ordering::Equal => vec![FixBestSide, FixWorstSide],
        },
    }
}

/// Optimal repair shapes of `(a_bi, a_iw)` at best-to-worst value `x`, using
/// exact comparisons. Two tags are returned only for the upside tie `a_bi = a_iw`.
pub fn branches_for(a_bi: f64, a_iw: f64, x: f64) -> Vec<BranchTag> {
    branches_with(a_bi, a_iw, x, |a, b| a.partial_cmp(&b).unwrap_or(Ordering::Equal))
}

fn branches_in(pcs: &Pcs, i: usize, x: f64) -> Vec<BranchTag> {
    branches_with(pcs.a_bi(i), pcs.a_iw(i), x, |a, b| pcs.compare(a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CriterionBranch {
    /// 0-based criterion index.
    pub criterion: usize,
    pub tag: BranchTag,
    /// The criterion had two optimal repairs; this family carries one of them.
    pub tied: bool,
}

/// An optimally modified system, parametrized by the best-to-worst value over
/// its `abw` domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedPcsFamily {
    pub abw: AbwItem,
    pub branches: Vec<CriterionBranch>,
    base: Pcs,
}

impl ModifiedPcsFamily {
    pub fn base(&self) -> &Pcs {
        &self.base
    }

    pub fn tags(&self) -> Vec<BranchTag> {
        self.branches.iter().map(|b| b.tag).collect()
    }

    /// Point value, or the interval midpoint.
    pub fn reference_x(&self) -> f64 {
        self.abw.mid()
    }

    pub fn is_parametric(&self) -> bool {
        matches!(self.abw, AbwItem::Interval { .. })
    }

    fn in_domain(&self, x: f64) -> bool {
        match self.abw {
            AbwItem::Point(p) => rel_eq(p, x),
            AbwItem::Interval { lo, hi } => {
                let slack = RELAXED_REL_TOL * hi.abs();
                lo - slack <= x && x <= hi + slack
            }
        }
    }

    fn domain_string(&self) -> String {
        self.abw.to_string()
    }

    /// Per-criterion symbolic forms `(criterion, best_to_other, other_to_worst)`.
    pub fn entry_forms(&self) -> Vec<(usize, EntryForm, EntryForm)> {
        self.branches
            .iter()
            .map(|b| {
                let (fb, fw) = b.tag.forms(self.base.a_bi(b.criterion), self.base.a_iw(b.criterion));
                (b.criterion, fb, fw)
            })
            .collect()
    }

    /// Weights as ratios of `constant + linear*x + sqrt*sqrt(x)` forms.
    pub fn weight_formula(&self) -> WeightFormula {
        let exact = self.base.is_exact();
        let lift = |v: f64| Coeff::from_value(v, exact);
        let one = Coeff::integer(1, exact);
        let mut numerators = vec![SqrtAffine::zero(exact); self.base.n()];
        numerators[self.base.best()].linear = one;
        numerators[self.base.worst()].constant = one;
        for b in &self.branches {
            let i = b.criterion;
            let form = &mut numerators[i];
            match b.tag {
                BranchTag::Unchanged | BranchTag::FixWorstSide => form.constant = lift(self.base.a_iw(i)),
                BranchTag::BothToSqrt => form.sqrt = one,
                BranchTag::FixBestSide => form.linear = one / lift(self.base.a_bi(i)),
            }
        }
        let denominator = numerators.iter().fold(SqrtAffine::zero(exact), |acc, t| acc.add(t));
        WeightFormula {
            numerators,
            denominator,
        }
    }
}

/// `constant + linear * x + sqrt * sqrt(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtAffine {
    pub constant: Coeff,
    pub linear: Coeff,
    pub sqrt: Coeff,
}

impl SqrtAffine {
    fn zero(exact: bool) -> SqrtAffine {
        SqrtAffine {
            constant: Coeff::zero(exact),
            linear: Coeff::zero(exact),
            sqrt: Coeff::zero(exact),
        }
    }

    fn add(&self, o: &SqrtAffine) -> SqrtAffine {
        SqrtAffine {
            constant: self.constant + o.constant,
            linear: self.linear + o.linear,
            sqrt: self.sqrt + o.sqrt,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.constant.to_f64() + self.linear.to_f64() * x + self.sqrt.to_f64() * x.sqrt()
    }

    fn is_single_term(&self) -> bool {
        [self.constant, self.linear, self.sqrt]
            .iter()
            .filter(|c| !c.is_zero())
            .count()
            <= 1
    }
}

fn scaled_term(c: Coeff, symbol: &str) -> String {
    match c {
        Coeff::Exact(r) => {
            let numer = r.numer().abs();
            let head = if numer == 1 {
                symbol.to_string()
            } else {
                format!("{numer}{symbol}")
            };
            if *r.denom() == 1 {
                head
            } else {
                format!("{head}/{}", r.denom())
            }
        }
        Coeff::Approx(v) => {
            let v = v.abs();
            if v == 1.0 {
                symbol.to_string()
            } else {
                format!("{v}{symbol}")
            }
        }
    }
}

impl fmt::Display for SqrtAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(bool, String)> = Vec::new();
        if !self.linear.is_zero() {
            terms.push((self.linear.is_negative(), scaled_term(self.linear, "x")));
        }
        if !self.sqrt.is_zero() {
            terms.push((self.sqrt.is_negative(), scaled_term(self.sqrt, "sqrt(x)")));
        }
        if !self.constant.is_zero() {
            let c = self.constant;
            let magnitude = if c.is_negative() { -c } else { c };
            terms.push((c.is_negative(), magnitude.to_string()));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (negative, body)) in terms.iter().enumerate() {
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Closed-form weights of a family: `w_j(x) = numerators[j](x) / denominator(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFormula {
    pub numerators: Vec<SqrtAffine>,
    pub denominator: SqrtAffine,
}

impl WeightFormula {
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let d = self.denominator.eval(x);
        self.numerators.iter().map(|n| n.eval(x) / d).collect()
    }

    /// One descriptor string per criterion, e.g. `"x/(x + 10)"`.
    pub fn describe(&self) -> Vec<String> {
        let den = if self.denominator.is_single_term() {
            self.denominator.to_string()
        } else {
            format!("({})", self.denominator)
        };
        self.numerators
            .iter()
            .map(|n| {
                let num = if n.is_single_term() {
                    n.to_string()
                } else {
                    format!("({n})")
                };
                format!("{num}/{den}")
            })
            .collect()
    }
}

/// Branch alternatives per middle criterion for one optimal `a_bw` item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchChoices {
    pub abw: AbwItem,
    /// `(criterion, alternatives)`, criteria ascending.
    pub options: Vec<(usize, Vec<BranchTag>)>,
}

impl BranchChoices {
    pub fn combinations(&self) -> usize {
        self.options
            .iter()
            .fold(1usize, |acc, (_, o)| acc.saturating_mul(o.len()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEnumeration {
    /// Sorted by `a_bw` ascending, then by branch tags. Empty when truncated.
    pub families: Vec<ModifiedPcsFamily>,
    pub choices: Vec<BranchChoices>,
    /// Combinations enumerated before deduplication.
    pub enumerated: usize,
    /// More than [`MAX_FAMILIES`] combinations; only `choices` is populated.
    pub truncated: bool,
}

fn choices_for(pcs: &Pcs, item: AbwItem) -> Result<BranchChoices> {
    let mid = item.mid();
    let mut options = Vec::new();
    for i in pcs.middle() {
        let tags = branches_in(pcs, i, mid);
        if let AbwItem::Interval { lo, hi } = item {
            let delta = 1e-6 * (hi - lo);
            for probe in [lo + delta, hi - delta] {
                if branches_in(pcs, i, probe) != tags {
                    return Err(Error::BranchUnstable {
                        criterion: i + 1,
                        lo,
                        hi,
                    });
                }
            }
        }
        options.push((i, tags));
    }
    Ok(BranchChoices { abw: item, options })
}

/// All optimally modified families for the given optimal `a_bw` values.
pub fn build_families(pcs: &Pcs, optimal_abw: &OptimalAbwSet) -> Result<FamilyEnumeration> {
    let choices = optimal_abw
        .items()
        .iter()
        .map(|&item| choices_for(pcs, item))
        .collect::<Result<Vec<_>>>()?;
    let total = choices
        .iter()
        .fold(0usize, |acc, c| acc.saturating_add(c.combinations()));
    if total > MAX_FAMILIES {
        return Ok(FamilyEnumeration {
            families: Vec::new(),
            choices,
            enumerated: total,
            truncated: true,
        });
    }
    let mut families = Vec::with_capacity(total);
    for choice in &choices {
        let mut odometer = vec![0usize; choice.options.len()];
        loop {
            let branches = choice
                .options
                .iter()
                .zip(&odometer)
                .map(|((criterion, tags), &k)| CriterionBranch {
                    criterion: *criterion,
                    tag: tags[k],
                    tied: tags.len() > 1,
                })
                .collect();
            families.push(ModifiedPcsFamily {
                abw: choice.abw,
                branches,
                base: pcs.clone(),
            });
            // advance, last criterion fastest
            let mut pos = odometer.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < choice.options[pos].1.len() {
                    break;
                }
                odometer[pos] = 0;
            }
            if odometer.iter().all(|&k| k == 0) {
                break;
            }
        }
    }
    let enumerated = families.len();
    families.sort_by(|a, b| a.abw.lo().total_cmp(&b.abw.lo()).then_with(|| a.tags().cmp(&b.tags())));
    let mut unique: Vec<(ModifiedPcsFamily, Pcs)> = Vec::with_capacity(families.len());
    for fam in families {
        let inst = instantiate(&fam, fam.reference_x())?;
        if !unique.iter().any(|(_, seen)| same_entries(seen, &inst)) {
            unique.push((fam, inst));
        }
    }
    Ok(FamilyEnumeration {
        families: unique.into_iter().map(|(f, _)| f).collect(),
        choices,
        enumerated,
        truncated: false,
    })
}

fn same_entries(a: &Pcs, b: &Pcs) -> bool {
    let pairs = |p: &Pcs| p.best_to_other().into_iter().chain(p.other_to_worst());
    a.n() == b.n() && pairs(a).zip(pairs(b)).all(|(u, v)| rel_eq(u, v))
}

/// The modified system of `family` at best-to-worst value `x`.
pub fn instantiate(family: &ModifiedPcsFamily, x: f64) -> Result<Pcs> {
    if !family.in_domain(x) {
        return Err(Error::OutOfFamilyDomain {
            x,
            domain: family.domain_string(),
        });
    }
    let base = &family.base;
    let mut best_to_other = vec![0.0; base.n()];
    let mut other_to_worst = vec![0.0; base.n()];
    best_to_other[base.best()] = 1.0;
    best_to_other[base.worst()] = x;
    other_to_worst[base.best()] = x;
    other_to_worst[base.worst()] = 1.0;
    for b in &family.branches {
        let (bi, iw) = b.tag.apply(base.a_bi(b.criterion), base.a_iw(b.criterion), x);
        best_to_other[b.criterion] = bi;
        other_to_worst[b.criterion] = iw;
    }
    Pcs::modified(base.best(), base.worst(), best_to_other, other_to_worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaEntry {
    pub criterion: usize,
    pub best_side: f64,
    pub worst_side: f64,
}

/// Per-entry deviations of a modification from the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eta {
    pub entries: Vec<EtaEntry>,
    pub best_worst: f64,
    pub total: f64,
}

/// Deviations between `pcs` and `family` at `x`, by case.
pub fn eta(pcs: &Pcs, family: &ModifiedPcsFamily, x: f64) -> Result<Eta> {
    if !family.in_domain(x) {
        return Err(Error::OutOfFamilyDomain {
            x,
            domain: family.domain_string(),
        });
    }
    let entries: Vec<EtaEntry> = family
        .branches
        .iter()
        .map(|b| {
            let (a_bi, a_iw) = (pcs.a_bi(b.criterion), pcs.a_iw(b.criterion));
            let (best_side, worst_side) = match b.tag {
                BranchTag::Unchanged => (0.0, 0.0),
                BranchTag::BothToSqrt => ((x.sqrt() - a_bi).abs(), (x.sqrt() - a_iw).abs()),
                BranchTag::FixWorstSide => ((a_bi - x / a_iw).abs(), 0.0),
                BranchTag::FixBestSide => (0.0, (a_iw - x / a_bi).abs()),
            };
            EtaEntry {
                criterion: b.criterion,
                best_side,
                worst_side,
            }
        })
        .collect();
    let best_worst = (pcs.a_bw() - x).abs();
    let total = entries.iter().map(|e| e.best_side + e.worst_side).sum::<f64>() + best_worst;
    Ok(Eta {
        entries,
        best_worst,
        total,
    })
}

pub fn weights_from_modified(modified: &Pcs) -> Result<WeightSet> {
    modified.consistent_weights()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    /// The best criterion does not receive the largest weight.
    BestNotMaximal,
    /// Some modified comparison exceeds the modified `a_bw`.
    ModifiedExceedsBw,
}

/// Symptoms that make an optimal weight set less plausible. Ties do not flag.
pub fn preference_flags(pcs: &Pcs, modified: &Pcs, w: &WeightSet) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let wb = w[pcs.best()];
    let max = w.as_slice().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if wb < max && !rel_eq(wb, max) {
        out.push(Diagnostic::BestNotMaximal);
    }
    let abw = modified.a_bw();
    let exceeds = |v: f64| v > abw && !rel_eq(v, abw);
    if modified
        .best_to_other()
        .into_iter()
        .chain(modified.other_to_worst())
        .any(exceeds)
    {
        out.push(Diagnostic::ModifiedExceedsBw);
    }
    out
}

/// A perturbation `(x, y, z)` with `(a + x)(b + y) = c + z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Strategy {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Strategy {
    pub fn cost(&self) -> f64 {
        self.x.abs() + self.y.abs() + self.z.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyOutcome {
    pub min_deviation: f64,
    pub strategies: Vec<Strategy>,
}

/// Closed-form least `|x| + |y| + |z|` making `(a, b, c)` consistent, with
/// every strategy attaining it. `a`, `b` must be integers in `1..=9`, `c >= 1`.
pub fn strategy_deviation(a: f64, b: f64, c: f64) -> Result<StrategyOutcome> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v.fract() == 0.0 && (1.0..=9.0).contains(&v)) {
            return Err(Error::OutOfScale {
                vector: name,
                index: 0,
                value: v,
                mode: "strict",
            });
        }
    }
    if !(c.is_finite() && c >= 1.0) {
        return Err(Error::OutOfScale {
            vector: "c",
            index: 0,
            value: c,
            mode: "c >= 1",
        });
    }
    let s = |x: f64, y: f64| Strategy { x, y, z: 0.0 };
    let p = a * b;
    let strategies = if p == c {
        vec![s(0.0, 0.0)]
    } else if p < c {
        let r = c.sqrt();
        if a * a < c && b * b < c {
            vec![s(r - a, r - b)]
        } else if a < b {
            vec![s(c / b - a, 0.0)]
        } else {
            vec![s(0.0, c / a - b)]
        }
    } else if a < b {
        vec![s(c / b - a, 0.0)]
    } else if b < a {
        vec![s(0.0, c / a - b)]
    } else {
        vec![s(c / b - a, 0.0), s(0.0, c / a - b)]
    };
    Ok(StrategyOutcome {
        min_deviation: strategies[0].cost(),
        strategies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::{Mode, RawPcs};
    use crate::solver::solve;

    fn pcs(a_b: &[f64], a_w: &[f64]) -> Pcs {
        Pcs::validate(&RawPcs {
            n: a_b.len(),
            best: 1,
            worst: a_b.len(),
            best_to_other: a_b.to_vec(),
            other_to_worst: a_w.to_vec(),
            mode: Mode::Strict,
        })
        .unwrap()
    }

    fn families(p: &Pcs) -> Vec<ModifiedPcsFamily> {
        let s = solve(p).unwrap();
        build_families(p, &s.optimal_abw).unwrap().families
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(u, v)| (u - v).abs() < tol)
    }

    #[test]
    fn case_table() {
        use BranchTag::*;
        assert_eq!(branches_for(2., 3., 8.), vec![FixWorstSide]);
        assert_eq!(FixWorstSide.apply(2., 3., 8.).0, 8. / 3.);
        assert_eq!(branches_for(4., 4., 8.), vec![FixBestSide, FixWorstSide]);
        assert_eq!(branches_for(1., 1., 4.), vec![BothToSqrt]);
        assert_eq!(BothToSqrt.apply(1., 1., 4.), (2., 2.));
        assert_eq!(branches_for(2., 2., 4.), vec![Unchanged]);
        assert_eq!(branches_for(3., 2., 8.), vec![FixBestSide]);
        assert_eq!(branches_for(5., 3., 8.), vec![FixBestSide]);
        // sqrt(9) = 3 sits on the fix-one-side boundary
        assert_eq!(branches_for(2., 3., 9.), vec![FixWorstSide]);
    }

    #[test]
    fn single_optimum_single_family() {
        let p = pcs(&[1., 2., 3., 5., 8.], &[8., 3., 4., 3., 1.]);
        let fams = families(&p);
        assert_eq!(fams.len(), 1);
        use BranchTag::*;
        assert_eq!(fams[0].tags(), vec![FixWorstSide, FixWorstSide, FixBestSide]);
        let m = instantiate(&fams[0], 8.0).unwrap();
        assert!(close(&m.best_to_other(), &[1., 2.6667, 2., 5., 8.], 1e-4));
        assert!(close(&m.other_to_worst(), &[8., 3., 4., 1.6, 1.], 1e-12));
        let e = eta(&p, &fams[0], 8.0).unwrap();
        assert!((e.total - 46. / 15.).abs() < 1e-12);
        assert!((e.entries[0].best_side - 2. / 3.).abs() < 1e-12);
        assert!((e.entries[1].best_side - 1.).abs() < 1e-12);
        assert!((e.entries[2].worst_side - 1.4).abs() < 1e-12);
        assert_eq!(e.best_worst, 0.0);
    }

    #[test]
    fn tied_upside_two_families() {
        let p = pcs(&[1., 2., 4., 5., 8.], &[8., 3., 4., 2., 1.]);
        let fams = families(&p);
        assert_eq!(fams.len(), 2);
        assert!(fams[0].branches[1].tied && fams[1].branches[1].tied);
        let w1 = weights_from_modified(&instantiate(&fams[0], 8.0).unwrap()).unwrap();
        let w2 = weights_from_modified(&instantiate(&fams[1], 8.0).unwrap()).unwrap();
        assert!(close(w1.as_slice(), &[0.5128, 0.1923, 0.1282, 0.1026, 0.0641], 1e-4));
        assert!(close(w2.as_slice(), &[0.4545, 0.1705, 0.2273, 0.0909, 0.0568], 1e-4));
    }

    #[test]
    fn twin_and_split_instantiations() {
        let twin = pcs(&[1., 1., 1., 2., 4.], &[4., 1., 1., 3., 1.]);
        let fams = families(&twin);
        assert_eq!(fams.len(), 2);
        let m = instantiate(&fams[0], 1.0).unwrap();
        assert!(close(&m.best_to_other(), &[1., 1., 1., 1. / 3., 1.], 1e-12));
        assert!(close(&m.other_to_worst(), &[1., 1., 1., 3., 1.], 1e-12));
        let m2 = instantiate(&fams[1], 4.0).unwrap();
        assert!(close(&m2.best_to_other(), &[1., 2., 2., 4. / 3., 4.], 1e-12));

        let split = pcs(&[1., 1., 1., 1., 9.], &[9., 1., 1., 5., 1.]);
        let fams = families(&split);
        let m = instantiate(&fams[1], 9.0).unwrap();
        assert!(close(&m.best_to_other(), &[1., 3., 3., 1.8, 9.], 1e-12));
        assert!(close(&m.other_to_worst(), &[9., 3., 3., 5., 1.], 1e-12));
        let w = weights_from_modified(&instantiate(&fams[0], 1.0).unwrap()).unwrap();
        assert!(close(w.as_slice(), &[0.1111, 0.1111, 0.1111, 0.5556, 0.1111], 1e-4));
    }

    #[test]
    fn plateau_case_parametric_family() {
        let p = pcs(&[1., 2., 2., 2., 9.], &[9., 3., 3., 3., 1.]);
        let fams = families(&p);
        assert_eq!(fams.len(), 1);
        assert!(fams[0].is_parametric());
        for a in [6.0, 7.5, 9.0] {
            let m = instantiate(&fams[0], a).unwrap();
            assert!(close(&m.best_to_other(), &[1., a / 3., a / 3., a / 3., a], 1e-12));
            let w = weights_from_modified(&m).unwrap();
            let want: Vec<f64> = [a, 3., 3., 3., 1.].iter().map(|v| v / (a + 10.)).collect();
            assert!(close(w.as_slice(), &want, 1e-12));
            assert!(close(&fams[0].weight_formula().eval(a), &want, 1e-12));
        }
        assert!((eta(&p, &fams[0], 9.0).unwrap().total - 3.0).abs() < 1e-12);
        assert_eq!(
            fams[0].weight_formula().describe(),
            vec!["x/(x + 10)", "3/(x + 10)", "3/(x + 10)", "3/(x + 10)", "1/(x + 10)"]
        );
        let forms = fams[0].entry_forms();
        assert_eq!(forms[0].1.describe("a_bi"), "x/3");
        assert_eq!(forms[0].2.describe("a_iw"), "a_iw");
        assert!(matches!(
            instantiate(&fams[0], 9.5),
            Err(Error::OutOfFamilyDomain { .. })
        ));
    }

    #[test]
    fn consistent_input_is_its_own_modification() {
        let p = pcs(&[1., 2., 4.], &[4., 2., 1.]);
        let fams = families(&p);
        assert_eq!(fams.len(), 1);
        let m = instantiate(&fams[0], 4.0).unwrap();
        assert_eq!(m.best_to_other(), p.best_to_other());
        assert_eq!(m.other_to_worst(), p.other_to_worst());
        assert_eq!(eta(&p, &fams[0], 4.0).unwrap().total, 0.0);
        assert!(matches!(
            instantiate(&fams[0], 5.0),
            Err(Error::OutOfFamilyDomain { .. })
        ));
    }

    #[test]
    fn preference_diagnostics() {
        let p = pcs(&[1., 1., 1., 2., 4.], &[4., 1., 1., 3., 1.]);
        let fams = families(&p);
        let m1 = instantiate(&fams[0], 1.0).unwrap();
        let w1 = weights_from_modified(&m1).unwrap();
        assert_eq!(
            preference_flags(&p, &m1, &w1),
            vec![Diagnostic::BestNotMaximal, Diagnostic::ModifiedExceedsBw]
        );
        let m2 = instantiate(&fams[1], 4.0).unwrap();
        let w2 = weights_from_modified(&m2).unwrap();
        assert!(preference_flags(&p, &m2, &w2).is_empty());

        let ones = pcs(&[1., 1., 1.], &[1., 1., 1.]);
        let w = ones.consistent_weights().unwrap();
        assert!(preference_flags(&ones, &ones, &w).is_empty());
    }

    #[test]
    fn strategy_closed_forms() {
        let o = strategy_deviation(2., 3., 8.).unwrap();
        assert!((o.min_deviation - 2. / 3.).abs() < 1e-12);
        assert_eq!(o.strategies.len(), 1);
        assert!((o.strategies[0].x - 2. / 3.).abs() < 1e-12);

        let o = strategy_deviation(1., 1., 4.).unwrap();
        assert_eq!(o.min_deviation, 2.0);
        assert_eq!(o.strategies[0], Strategy { x: 1., y: 1., z: 0. });

        let o = strategy_deviation(4., 4., 8.).unwrap();
        assert_eq!(o.min_deviation, 2.0);
        assert_eq!(
            o.strategies,
            vec![Strategy { x: -2., y: 0., z: 0. }, Strategy { x: 0., y: -2., z: 0. }]
        );

        assert_eq!(strategy_deviation(3., 3., 9.).unwrap().min_deviation, 0.0);
        assert!(strategy_deviation(0., 3., 9.).is_err());
        assert!(strategy_deviation(2.5, 3., 9.).is_err());
        assert!(strategy_deviation(2., 3., 0.5).is_err());
    }

    #[test]
    fn family_cap_truncates() {
        // eleven upside ties (2, 2) and ten (1, 1) criteria pull the optimum to x = 1,
        // where every tie has two repairs: 2^11 > 1024
        let mut a_b = vec![1.0];
        let mut a_w = vec![1.0];
        for _ in 0..11 {
            a_b.push(2.0);
            a_w.push(2.0);
        }
        for _ in 0..10 {
            a_b.push(1.0);
            a_w.push(1.0);
        }
        a_b.push(1.0);
        a_w.push(1.0);
        let p = pcs(&a_b, &a_w);
        let s = solve(&p).unwrap();
        assert_eq!(s.optimal_abw.items(), &[AbwItem::Point(1.0)]);
        let e = build_families(&p, &s.optimal_abw).unwrap();
        assert!(e.truncated);
        assert!(e.families.is_empty());
        assert_eq!(e.enumerated, 1 << 11);
        assert_eq!(e.choices[0].options.iter().filter(|(_, o)| o.len() == 2).count(), 11);
    }
}
