//! The one-dimensional objective `f(x)` over the candidate best-to-worst value
//! `x >= 1`, its breakpoint set, and its exact piecewise decomposition.
//!
//! For each middle criterion, `f_i(x)` is the least L1 change to
//! `(a_bi, a_iw)` whose product equals `x`; `f_b(x) = |a_bw - x|`. On every
//! interval between consecutive breakpoints `f` has the form
//! `a*sqrt(x) + b*x + c` with `a >= 0`, so it is concave there and its
//! minimum over `[1, inf)` sits on a breakpoint.

use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::pcs::{rel_eq, Pcs};

/// Coefficients with magnitude below this are float noise in relaxed mode.
pub const PLATEAU_NOISE: f64 = 1e-9;

/// Which closed form `f_i` takes at a given `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    /// `|a_iw - x / a_bi|`
    ScaleWorstSide,
    /// `|a_bi - x / a_iw|`
    ScaleBestSide,
    /// `2 sqrt(x) - a_bi - a_iw`
    Sqrt,
}

fn piece(a_bi: f64, a_iw: f64, x: f64) -> Piece {
    if x <= a_bi * a_bi && a_iw <= a_bi {
        Piece::ScaleWorstSide
    } else if x <= a_iw * a_iw && a_bi <= a_iw {
        Piece::ScaleBestSide
    } else {
        Piece::Sqrt
    }
}

fn criterion_value(a_bi: f64, a_iw: f64, x: f64) -> f64 {
    match piece(a_bi, a_iw, x) {
        Piece::ScaleWorstSide => (a_iw - x / a_bi).abs(),
        Piece::ScaleBestSide => (a_bi - x / a_iw).abs(),
        Piece::Sqrt => 2.0 * x.sqrt() - a_bi - a_iw,
    }
}

fn check_domain(x: f64) -> Result<()> {
    if x >= 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(x))
    }
}

fn check_middle(pcs: &Pcs, i: usize) -> Result<()> {
    if i >= pcs.n() || i == pcs.best() || i == pcs.worst() {
        return Err(Error::BadIndex(format!(
            "criterion {} is not a middle criterion",
            i + 1
        )));
    }
    Ok(())
}

/// Contribution of middle criterion `i` (0-based) to `f`.
pub fn f_i(pcs: &Pcs, i: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    check_middle(pcs, i)?;
    Ok(criterion_value(pcs.a_bi(i), pcs.a_iw(i), x))
}

pub fn f_b(pcs: &Pcs, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok((pcs.a_bw() - x).abs())
}

pub fn f(pcs: &Pcs, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(eval(pcs, x))
}

/// `f` without the domain check. Callers guarantee `x >= 1`.
pub(crate) fn eval(pcs: &Pcs, x: f64) -> f64 {
    pcs.middle()
        .map(|i| criterion_value(pcs.a_bi(i), pcs.a_iw(i), x))
        .sum::<f64>()
        + (pcs.a_bw() - x).abs()
}

/// Sorted, deduplicated breakpoints where `f` can attain its minimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSet {
    xs: Vec<f64>,
}

impl CandidateSet {
    pub fn as_slice(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.xs[0]
    }

    pub fn last(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }
}

/// Largest of `a_bw` and the middle products.
pub fn upper_breakpoint(pcs: &Pcs) -> f64 {
    pcs.middle().map(|i| pcs.product(i)).fold(pcs.a_bw(), f64::max)
}

fn max_square(pcs: &Pcs, i: usize) -> f64 {
    let (a, b) = (pcs.a_bi(i), pcs.a_iw(i));
    (a * a).max(b * b)
}

pub fn candidate_set(pcs: &Pcs) -> CandidateSet {
    let u = upper_breakpoint(pcs);
    let mut xs = vec![pcs.a_bw()];
    for i in pcs.middle() {
        xs.push(pcs.product(i));
        let sq = max_square(pcs, i);
        if sq <= u {
            xs.push(sq);
        }
    }
    CandidateSet { xs: dedup(pcs, xs) }
}

/// Sort and merge equal values. Relaxed systems merge within the relative
/// tolerance and keep `a_bw` as the representative of its cluster.
fn dedup(pcs: &Pcs, mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    if pcs.is_exact() {
        xs.dedup();
        return xs;
    }
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
    for x in xs {
        match out.last_mut() {
            Some((rep, tail)) if rel_eq(*tail, x) => {
                *tail = x;
                if rel_eq(x, pcs.a_bw()) {
                    *rep = pcs.a_bw();
                }
            }
            _ => out.push((if rel_eq(x, pcs.a_bw()) { pcs.a_bw() } else { x }, x)),
        }
    }
    out.into_iter().map(|(rep, _)| rep).collect()
}

/// One interval of the decomposition, on which `f = sqrt * sqrt(x) + linear * x + constant`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseSegment {
    pub lo: f64,
    /// `f64::INFINITY` for the terminal segment.
    pub hi: f64,
    pub coeff_sqrt: Coeff,
    pub coeff_linear: Coeff,
    pub coeff_const: Coeff,
}

impl PiecewiseSegment {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeff_sqrt.to_f64() * x.sqrt() + self.coeff_linear.to_f64() * x + self.coeff_const.to_f64()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_terminal(&self) -> bool {
        self.hi.is_infinite()
    }

    /// Whether `f` is constant on this segment.
    ///
    /// Exact coefficients are tested symbolically. Float coefficients are
    /// constant only when both are exactly zero, and a magnitude inside
    /// `(0, PLATEAU_NOISE)` is reported as undecidable.
    pub fn is_constant(&self) -> Result<bool> {
        let (s, l) = (self.coeff_sqrt, self.coeff_linear);
        if s.is_exact() && l.is_exact() {
            return Ok(s.is_zero() && l.is_zero());
        }
        let (s, l) = (s.to_f64(), l.to_f64());
        if s.abs() >= PLATEAU_NOISE || l.abs() >= PLATEAU_NOISE {
            return Ok(false);
        }
        if s == 0.0 && l == 0.0 {
            return Ok(true);
        }
        Err(Error::PlateauUndecidable {
            lo: self.lo,
            hi: self.hi,
            sqrt: s,
            linear: l,
        })
    }
}

/// Sign of `v` as a coefficient; zero counts as positive.
fn sign(v: f64, exact: bool) -> Coeff {
    Coeff::integer(if v >= 0.0 { 1 } else { -1 }, exact)
}

/// Coefficients of `f` on the breakpoint-free open interval containing `probe`.
fn coefficients_at(pcs: &Pcs, probe: f64) -> (Coeff, Coeff, Coeff) {
    let exact = pcs.is_exact();
    let lift = |v: f64| Coeff::from_value(v, exact);
    let mut sqrt = Coeff::zero(exact);
    let mut linear = Coeff::zero(exact);
    let mut constant = Coeff::zero(exact);
    for i in pcs.middle() {
        let (a_bi, a_iw) = (pcs.a_bi(i), pcs.a_iw(i));
        match piece(a_bi, a_iw, probe) {
            Piece::ScaleWorstSide => {
                let s = sign(a_iw - probe / a_bi, exact);
                linear = linear - s / lift(a_bi);
                constant = constant + s * lift(a_iw);
            }
            Piece::ScaleBestSide => {
                let s = sign(a_bi - probe / a_iw, exact);
                linear = linear - s / lift(a_iw);
                constant = constant + s * lift(a_bi);
            }
            Piece::Sqrt => {
                sqrt = sqrt + Coeff::integer(2, exact);
                constant = constant - lift(a_bi) - lift(a_iw);
            }
        }
    }
    let s = sign(pcs.a_bw() - probe, exact);
    linear = linear - s;
    constant = constant + s * lift(pcs.a_bw());
    (sqrt, linear, constant)
}

/// Exact decomposition of `[1, inf)` into closed-form segments.
///
/// Segments follow the candidate set, with a leading `[1, x_0]` when
/// `x_0 > 1`. Squares `max(a_bi^2, a_iw^2)` beyond the largest candidate
/// still switch a criterion to its square-root branch, so they split the
/// tail above `x_m` further; no candidate lies there.
pub fn segment_decomposition(pcs: &Pcs) -> Vec<PiecewiseSegment> {
    let candidates = candidate_set(pcs);
    let u = upper_breakpoint(pcs);
    let mut points = candidates.as_slice().to_vec();
    for i in pcs.middle() {
        let sq = max_square(pcs, i);
        if sq > u {
            points.push(sq);
        }
    }
    let mut points = dedup(pcs, points);
    if points[0] > 1.0 {
        points.insert(0, 1.0);
    }
    let mut segments = Vec::with_capacity(points.len());
    for pair in points.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let (coeff_sqrt, coeff_linear, coeff_const) = coefficients_at(pcs, 0.5 * (lo + hi));
        segments.push(PiecewiseSegment {
            lo,
            hi,
            coeff_sqrt,
            coeff_linear,
            coeff_const,
        });
    }
    let last = points[points.len() - 1];
    let (coeff_sqrt, coeff_linear, coeff_const) = coefficients_at(pcs, last + 1.0);
    segments.push(PiecewiseSegment {
        lo: last,
        hi: f64::INFINITY,
        coeff_sqrt,
        coeff_linear,
        coeff_const,
    });
    segments
}

/// Evaluate a decomposition at `x` using the first segment that contains it.
pub fn eval_segments(segments: &[PiecewiseSegment], x: f64) -> Option<f64> {
    segments.iter().find(|s| s.contains(x)).map(|s| s.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::{Mode, RawPcs};
    use num_rational::Rational64;

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

    fn single_optimum() -> Pcs {
        pcs(&[1., 2., 3., 5., 8.], &[8., 3., 4., 3., 1.])
    }

    fn twin_points() -> Pcs {
        pcs(&[1., 1., 1., 2., 4.], &[4., 1., 1., 3., 1.])
    }

    fn plateau_case() -> Pcs {
        pcs(&[1., 2., 2., 2., 9.], &[9., 3., 3., 3., 1.])
    }

    #[test]
    fn criterion_terms() {
        let p = single_optimum();
        assert!((f_i(&p, 1, 8.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(f_i(&p, 3, 15.0).unwrap().abs() < 1e-12);
        assert!((f_i(&twin_points(), 1, 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(f_i(&p, 0, 2.0), Err(Error::BadIndex(_))));
        assert!(matches!(f_i(&p, 1, 0.5), Err(Error::DomainError(_))));
    }

    #[test]
    fn best_worst_term() {
        assert_eq!(f_b(&single_optimum(), 6.0).unwrap(), 2.0);
        assert_eq!(f_b(&single_optimum(), 8.0).unwrap(), 0.0);
        let split = pcs(&[1., 1., 1., 1., 9.], &[9., 1., 1., 5., 1.]);
        assert_eq!(f_b(&split, 1.0).unwrap(), 8.0);
        assert!(f_b(&split, 0.99).is_err());
    }

    #[test]
    fn total_objective() {
        assert!((f(&single_optimum(), 8.0).unwrap() - 46.0 / 15.0).abs() < 1e-12);
        assert!((f(&single_optimum(), 6.0).unwrap() - 5.3).abs() < 1e-9);
        assert!((f(&plateau_case(), 7.5).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn candidates() {
        assert_eq!(candidate_set(&single_optimum()).as_slice(), &[6., 8., 9., 12., 15.]);
        assert_eq!(candidate_set(&twin_points()).as_slice(), &[1., 4., 6.]);
        let two = Pcs::validate(&RawPcs {
            n: 2,
            best: 1,
            worst: 2,
            best_to_other: vec![1., 5.],
            other_to_worst: vec![5., 1.],
            mode: Mode::Strict,
        })
        .unwrap();
        assert_eq!(candidate_set(&two).as_slice(), &[5.]);
    }

    #[test]
    fn twin_points_first_segment_is_exact() {
        let segs = segment_decomposition(&twin_points());
        let s = &segs[0];
        assert_eq!((s.lo, s.hi), (1.0, 4.0));
        assert_eq!(s.coeff_sqrt, Coeff::Exact(Rational64::from_integer(4)));
        assert_eq!(s.coeff_linear, Coeff::Exact(Rational64::new(-4, 3)));
        assert_eq!(s.coeff_const, Coeff::Exact(Rational64::from_integer(2)));
        assert!(!s.is_constant().unwrap());
    }

    #[test]
    fn plateau_case_plateau_segment() {
        let segs = segment_decomposition(&plateau_case());
        let s = segs.iter().find(|s| s.lo == 6.0 && s.hi == 9.0).unwrap();
        assert!(s.coeff_sqrt.is_zero() && s.coeff_linear.is_zero());
        assert_eq!(s.coeff_const, Coeff::Exact(Rational64::from_integer(3)));
        assert!(s.is_constant().unwrap());
    }

    #[test]
    fn single_optimum_leading_segment_decreases() {
        let p = single_optimum();
        let segs = segment_decomposition(&p);
        let s = &segs[0];
        assert_eq!((s.lo, s.hi), (1.0, 6.0));
        assert!(s.coeff_sqrt.is_zero());
        // -1/3 - 1/4 - 1/5 - 1
        assert_eq!(s.coeff_linear, Coeff::Exact(Rational64::new(-107, 60)));
        let h = 1e-4;
        for k in 1..50 {
            let x = 1.0 + 5.0 * k as f64 / 50.0;
            let slope = (f(&p, x + h).unwrap() - f(&p, x - h).unwrap()) / (2.0 * h);
            assert!((slope - (-107.0 / 60.0)).abs() < 1e-6, "slope {slope} at {x}");
        }
    }

    #[test]
    fn tail_is_split_at_large_squares() {
        // criterion 4 switches to its sqrt branch at 25 > u = 15
        let p = single_optimum();
        let segs = segment_decomposition(&p);
        assert!(segs.iter().any(|s| s.lo == 16.0 && s.hi == 25.0));
        assert_eq!(segs.last().unwrap().lo, 25.0);
        for k in 0..400 {
            let x = 1.0 + k as f64 * 0.1;
            assert!((eval_segments(&segs, x).unwrap() - eval(&p, x)).abs() < 1e-9);
        }
    }

    #[test]
    fn relaxed_constant_check_reports_noise() {
        let s = PiecewiseSegment {
            lo: 1.0,
            hi: 2.0,
            coeff_sqrt: Coeff::Approx(0.0),
            coeff_linear: Coeff::Approx(1e-12),
            coeff_const: Coeff::Approx(3.0),
        };
        assert!(matches!(s.is_constant(), Err(Error::PlateauUndecidable { .. })));
        let flat = PiecewiseSegment {
            coeff_linear: Coeff::Approx(0.0),
            ..s.clone()
        };
        assert!(flat.is_constant().unwrap());
        let sloped = PiecewiseSegment {
            coeff_linear: Coeff::Approx(0.25),
            ..s
        };
        assert!(!sloped.is_constant().unwrap());
    }
}
