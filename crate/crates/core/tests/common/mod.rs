#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use taxicab_bwm::{AbwItem, Mode, ModifiedPcsFamily, Pcs, RawPcs};

/// Build a system with criterion 1 best and criterion n worst.
pub fn pcs(a_b: &[f64], a_w: &[f64]) -> Pcs {
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

/// One downside and two upside criteria; single optimum at 8.
pub fn single_optimum() -> Pcs {
    pcs(&[1., 2., 3., 5., 8.], &[8., 3., 4., 3., 1.])
}

/// Like [`single_optimum`] but with an upside tie `a_bi = a_iw`, giving two families.
pub fn tied_upside() -> Pcs {
    pcs(&[1., 2., 4., 5., 8.], &[8., 3., 4., 2., 1.])
}

/// Tied minima at 1 and 4 with a non-constant segment between them.
pub fn twin_points() -> Pcs {
    pcs(&[1., 1., 1., 2., 4.], &[4., 1., 1., 3., 1.])
}

/// Tied minima at 1 and 9 separated by a higher candidate.
pub fn split_minima() -> Pcs {
    pcs(&[1., 1., 1., 1., 9.], &[9., 1., 1., 5., 1.])
}

/// Constant minimal objective on [6, 9].
pub fn plateau_case() -> Pcs {
    pcs(&[1., 2., 2., 2., 9.], &[9., 3., 3., 3., 1.])
}

/// Random strict system: n in 3..=8, distinct best and worst, entries uniform in 1..=9.
pub fn random_strict(rng: &mut ChaCha8Rng) -> Pcs {
    let n = rng.gen_range(3..=8);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let (b, w) = (idx[0], idx[1]);
    let a_bw = rng.gen_range(1..=9) as f64;
    let mut a_b = vec![0.0; n];
    let mut a_w = vec![0.0; n];
    for i in 0..n {
        a_b[i] = rng.gen_range(1..=9) as f64;
        a_w[i] = rng.gen_range(1..=9) as f64;
    }
    a_b[b] = 1.0;
    a_w[w] = 1.0;
    a_b[w] = a_bw;
    a_w[b] = a_bw;
    Pcs::validate(&RawPcs {
        n,
        best: b + 1,
        worst: w + 1,
        best_to_other: a_b,
        other_to_worst: a_w,
        mode: Mode::Strict,
    })
    .unwrap()
}

/// Random consistent relaxed system built from weights via `a_bi = w_b / w_i`,
/// `a_iw = w_i / w_w`. Returns the system and the normalized generating weights.
pub fn random_consistent(rng: &mut ChaCha8Rng) -> (Pcs, Vec<f64>) {
    let n = rng.gen_range(2..=9);
    let mut raw: Vec<f64> = (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let order = {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        idx
    };
    let b = order[0];
    let w = order[1];
    let max = raw.iter().copied().fold(0.0, f64::max);
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    raw[b] = max;
    raw[w] = min;
    if b != w && raw[b] == raw[w] {
        raw[b] = 2.0 * raw[w];
    }
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let a_b: Vec<f64> = (0..n).map(|i| if i == b { 1.0 } else { raw[b] / raw[i] }).collect();
    let a_w: Vec<f64> = (0..n).map(|i| if i == w { 1.0 } else { raw[i] / raw[w] }).collect();
    let pcs = Pcs::validate(&RawPcs {
        n,
        best: b + 1,
        worst: w + 1,
        best_to_other: a_b,
        other_to_worst: a_w,
        mode: Mode::Relaxed,
    })
    .unwrap();
    (pcs, weights)
}

/// Points at which a family is instantiated in checks: the point itself, or
/// both ends and the midpoint of an interval.
pub fn sample_points(family: &ModifiedPcsFamily) -> Vec<f64> {
    match family.abw {
        AbwItem::Point(x) => vec![x],
        AbwItem::Interval { lo, hi } => vec![lo, 0.5 * (lo + hi), hi],
    }
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Largest `|a_bi * a_iw - a_bw|` over the middle criteria.
pub fn consistency_gap(p: &Pcs) -> f64 {
    p.middle()
        .map(|i| (p.a_bi(i) * p.a_iw(i) - p.a_bw()).abs())
        .fold(0.0, f64::max)
}
