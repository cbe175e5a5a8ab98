//! Fixture systems shared by the benchmarks.

use taxicab_bwm::{Mode, Pcs, RawPcs};

fn system(best_to_other: Vec<f64>, other_to_worst: Vec<f64>) -> Pcs {
    let n = best_to_other.len();
    Pcs::validate(&RawPcs {
        n,
        best: 1,
        worst: n,
        best_to_other,
        other_to_worst,
        mode: Mode::Strict,
    })
    .expect("fixture is valid")
}

/// The five-criterion system with a single optimum at 8.
pub fn small() -> Pcs {
    system(vec![1., 2., 3., 5., 8.], vec![8., 3., 4., 3., 1.])
}

/// The five-criterion system whose optimum is the plateau [6, 9].
pub fn plateau() -> Pcs {
    system(vec![1., 2., 2., 2., 9.], vec![9., 3., 3., 3., 1.])
}

/// `n` criteria with middle comparisons cycling through the scale.
pub fn wide(n: usize) -> Pcs {
    assert!(n >= 3);
    let mut a_b = vec![1.0];
    let mut a_w = vec![9.0];
    for i in 0..n - 2 {
        a_b.push((i % 9 + 1) as f64);
        a_w.push(((i * 4 + 2) % 9 + 1) as f64);
    }
    a_b.push(9.0);
    a_w.push(1.0);
    system(a_b, a_w)
}
