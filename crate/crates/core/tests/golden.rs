mod common;

use common::{pcs, plateau_case, single_optimum, tied_upside};
use taxicab_bwm::{
    build_families, classify_criterion, eta, instantiate, is_consistent, solve, verify_weights, weights_from_modified,
    AbwItem, BranchTag, Classification, Error, Mode, Pcs, RawPcs,
};

fn families(p: &Pcs) -> Vec<taxicab_bwm::ModifiedPcsFamily> {
    let s = solve(p).unwrap();
    build_families(p, &s.optimal_abw).unwrap().families
}

#[test]
fn single_optimum_eta_components() {
    let p = single_optimum();
    let fams = families(&p);
    assert_eq!(
        fams[0].tags(),
        vec![BranchTag::FixWorstSide, BranchTag::FixWorstSide, BranchTag::FixBestSide]
    );
    let e = eta(&p, &fams[0], 8.0).unwrap();
    let by = |i: usize| e.entries.iter().find(|t| t.criterion == i).unwrap();
    assert!((by(1).best_side - 2.0 / 3.0).abs() < 1e-12);
    assert!((by(2).best_side - 1.0).abs() < 1e-12);
    assert!((by(3).worst_side - 1.4).abs() < 1e-12);
    assert_eq!(e.best_worst, 0.0);
    assert!((e.total - 46.0 / 15.0).abs() < 1e-12);
}

#[test]
fn single_optimum_classification() {
    let p = single_optimum();
    assert!(!is_consistent(&p));
    let got: Vec<_> = (1..4).map(|i| classify_criterion(&p, i).unwrap()).collect();
    assert_eq!(
        got,
        vec![Classification::Downside, Classification::Upside, Classification::Upside]
    );
}

#[test]
fn tied_upside_weight_sets_verify() {
    let p = tied_upside();
    let s = solve(&p).unwrap();
    let sets: Vec<_> = families(&p)
        .iter()
        .map(|fam| weights_from_modified(&instantiate(fam, 8.0).unwrap()).unwrap())
        .collect();
    assert_eq!(sets.len(), 2);
    let report = verify_weights(&p, &s, &sets, 1000, 7).unwrap();
    assert_eq!(report.seed, 7);
    assert!(report.min_random_deviation > s.epsilon_star);
}

#[test]
fn plateau_case_eta_on_plateau() {
    let p = plateau_case();
    let fam = &families(&p)[0];
    for x in [6.0, 7.0, 9.0] {
        assert!((eta(&p, fam, x).unwrap().total - 3.0).abs() < 1e-12);
    }
    assert!(matches!(instantiate(fam, 10.0), Err(Error::OutOfFamilyDomain { .. })));
    assert_eq!(
        fam.weight_formula().describe(),
        vec!["x/(x + 10)", "3/(x + 10)", "3/(x + 10)", "3/(x + 10)", "1/(x + 10)"]
    );
}

#[test]
fn consistent_input_modifies_to_itself() {
    let p = pcs(&[1., 2., 4.], &[4., 2., 1.]);
    let s = solve(&p).unwrap();
    assert_eq!(s.epsilon_star, 0.0);
    assert_eq!(s.optimal_abw.items(), &[AbwItem::Point(4.0)]);
    let fams = families(&p);
    assert_eq!(fams.len(), 1);
    let m = instantiate(&fams[0], 4.0).unwrap();
    assert_eq!(m.best_to_other(), p.best_to_other());
    assert_eq!(m.other_to_worst(), p.other_to_worst());
}

#[test]
fn relaxed_consistent_input() {
    let p = Pcs::validate(&RawPcs {
        n: 3,
        best: 2,
        worst: 3,
        best_to_other: vec![2.5, 1.0, 5.0],
        other_to_worst: vec![2.0, 5.0, 1.0],
        mode: Mode::Relaxed,
    })
    .unwrap();
    assert!(is_consistent(&p));
    assert_eq!(p.consistent_weights().unwrap().as_slice(), &[0.25, 0.625, 0.125]);
    assert_eq!(solve(&p).unwrap().epsilon_star, 0.0);
}
