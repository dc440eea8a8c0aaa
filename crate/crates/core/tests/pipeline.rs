//! Public-API round trips: solve, project, verify, orient, extract.

use packclass::model::{is_gapless, project_to_class, validate_packing};
use packclass::packing_class::{extract_packing, orient_class, verify_packing_class};
use packclass::{fixtures, solve_opp, Instance, Limits, Rational, Verdict};

fn feasible(inst: &Instance, limits: &Limits) -> (packclass::Packing, packclass::PackingClass) {
    match solve_opp(inst, limits).verdict {
        Verdict::Feasible { packing, class } => (packing, class),
        v => panic!("expected feasible, got {v:?}"),
    }
}

#[test]
fn solution_class_round_trips() {
    let inst = fixtures::five_boxes();
    for limits in [Limits::default(), Limits::default().search_only()] {
        let (packing, class) = feasible(&inst, &limits);
        assert!(verify_packing_class(&class, &inst).unwrap().all_ok());
        let again = extract_packing(&orient_class(&class, &inst).unwrap(), &inst).unwrap();
        assert!(validate_packing(&again, &inst).unwrap().valid);
        assert!(is_gapless(&again, &inst).unwrap());
        let projected = project_to_class(&packing, &inst).unwrap();
        assert!(verify_packing_class(&projected, &inst).unwrap().all_ok());
    }
}

#[test]
fn three_dimensional_tiling() {
    // six unit cubes by search alone; eight tile the container exactly
    let six = vec![&[1i64, 1, 1][..]; 6];
    let inst = Instance::from_integers(&[2, 2, 2], &six).unwrap();
    assert_eq!(feasible(&inst, &Limits::default().search_only()).0.len(), 6);
    let eight = vec![&[1i64, 1, 1][..]; 8];
    let inst = Instance::from_integers(&[2, 2, 2], &eight).unwrap();
    assert_eq!(feasible(&inst, &Limits::default()).0.len(), 8);

    let nine = vec![&[1i64, 1, 1][..]; 9];
    let over = Instance::from_integers(&[2, 2, 2], &nine).unwrap();
    assert!(solve_opp(&over, &Limits::default()).is_infeasible());
}

#[test]
fn fractional_sizes_stay_exact() {
    let third = Rational::new(1, 3);
    let boxes = (0..3)
        .map(|k| packclass::BoxItem::new(format!("t{k}"), vec![third, Rational::from(1)]))
        .collect();
    let inst = Instance::new(vec![Rational::from(1), Rational::from(1)], boxes).unwrap();
    let (packing, _) = feasible(&inst, &Limits::default().search_only());
    let mut xs: Vec<Rational> = packing.positions.values().map(|p| p[0]).collect();
    xs.sort();
    assert_eq!(xs, vec![Rational::from(0), third, Rational::new(2, 3)]);
}

#[test]
fn search_is_deterministic() {
    let inst = fixtures::five_boxes();
    let limits = Limits::default().search_only();
    let (a, b) = (solve_opp(&inst, &limits), solve_opp(&inst, &limits));
    assert_eq!(a.stats.nodes, b.stats.nodes);
    assert_eq!(a.stats.prunes, b.stats.prunes);
    match (a.verdict, b.verdict) {
        (Verdict::Feasible { packing: p, .. }, Verdict::Feasible { packing: q, .. }) => assert_eq!(p, q),
        _ => panic!("expected two feasible outcomes"),
    }
}
