mod common;

use dense_tsp::experiments::{ProcessKind, TrialSetup};
use dense_tsp::geometry::CitySelection;
use dense_tsp::tours::{merge_cycles, CityCycle, MAX_REMOVALS};
use dense_tsp::{build_city_grid, sample_binomial, select_well_connected, DensityField, Error, Instance};

fn setup(sel: &CitySelection) -> TrialSetup {
    TrialSetup {
        selection: sel.clone(),
        density: DensityField::uniform(),
        process: ProcessKind::Binomial,
        exact_threshold: 10,
        exact_only: false,
        global_exact_limit: 0,
    }
}

fn city_cycles(inst: &Instance, sel: &CitySelection) -> (Vec<CityCycle>, f64) {
    let st = setup(sel);
    let mut v = 0.0;
    let cycles = (0..sel.len())
        .map(|l| {
            let ids = inst.nodes_in_city(l);
            let (order, len, _) = st.solve_city(&inst.city_points(l), sel.square(l)).unwrap();
            v += len;
            CityCycle { city: l, order: order.into_iter().map(|k| ids[k]).collect() }
        })
        .collect();
    (cycles, v)
}

fn check_merge(inst: &Instance, sel: &CitySelection) {
    let (cycles, v) = city_cycles(inst, sel);
    let (tour, trace) = merge_cycles(&inst.nodes, sel, &cycles).unwrap();
    tour.verify(&inst.nodes).unwrap();
    let (r, s) = (sel.grid().r(), sel.grid().s());
    let cap = s + 8.0 * r;
    let slack = tour.length() - v;
    assert!(slack <= 2.0 * (sel.len() as f64 - 1.0) * cap + 1e-9, "slack {slack}");
    assert_eq!(trace.added_cross_edges.len(), 2 * (sel.len() - 1));
    assert!(trace.added_cross_edges.iter().all(|e| e.length <= cap + 1e-12));
    assert!(trace.max_removals() <= MAX_REMOVALS);
    trace.check(1e-9).unwrap();
    let mut merged = trace.order_of_merging.clone();
    merged.sort_unstable();
    assert_eq!(merged, (0..sel.len()).collect::<Vec<_>>());
}

#[test]
fn seeded_configs_stay_within_the_merge_budget() {
    let grid = build_city_grid(0.1, 0.2).unwrap();
    let f = DensityField::uniform();
    for seed in 0..60 {
        let n_cities = 2 + (seed as usize % 7);
        let sel = select_well_connected(&grid, n_cities, seed).unwrap();
        let inst = sample_binomial(&sel, &f, 14 * n_cities, seed).unwrap();
        if inst.city_counts().iter().all(|&c| c >= 8) {
            check_merge(&inst, &sel);
        }
    }
}

#[test]
fn plus_shape_centre_is_anchor_four_times() {
    let grid = build_city_grid(0.1, 0.2).unwrap();
    // centre (1,1) first, then its four lattice neighbours
    let ids = [(1, 1), (0, 1), (2, 1), (1, 0), (1, 2)].map(|c| grid.id_of(c).unwrap());
    let sel = CitySelection::from_indices(grid, ids.to_vec()).unwrap();
    let inst = sample_binomial(&sel, &DensityField::uniform(), 100, 3).unwrap();
    assert!(inst.city_counts().iter().all(|&c| c >= 8));
    check_merge(&inst, &sel);
}

#[test]
fn single_city_is_returned_unchanged() {
    let grid = build_city_grid(0.1, 0.2).unwrap();
    let sel = select_well_connected(&grid, 1, 5).unwrap();
    let inst = sample_binomial(&sel, &DensityField::uniform(), 9, 5).unwrap();
    let (cycles, v) = city_cycles(&inst, &sel);
    let (tour, trace) = merge_cycles(&inst.nodes, &sel, &cycles).unwrap();
    assert_eq!(tour.order(), cycles[0].order.as_slice());
    assert!((tour.length() - v).abs() < 1e-12);
    assert!(trace.added_cross_edges.is_empty());
}

#[test]
fn short_cycles_are_rejected() {
    let grid = build_city_grid(0.1, 0.2).unwrap();
    let sel = select_well_connected(&grid, 2, 1).unwrap();
    let inst = sample_binomial(&sel, &DensityField::uniform(), 8, 1).unwrap();
    let (cycles, _) = city_cycles(&inst, &sel);
    assert!(matches!(merge_cycles(&inst.nodes, &sel, &cycles), Err(Error::Precondition(_))));
}

#[test]
fn cycles_must_cover_the_instance() {
    let grid = build_city_grid(0.1, 0.2).unwrap();
    let sel = select_well_connected(&grid, 2, 2).unwrap();
    let inst = sample_binomial(&sel, &DensityField::uniform(), 40, 2).unwrap();
    let (mut cycles, _) = city_cycles(&inst, &sel);
    cycles[1].order.pop();
    assert!(merge_cycles(&inst.nodes, &sel, &cycles).is_err());
}
