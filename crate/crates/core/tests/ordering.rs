use ipp_core::aco::{solve, AcoParams};
use ipp_core::baf::baf_path;
use ipp_core::formation::{build_formation, viewpoint_spacing, CameraSpec};
use ipp_core::geom::Vec3;
use ipp_core::oracle::exhaustive_optimum;
use ipp_core::pathcost::{build_cost_matrix, path_fitness, CostMatrix, CostWeights, PathKind};
use ipp_core::synthetic::box_mesh;
use ipp_core::viewpoints::build_viewpoint_set;
use proptest::prelude::*;

fn pts_strategy(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec3<f64>>> {
    prop::collection::vec((0.0..100.0f64, 0.0..100.0f64, 0.0..100.0f64), n)
        .prop_map(|v| v.into_iter().map(|(x, y, z)| Vec3::new(x, y, z)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn optimum_invariant_under_weight_scaling(pts in pts_strategy(3..=7), k in 0.1..50.0f64) {
        let base = CostMatrix::from_points(&pts, CostWeights::new(1.0, 2.0).unwrap()).unwrap();
        let scaled = CostMatrix::from_points(&pts, CostWeights::new(k, 2.0 * k).unwrap()).unwrap();
        let (order, f) = exhaustive_optimum(&base, PathKind::Open, 10).unwrap();
        let (_, fk) = exhaustive_optimum(&scaled, PathKind::Open, 10).unwrap();
        prop_assert!((fk - k * f).abs() <= 1e-9 * fk.max(1.0));
        prop_assert!((path_fitness(&order, &scaled).unwrap() - fk).abs() <= 1e-9 * fk.max(1.0));
    }

    #[test]
    fn colony_never_beats_the_optimum(pts in pts_strategy(2..=7), seed in any::<u64>()) {
        let cm = CostMatrix::from_points(&pts, CostWeights::default()).unwrap();
        let (_, opt) = exhaustive_optimum(&cm, PathKind::Open, 10).unwrap();
        let r = solve(&cm, &AcoParams { n_ants: 10, max_iterations: 20, seed, ..Default::default() }).unwrap();
        prop_assert!(r.best_fitness >= opt - 1e-9);
        let mut seen = r.best_order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..pts.len()).collect::<Vec<_>>());
    }
}

#[test]
fn colony_beats_or_matches_baseline_on_the_box() {
    let cam = CameraSpec::from_degrees(49.4, 63.0, 20.0);
    let fs = build_formation(&cam, 2, 2, 1.0240630511945596, 2.7958888329355602).unwrap();
    let sp = viewpoint_spacing(&fs, 0.1 * fs.footprint_w, 0.1 * fs.footprint_h).unwrap();
    let mesh = box_mesh(Vec3::new(0.0, 0.0, 0.0), Vec3::new(40.0, 40.0, 68.0));
    let vps = build_viewpoint_set(&mesh, &fs, &sp, 20.0, 2.0 * sp.delta_w, 3).unwrap();
    let cm = build_cost_matrix(&vps, CostWeights::new(1.0, 2.0).unwrap()).unwrap();
    let (_, baf) = baf_path(&vps, &cm).unwrap();
    let mean = (0..10)
        .map(|seed| solve(&cm, &AcoParams { seed, ..Default::default() }).unwrap().best_fitness)
        .sum::<f64>()
        / 10.0;
    assert!(baf >= mean - 1e-9, "baseline {baf} < colony mean {mean}");
}
