use c2g_core::dataset::{
    adaptive_filter, build_dataset, compute_ratio, default_edges, laplacian_grid, sample_cross_vertex, sample_same_branch,
    Dataset, DatasetConfig, GridSpec, Origin, RatioHistogram, Sample, SamplingMode, Section,
};
use c2g_core::geometry::{Configuration, Workspace};
use c2g_core::planners::{extract_path, rrt_star_build, two_phase_build, PlannerParams, Tree};
use c2g_core::rng::seeded;
use c2g_oracles::rs_brute;
use proptest::prelude::*;
use std::f64::consts::PI;

const RHO: f64 = 25.0;

fn open() -> Workspace<f64> {
    Workspace::empty("open", 500.0)
}

fn small_tree(seed: u64) -> Tree<f64> {
    let p = PlannerParams::default().with_seed(seed);
    two_phase_build(&Configuration::new(250.0, 250.0, 0.3), &open(), &p, 60, 300).unwrap()
}

fn pair(s: (f64, f64, f64), t: (f64, f64, f64), cost: f64) -> Sample<f64> {
    Sample {
        s: Configuration::new(s.0, s.1, s.2),
        t: Configuration::new(t.0, t.1, t.2),
        cost,
        origin: Origin::CrossVertex,
    }
}

#[test]
fn same_branch_costs_are_branch_arc_lengths() {
    let tree = small_tree(1);
    let mut r = seeded(2);
    for s in sample_same_branch(&tree, 200, false, &mut r).unwrap() {
        let id = tree.nodes.iter().position(|n| n.config == s.t).unwrap();
        let anc = tree.nodes.iter().position(|n| n.config == s.s).unwrap();
        let full = extract_path(&tree, id, 0.5).unwrap().length;
        let head = extract_path(&tree, anc, 0.5).unwrap().length;
        assert!((s.cost - (full - head)).abs() < 1e-6);
        assert!(s.cost >= s.s.position_distance(&s.t) - 1e-9);
    }
    for s in sample_same_branch(&tree, 500, true, &mut r).unwrap() {
        assert!(s.cost >= 0.0);
        assert!(s.cost >= s.s.position_distance(&s.t) - 1e-6, "{s:?}");
        assert!(open().contains(&s.s) && open().contains(&s.t));
    }
    let root_only = rrt_star_build(&Configuration::new(250.0, 250.0, 0.0), &open(), &PlannerParams::default(), 1).unwrap();
    assert!(sample_same_branch(&root_only, 1, true, &mut r).is_err());
}

#[test]
fn from_root_costs_match_tree_costs() {
    let tree = small_tree(3);
    let mut r = seeded(4);
    let from_root: Vec<_> = sample_same_branch(&tree, 400, false, &mut r)
        .unwrap()
        .into_iter()
        .filter(|s| s.s == tree.root)
        .collect();
    assert!(!from_root.is_empty());
    for s in from_root {
        let id = tree.nodes.iter().position(|n| n.config == s.t).unwrap();
        assert!((s.cost - tree.nodes[id].cost_from_root).abs() < 1e-12);
    }
}

#[test]
fn cross_vertex_pairs_are_exact_and_local() {
    let tree = small_tree(5);
    let p = PlannerParams::default();
    let mut r = seeded(6);
    let v = sample_cross_vertex(&tree, &open(), &p, 1.5, 300, &mut r).unwrap();
    assert!(!v.is_empty());
    for s in &v {
        assert!(s.s.position_distance(&s.t) <= 1.5 * RHO + 1e-9);
    }
    for s in v.iter().take(30) {
        let b = rs_brute((s.s.x, s.s.y, s.s.theta), (s.t.x, s.t.y, s.t.theta), RHO, 1e-3);
        assert!((s.cost - b).abs() < 1e-3, "{} vs {b}", s.cost);
    }
    assert!(sample_cross_vertex(&tree, &open(), &p, 0.0, 10, &mut r).is_err());
}

#[test]
fn ratio_examples() {
    let extent = 500.0;
    let parallel = rs_brute((0.0, 0.0, 0.0), (0.0, RHO / 4.0, 0.0), RHO, 1e-3);
    assert!(compute_ratio(&pair((0.0, 0.0, 0.0), (0.0, RHO / 4.0, 0.0), parallel), extent) > 3.0);
    let reversal = rs_brute((0.0, 0.0, 0.0), (RHO / 4.0, 0.0, PI), RHO, 1e-3);
    assert!(compute_ratio(&pair((0.0, 0.0, 0.0), (RHO / 4.0, 0.0, PI), reversal), extent) > 5.0);
    assert_eq!(compute_ratio(&pair((0.0, 0.0, 0.0), (40.0, 0.0, 0.0), 40.0), extent), 1.0);
    assert_eq!(compute_ratio(&pair((1.0, 1.0, 0.0), (1.0, 1.0, 0.0), 0.0), extent), 1.0);
}

#[test]
fn adaptive_filter_caps_each_bin() {
    let edges = [1.0, 2.0, 4.0];
    let mut samples: Vec<_> = (0..1000).map(|i| pair((0.0, 0.0, 0.0), (10.0 + i as f64 * 0.01, 0.0, 0.0), 10.0 + i as f64 * 0.01)).collect();
    samples.extend((0..10).map(|_| pair((0.0, 0.0, 0.0), (10.0, 0.0, 0.0), 30.0)));
    let out = adaptive_filter(&samples, &edges, 100, 500.0, &mut seeded(1)).unwrap();
    assert_eq!(RatioHistogram::of(&out, &edges, 500.0).counts, vec![100, 10]);
    let same = adaptive_filter(&samples[..50], &edges, 100, 500.0, &mut seeded(1)).unwrap();
    assert_eq!(same.len(), 50);
    assert!(adaptive_filter(&samples, &edges, 0, 500.0, &mut seeded(1)).is_err());
}

#[test]
fn filtering_flattens_generated_data() {
    let tree = small_tree(7);
    let mut r = seeded(8);
    let mut pool = sample_same_branch(&tree, 3000, true, &mut r).unwrap();
    pool.extend(sample_cross_vertex(&tree, &open(), &PlannerParams::default(), 1.5, 3000, &mut r).unwrap());
    let edges = default_edges();
    let before = RatioHistogram::of(&pool, &edges, 500.0);
    let after = RatioHistogram::of(&adaptive_filter(&pool, &edges, 150, 500.0, &mut r).unwrap(), &edges, 500.0);
    assert!(after.spread() <= before.spread(), "{} > {}", after.spread(), before.spread());
}

#[test]
fn laplacian_field_properties() {
    let goal = Configuration::new(250.0, 250.0, 0.0);
    let spec = GridSpec { section: Section::XY { theta: 0.0 }, x_range: (150.0, 350.0), y_range: (150.0, 350.0), nx: 41, ny: 41 };
    let (field, lap) = laplacian_grid(&goal, RHO, &spec).unwrap();
    // mirroring across the goal's heading line maps the slice onto itself
    for j in 0..41 {
        for i in 0..41 {
            assert!((field.at(i, j) - field.at(i, 40 - j)).abs() < 1e-6);
        }
    }
    // along the heading line far ahead the cost is straight-line distance
    let ahead = laplacian_grid(
        &goal,
        RHO,
        &GridSpec { section: Section::XY { theta: 0.0 }, x_range: (40.0, 60.0), y_range: (249.0, 251.0), nx: 5, ny: 3 },
    )
    .unwrap()
    .1;
    let straight = ahead.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let abs: Vec<f64> = lap.values.iter().map(|v| v.abs()).collect();
    let near = |i: usize, j: usize| (i as i64 - 19).abs() <= 4 && (j as i64 - 19).abs() <= 4;
    let (mut inner, mut outer) = (0.0f64, 0.0f64);
    for j in 0..39 {
        for i in 0..39 {
            let v = abs[j * 39 + i];
            if near(i, j) {
                inner = inner.max(v);
            } else if (i as i64 - 19).abs() > 12 || (j as i64 - 19).abs() > 12 {
                outer = outer.max(v);
            }
        }
    }
    assert!(inner > outer, "near-goal |lap| {inner} vs rim {outer}");
    assert!(straight < inner / 10.0, "straight region {straight} vs {inner}");
    let tiny = GridSpec { nx: 2, ..spec };
    assert!(laplacian_grid(&goal, RHO, &tiny).is_err());
}

#[test]
fn modes_share_trees_and_files_round_trip() {
    let base = DatasetConfig { n_trees: 2, nodes_per_tree: 300, m1: 75, target_size: 1500, pool_size: 6000, ..DatasetConfig::new(SamplingMode::Uniform, 3, RHO, 500.0) };
    let (u, ut) = build_dataset(&open(), &base).unwrap();
    let (a, at) = build_dataset(&open(), &DatasetConfig { mode: SamplingMode::Adaptive, ..base }).unwrap();
    assert_eq!(ut, at);
    assert_ne!(u.samples, a.samples);
    for d in [&u, &a] {
        assert!((d.len() as i64 - 1500).abs() <= 12, "{}", d.len());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    a.save(&path).unwrap();
    let back: Dataset<f64> = Dataset::load(&path).unwrap();
    assert_eq!(back, a);
    assert!(Dataset::<f64>::load(dir.path().join("missing.csv")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ratio_is_at_least_one(
        sx in 0.0..500.0f64, sy in 0.0..500.0f64, st in -PI..PI,
        tx in 0.0..500.0f64, ty in 0.0..500.0f64, tt in -PI..PI,
    ) {
        let cost = c2g_core::reeds_shepp::rs_length(&Configuration::new(sx, sy, st), &Configuration::new(tx, ty, tt), RHO);
        let s = pair((sx, sy, st), (tx, ty, tt), cost);
        prop_assert!(compute_ratio(&s, 500.0) >= 1.0);
        prop_assert!(cost >= s.s.position_distance(&s.t) - 1e-9);
    }

    #[test]
    fn histogram_counts_every_sample(costs in prop::collection::vec(1.0..50.0f64, 1..200)) {
        let samples: Vec<_> = costs.iter().map(|&c| pair((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), c)).collect();
        let h = RatioHistogram::of(&samples, &default_edges(), 500.0);
        prop_assert_eq!(h.counts.iter().sum::<usize>(), samples.len());
    }
}
