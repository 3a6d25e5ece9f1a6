use c2g_core::geometry::{collides, path_collides, Configuration, Footprint, Obstacle, Workspace};
use c2g_core::reeds_shepp::{rs_sample, rs_shortest};
use c2g_oracles::{footprint_hits_sampled, lattice_c2g, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn shapes(w: &Workspace<f64>) -> Vec<Shape> {
    w.obstacles
        .iter()
        .map(|o| match *o {
            Obstacle::Disc { cx, cy, r } => Shape::Disc { cx, cy, r },
            Obstacle::AxisAlignedBox { xmin, ymin, xmax, ymax } => Shape::Rect {
                x0: xmin,
                y0: ymin,
                x1: xmax,
                y1: ymax,
            },
        })
        .collect()
}

fn scene() -> Workspace<f64> {
    Workspace::new(
        "scene",
        200.0,
        vec![
            Obstacle::Disc { cx: 60.0, cy: 60.0, r: 20.0 },
            Obstacle::AxisAlignedBox { xmin: 110.0, ymin: 90.0, xmax: 160.0, ymax: 130.0 },
        ],
    )
    .unwrap()
}

/// Poses whose footprint passes within a couple of units of an obstacle boundary.
fn near_contact(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let th = rng.gen_range(-PI..PI);
    if rng.gen_bool(0.5) {
        let a = rng.gen_range(-PI..PI);
        let r = 20.0 + rng.gen_range(0.0..14.0);
        Configuration::new(60.0 + r * a.cos(), 60.0 + r * a.sin(), th)
    } else {
        let x = rng.gen_range(100.0..170.0);
        let y = if rng.gen_bool(0.5) { rng.gen_range(80.0..92.0) } else { rng.gen_range(128.0..140.0) };
        Configuration::new(x, y, th)
    }
}

#[test]
fn separating_axes_agree_with_point_sampling() {
    let w = scene();
    let sh = shapes(&w);
    let fp = Footprint::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut disagreements = 0;
    let mut hits = 0;
    for _ in 0..100 {
        let q = near_contact(&mut rng);
        let exact = collides(&q, &fp, &w);
        let sampled = footprint_hits_sampled((q.x, q.y, q.theta), fp.length, fp.width, fp.rear_offset, &sh, w.extent, 200);
        hits += exact as usize;
        if exact != sampled {
            // a 200×200 grid can only miss overlaps thinner than its spacing
            let finer = footprint_hits_sampled((q.x, q.y, q.theta), fp.length, fp.width, fp.rear_offset, &sh, w.extent, 2000);
            assert_eq!(exact, finer, "pose {q:?}");
            disagreements += 1;
        }
    }
    assert!(hits > 10 && hits < 90, "near-contact set should mix outcomes, got {hits}");
    assert!(disagreements <= 5);
}

#[test]
fn grazing_paths_agree_with_dense_resampling() {
    let w = scene();
    let fp = Footprint::default();
    let rho = 25.0;
    let delta = rho / 20.0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    for _ in 0..100 {
        let a = near_contact(&mut rng);
        let b = near_contact(&mut rng);
        let p = rs_shortest(&a, &b, rho);
        let coarse = path_collides(&rs_sample(&p, &a, delta), &fp, &w).unwrap();
        let dense = path_collides(&rs_sample(&p, &a, delta / 10.0), &fp, &w).unwrap();
        // coarse sampling may miss, never invent, a collision
        assert!(!coarse || dense);
        agree += (coarse == dense) as usize;
    }
    assert!(agree >= 95, "{agree}");
}

#[test]
fn lattice_costs_bound_free_space_length() {
    let w = Workspace::<f64>::empty("open", 100.0);
    let goal = (50.0, 50.0, 0.0);
    let is_free = |_: f64, _: f64, _: f64| true;
    let lat = lattice_c2g(goal, w.extent, 10.0, 5.0, &is_free).unwrap();
    assert_eq!(lat.cost(goal), Some(0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let q = (
            5.0 * rng.gen_range(0..=20) as f64,
            5.0 * rng.gen_range(0..=20) as f64,
            PI / 2.0 * rng.gen_range(0..4) as f64,
        );
        let c = lat.cost(q).unwrap();
        if c.is_finite() {
            let opt = c2g_core::reeds_shepp::rs_length(&Configuration::new(q.0, q.1, q.2), &Configuration::new(goal.0, goal.1, goal.2), 10.0);
            assert!(c >= opt - 1e-9, "{q:?}: lattice {c} < optimum {opt}");
        }
    }
}

#[test]
fn lattice_costs_in_clutter_respect_obstacles() {
    let w = scene();
    let fp = Footprint::point();
    let is_free = |x: f64, y: f64, th: f64| !collides(&Configuration::new(x, y, th), &fp, &w);
    let coarse = lattice_c2g((20.0, 20.0, 0.0), w.extent, 10.0, 10.0, &is_free).unwrap();
    let fine = lattice_c2g((20.0, 20.0, 0.0), w.extent, 10.0, 5.0, &is_free).unwrap();
    let mut compared = 0;
    for ix in 0..=20 {
        for iy in 0..=20 {
            for h in 0..4 {
                let q = (10.0 * ix as f64, 10.0 * iy as f64, PI / 2.0 * h as f64);
                let (c, f) = (coarse.cost(q).unwrap(), fine.cost(q).unwrap());
                if c.is_finite() {
                    assert!(f <= c + 1e-9, "refinement raised {q:?}: {c} -> {f}");
                    compared += 1;
                }
                let d = ((q.0 - 20.0f64).powi(2) + (q.1 - 20.0f64).powi(2)).sqrt();
                if f.is_finite() {
                    assert!(f >= d - 1e-9);
                }
            }
        }
    }
    assert!(compared > 1000);
    assert!(lattice_c2g((60.0, 60.0, 0.0), w.extent, 10.0, 10.0, &is_free).is_err());
}
