use c2g_core::geometry::Configuration;
use c2g_core::reeds_shepp::{rs_interpolate, rs_length, rs_sample, rs_shortest, rs_truncate};
use c2g_oracles::rs_brute;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_pose(rng: &mut ChaCha8Rng, half: f64) -> Configuration<f64> {
    Configuration::new(
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
        rng.gen_range(-PI..PI),
    )
}

fn tuple(c: &Configuration<f64>) -> (f64, f64, f64) {
    (c.x, c.y, c.theta)
}

#[test]
fn matches_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = random_pose(&mut rng, 4.0);
        let t = random_pose(&mut rng, 4.0);
        let fast = rs_length(&s, &t, 1.0);
        let slow = rs_brute(tuple(&s), tuple(&t), 1.0, 1e-3);
        worst = worst.max((fast - slow).abs());
        assert!((fast - slow).abs() < 1e-4, "{s:?} -> {t:?}: {fast} vs {slow}");
    }
    eprintln!("worst oracle gap {worst:e}");
}

#[test]
fn reversal_in_place_matches_oracle() {
    let s = Configuration::new(0.0, 0.0, 0.0);
    let t = Configuration::new(0.0, 0.0, PI);
    let fast = rs_length(&s, &t, 1.0);
    let slow = rs_brute(tuple(&s), tuple(&t), 1.0, 1e-3);
    assert!((fast - slow).abs() < 1e-6, "{fast} {slow}");
}

#[test]
fn endpoint_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let s = random_pose(&mut rng, 50.0);
        let t = random_pose(&mut rng, 50.0);
        let rho = rng.gen_range(0.5..10.0);
        let p = rs_shortest(&s, &t, rho);
        let e = rs_interpolate(&p, p.total_length, &s).unwrap();
        assert!(e.position_distance(&t) < 1e-6, "{s:?} {t:?} {e:?}");
        assert!(e.heading_distance(&t) < 1e-6);
        assert!((p.total_length - rs_length(&s, &t, rho)).abs() < 1e-9);
        assert!(p.segments.len() <= 5);
        for seg in &p.segments {
            assert!(seg.param >= 0.0);
        }
    }
}

#[test]
fn truncation_hits_requested_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let s = random_pose(&mut rng, 10.0);
        let t = random_pose(&mut rng, 10.0);
        let p = rs_shortest(&s, &t, 1.0);
        let cut = rng.gen_range(0.01..1.0) * p.total_length;
        let q = rs_truncate(&p, cut);
        assert!((q.total_length - cut).abs() < 1e-12);
        let param_len: f64 = q.segments.iter().map(|s| s.param).sum();
        assert!((param_len - cut).abs() < 1e-9);
        let a = q.end(&s);
        let b = rs_interpolate(&p, cut, &s).unwrap();
        assert!(a.position_distance(&b) < 1e-9);
    }
}

#[test]
fn sampled_turning_rate_is_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rho = 2.0;
    let spacing = 0.01;
    for _ in 0..100 {
        let s = random_pose(&mut rng, 10.0);
        let t = random_pose(&mut rng, 10.0);
        let p = rs_shortest(&s, &t, rho);
        let pts = rs_sample(&p, &s, spacing);
        for w in pts.windows(2) {
            let ds = w[0].position_distance(&w[1]);
            if ds < 1e-9 {
                continue;
            }
            let rate = w[0].heading_distance(&w[1]) / ds;
            assert!(rate <= 1.0 / rho + 1e-6, "rate {rate}");
        }
    }
}

fn pose() -> impl Strategy<Value = Configuration<f64>> {
    (-20.0..20.0f64, -20.0..20.0f64, -PI..PI).prop_map(|(x, y, t)| Configuration::new(x, y, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn metric_symmetry(a in pose(), b in pose()) {
        prop_assert!((rs_length(&a, &b, 1.0) - rs_length(&b, &a, 1.0)).abs() < 1e-9);
    }

    #[test]
    fn mirror_symmetry(a in pose(), b in pose()) {
        let m = rs_length(&a.mirrored(), &b.mirrored(), 1.0);
        prop_assert!((rs_length(&a, &b, 1.0) - m).abs() < 1e-9);
    }

    #[test]
    fn rigid_invariance(a in pose(), b in pose(), dx in -50.0..50.0f64, dy in -50.0..50.0f64, rot in -PI..PI) {
        let (s, c) = rot.sin_cos();
        let tf = |p: &Configuration<f64>| Configuration::new(c * p.x - s * p.y + dx, s * p.x + c * p.y + dy, p.theta + rot);
        prop_assert!((rs_length(&a, &b, 1.0) - rs_length(&tf(&a), &tf(&b), 1.0)).abs() < 1e-9);
    }

    #[test]
    fn scale_covariance(a in pose(), b in pose(), k in 0.1..10.0f64) {
        let sc = |p: &Configuration<f64>| Configuration::new(k * p.x, k * p.y, p.theta);
        let lhs = rs_length(&sc(&a), &sc(&b), k);
        let rhs = k * rs_length(&a, &b, 1.0);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn triangle_inequality(a in pose(), b in pose(), c in pose()) {
        let ac = rs_length(&a, &c, 1.0);
        prop_assert!(ac <= rs_length(&a, &b, 1.0) + rs_length(&b, &c, 1.0) + 1e-9);
    }

    #[test]
    fn euclidean_lower_bound(a in pose(), b in pose()) {
        prop_assert!(rs_length(&a, &b, 1.0) >= a.position_distance(&b) - 1e-12);
    }
}
