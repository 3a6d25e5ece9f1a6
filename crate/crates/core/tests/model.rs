use c2g_core::dataset::{Dataset, DatasetMeta, Origin, Sample, SamplingMode};
use c2g_core::geometry::{normalize, Configuration};
use c2g_core::model::{load_model, save_model, train, train_from, C2gModel, Mlp, TrainConfig, LAYER_SIZES};
use c2g_core::reeds_shepp::rs_length;
use c2g_core::rng::seeded;
use c2g_core::Error;
use ndarray::Array2;
use rand::Rng;

const TINY: [usize; 5] = [8, 4, 4, 4, 1];

fn random_rows(n: usize, seed: u64) -> Array2<f64> {
    let mut r = seeded(seed);
    Array2::from_shape_fn((n, 8), |(_, j)| if j % 4 < 2 { r.gen_range(0.0..1.0) } else { r.gen_range(-1.0..1.0) })
}

fn open_dataset(n: usize, seed: u64) -> Dataset<f64> {
    let mut r = seeded(seed);
    let pose = |r: &mut c2g_core::rng::Rng| {
        Configuration::new(r.gen_range(0.0..500.0), r.gen_range(0.0..500.0), r.gen_range(-3.14..3.14))
    };
    let samples = (0..n)
        .map(|_| {
            let (s, t) = (pose(&mut r), pose(&mut r));
            Sample { s, t, cost: rs_length(&s, &t, 25.0), origin: Origin::CrossVertex }
        })
        .collect();
    Dataset {
        workspace_id: "synthetic".into(),
        samples,
        meta: DatasetMeta {
            workspace_id: "synthetic".into(),
            rho: 25.0,
            extent: 500.0,
            master_seed: seed,
            seeds: vec![],
            mode: SamplingMode::Uniform,
            same_branch: 0,
            cross_vertex: n,
        },
    }
}

/// Largest relative gap between backprop and central differences over every parameter.
fn worst_gradient_gap(m: &Mlp<f64>, x: &Array2<f64>, y: &[f64], h: f64) -> f64 {
    let (_, g) = m.loss_and_gradients(x.view(), y);
    let analytic: Vec<f64> = g.layers.iter().flat_map(|l| l.w.iter().chain(l.b.iter()).copied().collect::<Vec<_>>()).collect();
    let flat = m.flat_params();
    let sizes = m.sizes();
    let mut worst = 0.0f64;
    for i in 0..flat.len() {
        let mut p = flat.clone();
        p[i] += h;
        let up = Mlp::from_flat(&sizes, &p).unwrap().loss_and_gradients(x.view(), y).0;
        p[i] -= 2.0 * h;
        let down = Mlp::from_flat(&sizes, &p).unwrap().loss_and_gradients(x.view(), y).0;
        let fd = (up - down) / (2.0 * h);
        let scale = analytic[i].abs().max(fd.abs());
        // parameters behind an inactive unit have exactly zero gradient both ways
        let gap = if scale < 1e-12 { 0.0 } else { (analytic[i] - fd).abs() / scale };
        worst = worst.max(gap);
    }
    worst
}

#[test]
fn gradients_match_central_differences() {
    for seed in 0..5 {
        let m = Mlp::<f64>::init(&TINY, &mut seeded(seed));
        let x = random_rows(1, 100 + seed);
        let worst = worst_gradient_gap(&m, &x, &[0.37], 1e-5);
        assert!(worst < 1e-4, "seed {seed}: {worst:e}");
    }
}

#[test]
fn duplicated_batch_leaves_loss_and_gradients() {
    let m = Mlp::<f64>::init(&TINY, &mut seeded(3));
    let x = random_rows(5, 9);
    let y = [0.1, 0.2, 0.3, 0.4, 0.5];
    let (l1, g1) = m.loss_and_gradients(x.view(), &y);
    let x2 = ndarray::concatenate(ndarray::Axis(0), &[x.view(), x.view()]).unwrap();
    let y2: Vec<f64> = y.iter().chain(y.iter()).copied().collect();
    let (l2, g2) = m.loss_and_gradients(x2.view(), &y2);
    assert!((l1 - l2).abs() < 1e-15);
    for (a, b) in g1.layers.iter().zip(&g2.layers) {
        for (u, v) in a.w.iter().zip(b.w.iter()).chain(a.b.iter().zip(b.b.iter())) {
            assert!((u - v).abs() < 1e-14);
        }
    }
}

#[test]
fn hidden_preactivations_have_unit_scale() {
    let x = random_rows(16, 5);
    for seed in 0..1000 {
        let m = Mlp::<f32>::init(&LAYER_SIZES, &mut seeded(seed));
        let z = m.pre_activations(x.mapv(|v| v as f32).view());
        for layer in &z[..3] {
            let n = layer.len() as f64;
            let mean = layer.iter().map(|&v| v as f64).sum::<f64>() / n;
            let var = layer.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            assert!((0.5..=2.0).contains(&sd), "seed {seed}: std {sd}");
        }
    }
}

#[test]
fn predictions_are_finite_and_batch_consistent() {
    let m = C2gModel::<f32>::init(1, "w", 25.0, 500.0);
    let mut r = seeded(4);
    let mut pairs = Vec::new();
    for _ in 0..10_000 {
        let s = Configuration::new(r.gen_range(0.0..500.0f32), r.gen_range(0.0..500.0), r.gen_range(-3.0..3.0));
        let t = Configuration::new(r.gen_range(0.0..500.0f32), r.gen_range(0.0..500.0), r.gen_range(-3.0..3.0));
        pairs.push((normalize(&s, 500.0).unwrap(), normalize(&t, 500.0).unwrap()));
    }
    let out = m.predict_batch(&pairs).unwrap();
    assert!(out.iter().all(|v| v.is_finite() && *v >= 0.0));
    let same = m.predict_batch(&vec![pairs[0]; 7]).unwrap();
    assert!(same.iter().all(|&v| v == same[0]));
    let mut bad = pairs[0];
    bad.0.xn = f32::NAN;
    assert!(matches!(m.predict(&bad.0, &bad.1), Err(Error::NonFinite(_))));
}

#[test]
fn training_is_bit_reproducible_and_improves() {
    let d = open_dataset(1500, 3).cast::<f32>();
    let cfg = TrainConfig { epochs: 3, seed: 11, ..Default::default() };
    let (a, ra) = train(&d, &cfg).unwrap();
    let (b, rb) = train(&d, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
    assert!(ra.train_mse.iter().chain(&ra.val_mse).all(|v| v.is_finite()));

    let tiny = C2gModel::<f64>::init_with_sizes(&TINY, 2, "synthetic", 25.0, 500.0);
    let d64 = open_dataset(1500, 4);
    let (_, rep) = train_from(tiny, &d64, &TrainConfig { epochs: 200, ..Default::default() }, &TINY).unwrap();
    assert!(rep.train_mse[199] < rep.train_mse[0]);
}

#[test]
fn training_rejects_bad_inputs_and_reports_divergence() {
    let d = open_dataset(1200, 5).cast::<f32>();
    let too_small = Dataset { samples: d.samples[..999].to_vec(), ..d.clone() };
    assert!(matches!(train(&too_small, &TrainConfig::default()), Err(Error::InvalidArgument(_))));
    assert!(train(&d, &TrainConfig { validation_fraction: 0.6, ..Default::default() }).is_err());
    let err = train(&d, &TrainConfig { learning_rate: 10.0, epochs: 5, ..Default::default() }).unwrap_err();
    assert!(matches!(err, Error::Diverged { epoch, .. } if epoch >= 1), "{err}");
}

#[test]
fn model_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.model");
    let m = C2gModel::<f32>::init(9, "ws-9", 25.0, 500.0);
    save_model(&m, &path).unwrap();
    let back: C2gModel<f32> = load_model(&path).unwrap();
    assert_eq!(back, m);
    let mut r = seeded(1);
    for _ in 0..100 {
        let s = Configuration::new(r.gen_range(0.0..500.0f32), r.gen_range(0.0..500.0), r.gen_range(-3.0..3.0));
        let t = Configuration::new(r.gen_range(0.0..500.0f32), r.gen_range(0.0..500.0), r.gen_range(-3.0..3.0));
        let (a, b) = (normalize(&s, 500.0).unwrap(), normalize(&t, 500.0).unwrap());
        assert_eq!(m.predict(&a, &b).unwrap().to_bits(), back.predict(&a, &b).unwrap().to_bits());
    }
}

#[test]
fn symmetric_prediction_averages_both_directions() {
    let m = C2gModel::<f64>::init(11, "open", 25.0, 500.0);
    let goal = Configuration::new(300.0, 120.0, -1.2);
    let from = [Configuration::new(40.0, 400.0, 2.0), Configuration::new(310.0, 130.0, 0.1), goal];
    let sym = m.predict_symmetric_to(&from, &goal).unwrap();
    let g = normalize(&goal, 500.0).unwrap();
    for (q, v) in from.iter().zip(&sym) {
        let n = normalize(q, 500.0).unwrap();
        let both = 0.5 * (m.predict(&n, &g).unwrap() + m.predict(&g, &n).unwrap());
        assert!((v - both).abs() < 1e-12);
        let back = m.predict_symmetric_to(&[goal], q).unwrap()[0];
        assert!((v - back).abs() < 1e-12);
    }
    assert_eq!(m.predict_symmetric_to(&[], &goal).unwrap(), Vec::<f64>::new());
}
