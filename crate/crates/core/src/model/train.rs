use std::io::Write;

use ndarray::{Array1, Array2, Axis, Zip};
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use super::mlp::{Gradients, Layer, Mlp};
use super::{design_matrix, C2gModel, LAYER_SIZES};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub validation_fraction: f64,
    pub seed: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Feed each pair in a random direction; costs are symmetric for a reversible car.
    pub swap_augment: bool,
    /// Cosine decay of the learning rate down to this fraction over the run.
    pub final_lr_fraction: f64,
    /// A loss above this (normalized units) counts as divergence.
    pub divergence_threshold: f64,
    pub min_samples: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            batch_size: 256,
            epochs: 200,
            validation_fraction: 0.1,
            seed: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            swap_augment: true,
            final_lr_fraction: 1.0,
            divergence_threshold: 1e3,
            min_samples: 1000,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be positive");
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 0.5) {
            return bad("validation fraction must lie in (0, 0.5)");
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return bad("batch size and epochs must be positive");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) || !(self.eps > 0.0) {
            return bad("optimizer moments need betas in [0, 1) and eps > 0");
        }
        if !(self.final_lr_fraction > 0.0 && self.final_lr_fraction <= 1.0) {
            return bad("final learning-rate fraction must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport {
    pub train_mse: Vec<f64>,
    pub val_mse: Vec<f64>,
    /// 1-based epoch of the returned parameters.
    pub best_epoch: usize,
    /// Validation RMSE of the returned parameters, in cost units.
    pub rmse: f64,
}

impl TrainReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["epoch", "train_mse", "val_mse"])?;
        for (i, (t, v)) in self.train_mse.iter().zip(&self.val_mse).enumerate() {
            w.write_record([(i + 1).to_string(), t.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Adaptive-moment optimizer state.
#[derive(Debug, Clone)]
pub struct Adam<T> {
    pub beta1: T,
    pub beta2: T,
    pub eps: T,
    m: Vec<Layer<T>>,
    v: Vec<Layer<T>>,
    t: i32,
}

impl<T: Scalar> Adam<T> {
    pub fn new(model: &Mlp<T>, beta1: f64, beta2: f64, eps: f64) -> Self {
        let zeros = || {
            model
                .layers
                .iter()
                .map(|l| Layer {
                    w: Array2::zeros(l.w.raw_dim()),
                    b: Array1::zeros(l.b.raw_dim()),
                })
                .collect::<Vec<_>>()
        };
        Self {
            beta1: T::of(beta1),
            beta2: T::of(beta2),
            eps: T::of(eps),
            m: zeros(),
            v: zeros(),
            t: 0,
        }
    }

    pub fn step(&mut self, model: &mut Mlp<T>, g: &Gradients<T>, lr: T) {
        self.t += 1;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        let c1 = T::one() - b1.powi(self.t);
        let c2 = T::one() - b2.powi(self.t);
        let lr_t = lr * c2.sqrt() / c1;
        let eps_t = eps * c2.sqrt();
        let one = T::one();
        for (((p, g), m), v) in model.layers.iter_mut().zip(&g.layers).zip(&mut self.m).zip(&mut self.v) {
            Zip::from(&mut p.w).and(&g.w).and(&mut m.w).and(&mut v.w).for_each(|p, &g, m, v| {
                *m = b1 * *m + (one - b1) * g;
                *v = b2 * *v + (one - b2) * g * g;
                *p = *p - lr_t * *m / (v.sqrt() + eps_t);
            });
            Zip::from(&mut p.b).and(&g.b).and(&mut m.b).and(&mut v.b).for_each(|p, &g, m, v| {
                *m = b1 * *m + (one - b1) * g;
                *v = b2 * *v + (one - b2) * g * g;
                *p = *p - lr_t * *m / (v.sqrt() + eps_t);
            });
        }
    }
}

fn mse_of<T: Scalar>(m: &Mlp<T>, x: &Array2<T>, y: &[T]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    let mut acc = 0.0;
    for (start, chunk) in (0..y.len()).step_by(4096).map(|s| (s, &y[s..(s + 4096).min(y.len())])) {
        let pred = m.forward(x.slice(ndarray::s![start..start + chunk.len(), ..]));
        acc += pred
            .iter()
            .zip(chunk)
            .map(|(&p, &t)| {
                let e = (p - t).as_f64();
                e * e
            })
            .sum::<f64>();
    }
    acc / y.len() as f64
}

/// Swaps the start and goal halves of a feature row.
fn swap_row<T: Scalar>(row: &mut [T]) {
    for i in 0..4 {
        row.swap(i, i + 4);
    }
}

/// Mini-batch training of a fresh model on `data`; returns the best-validation parameters.
pub fn train<T: Scalar>(data: &Dataset<T>, cfg: &TrainConfig) -> Result<(C2gModel<T>, TrainReport)> {
    let extent = T::of(data.meta.extent);
    let model = C2gModel::init(cfg.seed, data.workspace_id.clone(), T::of(data.meta.rho), extent);
    train_from(model, data, cfg, &LAYER_SIZES)
}

/// Like [`train`] but starting from `model`, whose layer widths must equal `sizes`.
pub fn train_from<T: Scalar>(
    mut model: C2gModel<T>,
    data: &Dataset<T>,
    cfg: &TrainConfig,
    sizes: &[usize],
) -> Result<(C2gModel<T>, TrainReport)> {
    cfg.validate()?;
    if model.mlp.sizes() != sizes {
        return Err(Error::InvalidArgument("model shape differs from the requested sizes".into()));
    }
    if data.len() < cfg.min_samples {
        return Err(Error::InvalidArgument(format!(
            "dataset has {} samples, training needs at least {}",
            data.len(),
            cfg.min_samples
        )));
    }
    let extent = T::of(data.meta.extent);
    let (x, y) = design_matrix(&data.samples, extent)?;

    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng::stream(cfg.seed, "train", "split"));
    let n_val = ((data.len() as f64 * cfg.validation_fraction).round() as usize).max(1);
    let (val_idx, train_idx) = order.split_at(n_val);
    let x_val = x.select(Axis(0), val_idx);
    let y_val: Vec<T> = val_idx.iter().map(|&i| y[i]).collect();
    let mut train_idx = train_idx.to_vec();

    let mut shuffle_rng = rng::stream(cfg.seed, "train", "batches");
    let mut opt = Adam::new(&model.mlp, cfg.beta1, cfg.beta2, cfg.eps);
    let mut best = (f64::INFINITY, model.mlp.clone(), 0usize);
    let mut report = TrainReport {
        train_mse: Vec::with_capacity(cfg.epochs),
        val_mse: Vec::with_capacity(cfg.epochs),
        best_epoch: 0,
        rmse: 0.0,
    };
    let bs = cfg.batch_size;
    let mut xb = Array2::<T>::zeros((bs, 8));
    let mut yb: Vec<T> = Vec::with_capacity(bs);

    for epoch in 1..=cfg.epochs {
        let progress = (epoch - 1) as f64 / cfg.epochs.max(2).saturating_sub(1) as f64;
        let decay = cfg.final_lr_fraction + (1.0 - cfg.final_lr_fraction) * 0.5 * (1.0 + (std::f64::consts::PI * progress).cos());
        let lr = T::of(cfg.learning_rate * decay);
        train_idx.shuffle(&mut shuffle_rng);
        let mut sum = 0.0;
        for chunk in train_idx.chunks(bs) {
            let n = chunk.len();
            if xb.nrows() != n {
                xb = Array2::zeros((n, 8));
            }
            yb.clear();
            for (r, &i) in chunk.iter().enumerate() {
                let mut row = xb.row_mut(r);
                row.assign(&x.row(i));
                if cfg.swap_augment && shuffle_rng.gen_bool(0.5) {
                    swap_row(row.as_slice_mut().expect("contiguous row"));
                }
                yb.push(y[i]);
            }
            let (loss, g) = model.mlp.loss_and_gradients(xb.view(), &yb);
            let loss = loss.as_f64();
            if !loss.is_finite() || loss > cfg.divergence_threshold {
                return Err(Error::Diverged { epoch, loss });
            }
            sum += loss * n as f64;
            opt.step(&mut model.mlp, &g, lr);
        }
        let train_mse = sum / train_idx.len() as f64;
        let val_mse = mse_of(&model.mlp, &x_val, &y_val);
        if !val_mse.is_finite() || val_mse > cfg.divergence_threshold || !model.mlp.is_finite() {
            return Err(Error::Diverged { epoch, loss: val_mse });
        }
        report.train_mse.push(train_mse);
        report.val_mse.push(val_mse);
        if val_mse < best.0 {
            best = (val_mse, model.mlp.clone(), epoch);
        }
    }
    report.best_epoch = best.2;
    report.rmse = best.0.sqrt() * data.meta.extent;
    model.mlp = best.1;
    Ok((model, report))
}
