//! Learned cost-to-go: a rectifier network from a normalized configuration pair to cost.

mod io;
mod mlp;
mod train;

pub use io::{load_model, read_model, save_model, write_model, FORMAT_VERSION};
pub use mlp::{Gradients, Layer, Mlp};
pub use train::{train, train_from, Adam, TrainConfig, TrainReport};

use ndarray::Array2;

use crate::dataset::Sample;
use crate::error::{Error, Result};
use crate::geometry::{normalize, Configuration, NormalizedConfig};
use crate::rng;
use crate::scalar::Scalar;

/// Layer widths of the production network.
pub const LAYER_SIZES: [usize; 5] = [8, 256, 256, 256, 1];

#[derive(Debug, Clone, PartialEq)]
pub struct C2gModel<T> {
    pub mlp: Mlp<T>,
    pub workspace_id: String,
    pub rho: T,
    pub extent: T,
}

/// Writes the 8 input features of `(s, t)` into `row`.
#[inline]
pub fn pair_features<T: Scalar>(s: &NormalizedConfig<T>, t: &NormalizedConfig<T>, row: &mut [T]) {
    row[..4].copy_from_slice(&s.as_array());
    row[4..8].copy_from_slice(&t.as_array());
}

impl<T: Scalar> C2gModel<T> {
    pub fn init(seed: u64, workspace_id: impl Into<String>, rho: T, extent: T) -> Self {
        Self::init_with_sizes(&LAYER_SIZES, seed, workspace_id, rho, extent)
    }

    pub fn init_with_sizes(sizes: &[usize], seed: u64, workspace_id: impl Into<String>, rho: T, extent: T) -> Self {
        let mut r = rng::stream(seed, "model", "init");
        Self {
            mlp: Mlp::init(sizes, &mut r),
            workspace_id: workspace_id.into(),
            rho,
            extent,
        }
    }

    /// Predicted cost in workspace units, clamped at zero.
    pub fn predict(&self, s: &NormalizedConfig<T>, t: &NormalizedConfig<T>) -> Result<T> {
        Ok(self.predict_batch(&[(*s, *t)])?[0])
    }

    pub fn predict_batch(&self, pairs: &[(NormalizedConfig<T>, NormalizedConfig<T>)]) -> Result<Vec<T>> {
        let mut x = Array2::<T>::zeros((pairs.len(), 8));
        for (row, (s, t)) in x.rows_mut().into_iter().zip(pairs) {
            if !s.is_finite() || !t.is_finite() {
                return Err(Error::NonFinite("model input"));
            }
            pair_features(s, t, row.into_slice().expect("rows of a standard layout array are contiguous"));
        }
        Ok(self
            .mlp
            .forward(x.view())
            .iter()
            .map(|&v| (v * self.extent).max(T::zero()))
            .collect())
    }

    /// Predicted cost from each of `from` to `goal`.
    pub fn predict_to(&self, from: &[Configuration<T>], goal: &Configuration<T>) -> Result<Vec<T>> {
        let g = normalize(goal, self.extent)?;
        let pairs = from
            .iter()
            .map(|q| Ok((normalize(q, self.extent)?, g)))
            .collect::<Result<Vec<_>>>()?;
        self.predict_batch(&pairs)
    }

    /// Mean of the predictions in both directions. The true cost is symmetric for a car that
    /// can reverse, so averaging cancels part of the model's error.
    pub fn predict_symmetric_to(&self, from: &[Configuration<T>], goal: &Configuration<T>) -> Result<Vec<T>> {
        let g = normalize(goal, self.extent)?;
        let mut pairs = Vec::with_capacity(2 * from.len());
        for q in from {
            let n = normalize(q, self.extent)?;
            pairs.push((n, g));
            pairs.push((g, n));
        }
        let half = T::of(0.5);
        Ok(self.predict_batch(&pairs)?.chunks(2).map(|c| half * (c[0] + c[1])).collect())
    }

    pub fn cast<U: Scalar>(&self) -> C2gModel<U> {
        C2gModel {
            mlp: self.mlp.cast(),
            workspace_id: self.workspace_id.clone(),
            rho: self.rho.cast(),
            extent: self.extent.cast(),
        }
    }
}

/// Feature matrix and normalized targets (`cost / extent`) for `samples`.
pub fn design_matrix<T: Scalar>(samples: &[Sample<T>], extent: T) -> Result<(Array2<T>, Vec<T>)> {
    let mut x = Array2::<T>::zeros((samples.len(), 8));
    let mut y = Vec::with_capacity(samples.len());
    for (row, s) in x.rows_mut().into_iter().zip(samples) {
        let a = normalize(&s.s, extent)?;
        let b = normalize(&s.t, extent)?;
        pair_features(&a, &b, row.into_slice().expect("contiguous row"));
        y.push(s.cost / extent);
    }
    Ok((x, y))
}
