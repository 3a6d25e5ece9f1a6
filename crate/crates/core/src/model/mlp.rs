use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng as _;

use crate::rng::Rng;
use crate::scalar::Scalar;

/// Dense layer; `w` is `fan_in × fan_out` so a batch maps as `x · w + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    pub w: Array2<T>,
    pub b: Array1<T>,
}

/// Rectifier network with a linear output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp<T> {
    pub layers: Vec<Layer<T>>,
}

/// Per-layer gradients, same shapes as the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub layers: Vec<Layer<T>>,
}

impl<T: Scalar> Mlp<T> {
    /// Uniform fan-in scaled weights in `±sqrt(6 / fan_in)`, zero biases.
    pub fn init(sizes: &[usize], rng: &mut Rng) -> Self {
        assert!(sizes.len() >= 2, "need at least an input and an output size");
        let layers = sizes
            .windows(2)
            .map(|s| {
                let limit = (6.0 / s[0] as f64).sqrt();
                let w = Array2::from_shape_simple_fn((s[0], s[1]), || T::of(rng.gen_range(-limit..limit)));
                Layer {
                    w,
                    b: Array1::zeros(s[1]),
                }
            })
            .collect();
        Self { layers }
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut v = vec![self.layers[0].w.nrows()];
        v.extend(self.layers.iter().map(|l| l.w.ncols()));
        v
    }

    pub fn n_params(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.w.iter().chain(l.b.iter()).all(|v| v.is_finite()))
    }

    /// Pre-activations of every layer for a batch (rows are samples).
    pub fn pre_activations(&self, x: ArrayView2<T>) -> Vec<Array2<T>> {
        let mut out = Vec::with_capacity(self.layers.len());
        let mut h = x.to_owned();
        for (i, l) in self.layers.iter().enumerate() {
            let z = h.dot(&l.w) + &l.b;
            if i + 1 < self.layers.len() {
                h = z.mapv(relu);
            }
            out.push(z);
        }
        out
    }

    /// Raw network output, one value per row.
    pub fn forward(&self, x: ArrayView2<T>) -> Array1<T> {
        let mut h = x.to_owned();
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            h = h.dot(&l.w) + &l.b;
            if i < last {
                h.mapv_inplace(relu);
            }
        }
        h.column(0).to_owned()
    }

    /// Mean squared error against `y` and its exact gradient.
    pub fn loss_and_gradients(&self, x: ArrayView2<T>, y: &[T]) -> (T, Gradients<T>) {
        let n = x.nrows();
        assert!(n > 0 && n == y.len(), "batch and target sizes differ");
        let last = self.layers.len() - 1;
        // forward, keeping layer inputs
        let mut inputs: Vec<Array2<T>> = Vec::with_capacity(self.layers.len());
        let mut h = x.to_owned();
        for (i, l) in self.layers.iter().enumerate() {
            let z = h.dot(&l.w) + &l.b;
            inputs.push(h);
            h = if i < last { z.mapv(relu) } else { z };
        }
        let inv_n = T::one() / T::of(n as f64);
        let mut loss = T::zero();
        let mut delta = Array2::<T>::zeros((n, 1));
        for (r, &target) in y.iter().enumerate() {
            let e = h[[r, 0]] - target;
            loss = loss + e * e;
            delta[[r, 0]] = T::of(2.0) * e * inv_n;
        }
        loss = loss * inv_n;

        let mut grads: Vec<Layer<T>> = Vec::with_capacity(self.layers.len());
        for i in (0..self.layers.len()).rev() {
            let a = &inputs[i];
            let gw = a.t().dot(&delta);
            let gb = delta.sum_axis(Axis(0));
            if i > 0 {
                let mut back = delta.dot(&self.layers[i].w.t());
                // inputs[i] is relu(z_{i-1}); its support is where the unit was active
                back.zip_mut_with(a, |d, &act| {
                    if act <= T::zero() {
                        *d = T::zero();
                    }
                });
                delta = back;
            }
            grads.push(Layer { w: gw, b: gb });
        }
        grads.reverse();
        (loss, Gradients { layers: grads })
    }

    /// All parameters in file order: per layer, weights row-major then biases.
    pub fn flat_params(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.n_params());
        for l in &self.layers {
            v.extend(l.w.iter().copied());
            v.extend(l.b.iter().copied());
        }
        v
    }

    pub fn from_flat(sizes: &[usize], flat: &[T]) -> Option<Self> {
        let mut it = flat.iter().copied();
        let mut layers = Vec::new();
        for s in sizes.windows(2) {
            let w: Vec<T> = it.by_ref().take(s[0] * s[1]).collect();
            let b: Vec<T> = it.by_ref().take(s[1]).collect();
            if w.len() != s[0] * s[1] || b.len() != s[1] {
                return None;
            }
            layers.push(Layer {
                w: Array2::from_shape_vec((s[0], s[1]), w).ok()?,
                b: Array1::from_vec(b),
            });
        }
        if it.next().is_some() {
            return None;
        }
        Some(Self { layers })
    }

    pub fn cast<U: Scalar>(&self) -> Mlp<U> {
        Mlp {
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    w: l.w.mapv(|v| v.cast()),
                    b: l.b.mapv(|v| v.cast()),
                })
                .collect(),
        }
    }
}

#[inline]
fn relu<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        v
    } else {
        T::zero()
    }
}
