//! Car control model and exact forward kinematics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap, Configuration, Gear};
use crate::scalar::Scalar;

/// One constant-curvature motion primitive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlInput<T> {
    pub gear: Gear,
    /// Signed curvature, positive turns left when driving forward.
    pub curvature: T,
    pub step_len: T,
}

impl<T: Scalar> ControlInput<T> {
    pub fn new(gear: Gear, curvature: T, step_len: T, rho: T) -> Result<Self> {
        let tol = T::of(1e-12) / rho;
        if !(step_len > T::zero()) || curvature.abs() > T::one() / rho + tol {
            return Err(Error::InvalidArgument(format!(
                "control with curvature {curvature} and step {step_len} under rho {rho}"
            )));
        }
        Ok(Self {
            gear,
            curvature,
            step_len,
        })
    }

    pub fn flipped(&self) -> Self {
        Self {
            gear: self.gear.flipped(),
            ..*self
        }
    }
}

/// Moves along a circle of signed curvature for a signed arc length. Exact, via the chord.
#[inline]
pub fn advance<T: Scalar>(q: &Configuration<T>, curvature: T, signed_len: T) -> Configuration<T> {
    let dtheta = curvature * signed_len;
    let half = dtheta * T::of(0.5);
    let chord = if half.abs() < T::of(1e-6) {
        // sin(h)/h to fourth order
        signed_len * (T::one() - half * half / T::of(6.0))
    } else {
        signed_len * half.sin() / half
    };
    let heading = q.theta + half;
    Configuration {
        x: q.x + chord * heading.cos(),
        y: q.y + chord * heading.sin(),
        theta: wrap(q.theta + dtheta),
    }
}

/// Successor configuration `g(q, u)`.
#[inline]
pub fn step<T: Scalar>(q: &Configuration<T>, u: &ControlInput<T>) -> Configuration<T> {
    advance(q, u.curvature, u.gear.sign::<T>() * u.step_len)
}

/// Poses along one control at spacing at most `spacing`, excluding `q` and including the end.
pub fn step_samples<T: Scalar>(
    q: &Configuration<T>,
    u: &ControlInput<T>,
    spacing: T,
) -> Vec<Configuration<T>> {
    let n = (u.step_len / spacing).ceil().to_usize().unwrap_or(1).max(1);
    let sign = u.gear.sign::<T>();
    (1..=n)
        .map(|i| {
            let s = u.step_len * T::of(i as f64) / T::of(n as f64);
            advance(q, u.curvature, sign * s)
        })
        .collect()
}

/// Gear × curvature grid evaluated by the greedy planner. Enumeration order: all forward
/// controls by increasing curvature, then all backward controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSet<T> {
    pub n_steer: usize,
    pub step_len: T,
    pub rho: T,
}

impl<T: Scalar> ControlSet<T> {
    pub fn new(n_steer: usize, step_len: T, rho: T) -> Result<Self> {
        if n_steer < 3 || n_steer % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "n_steer must be odd and at least 3, got {n_steer}"
            )));
        }
        if !(step_len > T::zero()) || !(rho > T::zero()) {
            return Err(Error::InvalidArgument("step_len and rho must be positive".into()));
        }
        Ok(Self {
            n_steer,
            step_len,
            rho,
        })
    }

    /// 11 curvatures, both gears, steps of `ρ/4`.
    pub fn default_for(rho: T) -> Self {
        Self {
            n_steer: 11,
            step_len: rho / T::of(4.0),
            rho,
        }
    }

    pub fn len(&self) -> usize {
        2 * self.n_steer
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn curvatures(&self) -> Vec<T> {
        let kmax = T::one() / self.rho;
        let half = (self.n_steer / 2) as f64;
        (0..self.n_steer)
            .map(|i| {
                let k = i as f64 - half;
                if k == 0.0 {
                    T::zero()
                } else {
                    kmax * T::of(k / half)
                }
            })
            .collect()
    }

    pub fn controls(&self) -> Vec<ControlInput<T>> {
        let ks = self.curvatures();
        [Gear::Forward, Gear::Backward]
            .iter()
            .flat_map(|&gear| {
                ks.iter().map(move |&curvature| ControlInput {
                    gear,
                    curvature,
                    step_len: self.step_len,
                })
            })
            .collect()
    }
}

/// One successor per control, in the set's enumeration order.
pub fn rollout<T: Scalar>(q: &Configuration<T>, controls: &[ControlInput<T>]) -> Vec<Configuration<T>> {
    controls.iter().map(|u| step(q, u)).collect()
}

/// Lateral-slip residual `|Δx·sin θm − Δy·cos θm|` with `θm` the mean of the two headings.
pub fn constraint_residual<T: Scalar>(q_prev: &Configuration<T>, q_next: &Configuration<T>) -> T {
    let mid = q_prev.theta + wrap(q_next.theta - q_prev.theta) * T::of(0.5);
    let dx = q_next.x - q_prev.x;
    let dy = q_next.y - q_prev.y;
    (dx * mid.sin() - dy * mid.cos()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: &Configuration<f64>, b: &Configuration<f64>, tol: f64) -> bool {
        (a.x - b.x).abs() < tol && (a.y - b.y).abs() < tol && a.heading_distance(b) < tol
    }

    #[test]
    fn step_examples() {
        let o = Configuration::<f64>::new(0.0, 0.0, 0.0);
        let fwd = ControlInput::new(Gear::Forward, 0.0, 1.0, 1.0).unwrap();
        assert!(close(&step(&o, &fwd), &Configuration::<f64>::new(1.0, 0.0, 0.0), 1e-15));
        let quarter = ControlInput::new(Gear::Forward, 1.0, FRAC_PI_2, 1.0).unwrap();
        assert!(close(&step(&o, &quarter), &Configuration::<f64>::new(1.0, 1.0, FRAC_PI_2), 1e-12));
        let back = ControlInput::new(Gear::Backward, 0.0, 1.0, 1.0).unwrap();
        assert!(close(&step(&o, &back), &Configuration::<f64>::new(-1.0, 0.0, 0.0), 1e-15));
        assert!(ControlInput::new(Gear::Forward, 1.5, 1.0, 1.0).is_err());
        assert!(ControlInput::new(Gear::Forward, 0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn step_is_reversible() {
        let q = Configuration::<f64>::new(3.0, -2.0, 2.9);
        for &k in &[-1.0, -0.3, 0.0, 1e-9, 0.7, 1.0] {
            for &g in &[Gear::Forward, Gear::Backward] {
                let u = ControlInput::new(g, k, 1.7, 1.0).unwrap();
                let back = step(&step(&q, &u), &u.flipped());
                assert!(close(&back, &q, 1e-9), "{k} {g:?}");
            }
        }
    }

    #[test]
    fn composed_steps_match_single_step() {
        let q = Configuration::<f64>::new(1.0, 1.0, -0.4);
        let u = ControlInput::new(Gear::Forward, 0.8, 3.0, 1.0).unwrap();
        let small = ControlInput { step_len: 0.3, ..u };
        let mut p = q;
        for _ in 0..10 {
            p = step(&p, &small);
        }
        assert!(close(&p, &step(&q, &u), 1e-12));
    }

    #[test]
    fn rollout_counts_and_mirror() {
        let cs = ControlSet::<f64>::default_for(1.0);
        let q = Configuration::<f64>::new(0.0, 0.0, 0.0);
        let succ = rollout(&q, &cs.controls());
        assert_eq!(succ.len(), 22);
        // curvature grid is symmetric: index i and n-1-i mirror about the x axis
        for i in 0..cs.n_steer {
            let a = succ[i];
            let b = succ[cs.n_steer - 1 - i];
            assert!((a.x - b.x).abs() < 1e-12 && (a.y + b.y).abs() < 1e-12);
            assert!((a.theta + b.theta).abs() < 1e-12);
        }
        let one = [cs.controls()[5]];
        assert_eq!(rollout(&q, &one).len(), 1);
        assert!(ControlSet::new(4, 1.0, 1.0).is_err());
        assert!(ControlSet::new(1, 1.0, 1.0).is_err());
        let ks = cs.curvatures();
        assert_eq!(ks[0], -1.0);
        assert_eq!(ks[5], 0.0);
        assert_eq!(ks[10], 1.0);
    }

    #[test]
    fn residual_examples() {
        let q = Configuration::<f64>::new(0.0, 0.0, 0.0);
        let s = step(&q, &ControlInput::new(Gear::Forward, 0.0, 1.0, 1.0).unwrap());
        assert!(constraint_residual(&q, &s) < 1e-15);
        let rho = 2.0;
        let step_len = rho / 10.0;
        let a = step(&q, &ControlInput::new(Gear::Forward, 1.0 / rho, step_len, rho).unwrap());
        assert!(constraint_residual(&q, &a) < step_len * step_len / rho);
        let teleport = Configuration::<f64>::new(0.0, 0.7, 0.0);
        assert!((constraint_residual(&q, &teleport) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn step_samples_end_at_step() {
        let q = Configuration::<f64>::new(0.0, 0.0, PI / 3.0);
        let u = ControlInput::new(Gear::Backward, -0.5, 2.0, 2.0).unwrap();
        let pts = step_samples(&q, &u, 0.3);
        assert_eq!(pts.len(), 7);
        assert!(close(pts.last().unwrap(), &step(&q, &u), 1e-12));
    }
}
