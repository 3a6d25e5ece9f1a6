//! Sampling-based planners over Reeds-Shepp steering: plain RRT, RRT* and the two-phase
//! tree construction used to produce ground-truth cost-to-go trees.

mod rrt;
mod rrt_star;
mod tree;

pub use rrt::rrt_plan;
pub use rrt_star::{rrt_star_build, rrt_star_plan, two_phase_build};
pub use tree::{extract_path, Phase, Tree, TreeNode};

use crate::error::{Error, Result};
use crate::geometry::{collides, Configuration, Footprint, Workspace, DEFAULT_EXTENT, DEFAULT_RHO};
use crate::reeds_shepp::{rs_sample, RsPath};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerParams<T> {
    pub max_iters: usize,
    pub goal_bias: f64,
    /// Longest extension per iteration.
    pub eta: T,
    /// `r(n) = scale · L · (ln n / n)^(1/3)`.
    pub rewire_radius_scale: T,
    pub delta_col: T,
    pub seed: u64,
    pub rho: T,
    pub footprint: Footprint<T>,
}

impl<T: Scalar> PlannerParams<T> {
    /// Defaults for a turning radius and workspace extent: `eta = 2ρ`, `δ_col = ρ/20`,
    /// goal bias 3 %, and a rewire radius of `3ρ` at a thousand nodes.
    pub fn for_workspace(rho: T, extent: T) -> Self {
        let at_thousand = (1000f64.ln() / 1000.0).cbrt();
        Self {
            max_iters: 20_000,
            goal_bias: 0.03,
            eta: rho * T::of(2.0),
            rewire_radius_scale: rho * T::of(3.0) / (extent * T::of(at_thousand)),
            delta_col: rho / T::of(20.0),
            seed: 0,
            rho,
            footprint: Footprint::default(),
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return Err(Error::InvalidArgument(format!("goal_bias {}", self.goal_bias)));
        }
        if !(self.eta > T::zero() && self.rho > T::zero() && self.delta_col > T::zero()) {
            return Err(Error::InvalidArgument(
                "eta, rho and delta_col must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Rewire radius for a tree of `n` nodes.
    pub fn rewire_radius(&self, n: usize, extent: T) -> T {
        let n = n.max(2) as f64;
        self.rewire_radius_scale * extent * T::of((n.ln() / n).cbrt())
    }
}

impl Default for PlannerParams<f64> {
    fn default() -> Self {
        Self::for_workspace(DEFAULT_RHO, DEFAULT_EXTENT)
    }
}

/// Lower bound on the Reeds-Shepp distance, cheap enough to prune scans.
#[inline]
pub(crate) fn rs_lower_bound<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, rho: T) -> T {
    a.position_distance(b).max(rho * a.heading_distance(b))
}

/// True when the curve from `start`, sampled at `spacing`, never collides.
pub fn edge_free<T: Scalar>(
    path: &RsPath<T>,
    start: &Configuration<T>,
    fp: &Footprint<T>,
    w: &Workspace<T>,
    spacing: T,
) -> bool {
    rs_sample(path, start, spacing)
        .iter()
        .all(|q| !collides(q, fp, w))
}

pub(crate) fn check_endpoint<T: Scalar>(
    q: &Configuration<T>,
    p: &PlannerParams<T>,
    w: &Workspace<T>,
    what: &'static str,
) -> Result<()> {
    if !q.is_finite() {
        return Err(Error::NonFinite(what));
    }
    if collides(q, &p.footprint, w) {
        return Err(Error::Colliding(what));
    }
    Ok(())
}

/// Whether `q` is inside the tree planners' goal tolerance around `goal`.
pub fn within_goal_tolerance<T: Scalar>(q: &Configuration<T>, goal: &Configuration<T>, rho: T) -> bool {
    q.position_distance(goal) <= rho / T::of(5.0) && q.heading_distance(goal) <= T::of(0.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_radius_at_thousand_nodes() {
        let p = PlannerParams::default();
        assert!((p.rewire_radius(1000, 500.0) - 75.0).abs() < 1e-9);
        assert!(p.rewire_radius(2000, 500.0) < 75.0);
        assert_eq!(p.eta, 50.0);
        assert_eq!(p.delta_col, 1.25);
        p.validate().unwrap();
        assert!(PlannerParams { goal_bias: 1.5, ..p }.validate().is_err());
        assert!(PlannerParams { eta: 0.0, ..p }.validate().is_err());
    }
}
