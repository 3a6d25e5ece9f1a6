//! Greedy descent of a cost-to-go function over a fixed control set.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::{collides, Configuration, Footprint, Workspace};
use crate::kinematics::{step, step_samples, ControlSet};
use crate::model::C2gModel;
use crate::planners::edge_free;
use crate::reeds_shepp::{rs_length, rs_shortest};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

/// Anything that scores configurations by their cost to a goal.
pub trait CostModel<T: Scalar> {
    fn costs_to(&self, from: &[Configuration<T>], goal: &Configuration<T>) -> Result<Vec<T>>;
}

impl<T: Scalar> CostModel<T> for C2gModel<T> {
    fn costs_to(&self, from: &[Configuration<T>], goal: &Configuration<T>) -> Result<Vec<T>> {
        self.predict_symmetric_to(from, goal)
    }
}

/// Exact free-space cost: the Reeds-Shepp length.
#[derive(Debug, Clone, Copy)]
pub struct ReedsSheppCost<T> {
    pub rho: T,
}

impl<T: Scalar> CostModel<T> for ReedsSheppCost<T> {
    fn costs_to(&self, from: &[Configuration<T>], goal: &Configuration<T>) -> Result<Vec<T>> {
        Ok(from.iter().map(|q| rs_length(q, goal, self.rho)).collect())
    }
}

impl<T: Scalar, M: CostModel<T> + ?Sized> CostModel<T> for &M {
    fn costs_to(&self, from: &[Configuration<T>], goal: &Configuration<T>) -> Result<Vec<T>> {
        (**self).costs_to(from, goal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCriteria<T> {
    pub eps_cost: T,
    pub eps_pos: T,
    pub eps_theta: T,
    pub max_steps: usize,
}

impl<T: Scalar> StopCriteria<T> {
    /// `eps_pos = ρ/5`, `eps_theta = 0.1`, `eps_cost = ρ·eps_theta`, 500 steps.
    pub fn for_rho(rho: T) -> Self {
        let eps_theta = T::of(0.1);
        Self {
            eps_cost: rho * eps_theta,
            eps_pos: rho / T::of(5.0),
            eps_theta,
            max_steps: 500,
        }
    }

    pub fn pose_reached(&self, q: &Configuration<T>, goal: &Configuration<T>) -> bool {
        q.position_distance(goal) < self.eps_pos && q.heading_distance(goal) < self.eps_theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedySettings<T> {
    pub controls: ControlSet<T>,
    pub stop: StopCriteria<T>,
    pub footprint: Footprint<T>,
    pub delta_col: T,
    /// Finish with an exact collision-checked Reeds-Shepp curve once within `2ρ`.
    pub docking: bool,
    /// Visited configurations remembered by the anti-cycle guard.
    pub history: usize,
}

impl<T: Scalar> GreedySettings<T> {
    pub fn for_rho(rho: T) -> Self {
        Self {
            controls: ControlSet::default_for(rho),
            stop: StopCriteria::for_rho(rho),
            footprint: Footprint::default(),
            delta_col: rho / T::of(20.0),
            docking: true,
            history: 20,
        }
    }

    pub fn without_docking(self) -> Self {
        Self { docking: false, ..self }
    }
}

/// `false` when `q_new` is within half the stopping tolerances of a remembered pose.
pub fn anti_cycle_guard<T: Scalar>(
    history: &VecDeque<Configuration<T>>,
    q_new: &Configuration<T>,
    stop: &StopCriteria<T>,
) -> bool {
    let half = T::of(0.5);
    !history.iter().any(|h| {
        h.position_distance(q_new) < stop.eps_pos * half && h.heading_distance(q_new) < stop.eps_theta * half
    })
}

/// Drives from `start` toward `goal` by always taking the feasible control whose successor
/// has the lowest predicted cost.
pub fn plan<T: Scalar, M: CostModel<T> + ?Sized>(
    start: &Configuration<T>,
    goal: &Configuration<T>,
    w: &Workspace<T>,
    model: &M,
    cfg: &GreedySettings<T>,
) -> Result<Trajectory<T>> {
    let clock = Instant::now();
    for (q, what) in [(start, "start configuration"), (goal, "goal configuration")] {
        if !q.is_finite() {
            return Err(Error::NonFinite(what));
        }
        if !w.contains(q) {
            return Err(Error::OutOfExtent {
                x: q.x.as_f64(),
                y: q.y.as_f64(),
                extent: w.extent.as_f64(),
            });
        }
        if collides(q, &cfg.footprint, w) {
            return Err(Error::Colliding(what));
        }
    }
    let sc = &cfg.stop;
    let rho = cfg.controls.rho;
    let controls = cfg.controls.controls();
    let mut traj = Trajectory::at(*start);
    let mut history: VecDeque<Configuration<T>> = VecDeque::with_capacity(cfg.history + 1);
    let mut done = sc.pose_reached(start, goal);

    while !done && traj.steps < sc.max_steps {
        let q = traj.end();
        if cfg.docking && q.position_distance(goal) <= rho + rho {
            let path = rs_shortest(&q, goal, rho);
            if edge_free(&path, &q, &cfg.footprint, w, cfg.delta_col) {
                let before = traj.length;
                traj.push_rs(&path, cfg.delta_col);
                traj.docking_length = traj.length - before;
                done = true;
                break;
            }
        }
        history.push_back(q);
        if history.len() > cfg.history {
            history.pop_front();
        }

        let mut feasible = Vec::with_capacity(controls.len());
        let mut succ = Vec::with_capacity(controls.len());
        for (i, u) in controls.iter().enumerate() {
            let pts = step_samples(&q, u, cfg.delta_col);
            if pts.iter().any(|p| collides(p, &cfg.footprint, w)) {
                continue;
            }
            feasible.push(i);
            succ.push(step(&q, u));
        }
        if succ.is_empty() {
            traj.stalled = true;
            break;
        }
        let costs = model.costs_to(&succ, goal)?;
        let mut order: Vec<usize> = (0..succ.len()).collect();
        // stable: ties keep enumeration order
        order.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap_or(std::cmp::Ordering::Equal));
        let Some(&pick) = order.iter().find(|&&k| anti_cycle_guard(&history, &succ[k], sc)) else {
            traj.stalled = true;
            break;
        };
        traj.push(controls[feasible[pick]]);
        traj.steps += 1;
        done = costs[pick] < sc.eps_cost || sc.pose_reached(&traj.end(), goal);
    }
    traj.success = done;
    traj.reached = sc.pose_reached(&traj.end(), goal);
    traj.wall_time = clock.elapsed().as_secs_f64();
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_examples() {
        let sc = StopCriteria::for_rho(25.0);
        let mut h = VecDeque::new();
        let q = Configuration::<f64>::new(10.0, 10.0, 0.0);
        assert!(anti_cycle_guard(&h, &q, &sc));
        h.push_back(q);
        assert!(!anti_cycle_guard(&h, &q, &sc));
        assert!(anti_cycle_guard(&h, &Configuration::new(20.0, 10.0, 0.0), &sc));
    }

    #[test]
    fn start_at_goal_is_immediate() {
        let w = Workspace::<f64>::empty("e", 500.0);
        let q = Configuration::new(100.0, 100.0, 0.5);
        let t = plan(&q, &q, &w, &ReedsSheppCost { rho: 25.0 }, &GreedySettings::for_rho(25.0)).unwrap();
        assert!(t.success && t.reached);
        assert!(t.controls.is_empty());
        assert_eq!(t.length, 0.0);
    }
}
