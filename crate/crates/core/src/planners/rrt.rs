use std::time::Instant;

use rand::Rng as _;

use super::rrt_star::{nearest, sample_config};
use super::tree::{extract_path, Phase, Tree};
use super::{check_endpoint, edge_free, within_goal_tolerance, PlannerParams};
use crate::error::Result;
use crate::geometry::{collides, Configuration, Workspace};
use crate::reeds_shepp::{rs_shortest, rs_truncate};
use crate::rng;
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

/// Goal-biased RRT with Reeds-Shepp steering. `Ok(None)` when `max_iters` runs out.
pub fn rrt_plan<T: Scalar>(
    start: &Configuration<T>,
    goal: &Configuration<T>,
    w: &Workspace<T>,
    p: &PlannerParams<T>,
) -> Result<Option<Trajectory<T>>> {
    let clock = Instant::now();
    p.validate()?;
    check_endpoint(start, p, w, "start configuration")?;
    check_endpoint(goal, p, w, "goal configuration")?;
    let mut rng = rng::seeded(p.seed);
    let mut tree = Tree::new(*start, w.id.clone(), p.rho);
    let fp = &p.footprint;

    let finish = |tree: &Tree<T>, id: usize| -> Result<Option<Trajectory<T>>> {
        let from = tree.nodes[id].config;
        let last = rs_shortest(&from, goal, p.rho);
        if !edge_free(&last, &from, fp, w, p.delta_col) {
            return Ok(None);
        }
        let mut t = extract_path(tree, id, p.delta_col)?;
        t.push_rs(&last, p.delta_col);
        t.wall_time = clock.elapsed().as_secs_f64();
        Ok(Some(t))
    };

    if within_goal_tolerance(start, goal, p.rho) {
        if let Some(t) = finish(&tree, 0)? {
            return Ok(Some(t));
        }
    }
    for _ in 0..p.max_iters {
        let target = if rng.gen_bool(p.goal_bias) {
            *goal
        } else {
            sample_config(&mut rng, w.extent)
        };
        let (near_id, d) = nearest(&tree, &target);
        if d <= T::zero() {
            continue;
        }
        let from = tree.nodes[near_id].config;
        let steer = rs_truncate(&rs_shortest(&from, &target, p.rho), p.eta);
        let q_new = steer.end(&from);
        if collides(&q_new, fp, w) || !edge_free(&steer, &from, fp, w, p.delta_col) {
            continue;
        }
        let id = tree.add(near_id, steer, q_new, Phase::Explored);
        if within_goal_tolerance(&q_new, goal, p.rho) {
            if let Some(t) = finish(&tree, id)? {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}
