use std::time::Instant;

use rand::Rng as _;

use super::tree::{extract_path, Phase, Tree};
use super::{check_endpoint, edge_free, rs_lower_bound, PlannerParams};
use crate::error::{Error, Result};
use crate::geometry::{collides, Configuration, Workspace};
use crate::reeds_shepp::{rs_length, rs_shortest, rs_truncate};
use crate::rng::{self, Rng};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

pub(super) fn sample_config<T: Scalar>(rng: &mut Rng, extent: T) -> Configuration<T> {
    let l = extent.as_f64();
    Configuration::new(
        T::of(rng.gen_range(0.0..l)),
        T::of(rng.gen_range(0.0..l)),
        T::of(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)),
    )
}

/// Node nearest to `q` in Reeds-Shepp length.
pub(super) fn nearest<T: Scalar>(tree: &Tree<T>, q: &Configuration<T>) -> (usize, T) {
    let rho = tree.rho;
    let mut best = (0, T::infinity());
    for (i, n) in tree.nodes.iter().enumerate() {
        if rs_lower_bound(&n.config, q, rho) >= best.1 {
            continue;
        }
        let d = rs_length(&n.config, q, rho);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

struct Grower<'a, T: Scalar> {
    tree: Tree<T>,
    w: &'a Workspace<T>,
    p: &'a PlannerParams<T>,
    rng: Rng,
}

impl<'a, T: Scalar> Grower<'a, T> {
    fn new(seed: Configuration<T>, w: &'a Workspace<T>, p: &'a PlannerParams<T>) -> Result<Self> {
        p.validate()?;
        check_endpoint(&seed, p, w, "seed configuration")?;
        Ok(Self {
            tree: Tree::new(seed, w.id.clone(), p.rho),
            w,
            p,
            rng: rng::seeded(p.seed),
        })
    }

    fn free(&self, path: &crate::reeds_shepp::RsPath<T>, from: &Configuration<T>) -> bool {
        edge_free(path, from, &self.p.footprint, self.w, self.p.delta_col)
    }

    /// Phase 1: direct curves from the root to random configurations.
    fn seed_phase(&mut self, m1: usize, budget: usize) {
        let root = self.tree.root;
        for _ in 0..m1 {
            if self.tree.len() >= budget {
                break;
            }
            let q = sample_config(&mut self.rng, self.w.extent);
            if collides(&q, &self.p.footprint, self.w) {
                continue;
            }
            let path = rs_shortest(&root, &q, self.p.rho);
            if self.free(&path, &root) {
                self.tree.add(0, path, q, Phase::Initial);
            }
        }
    }

    /// One RRT* iteration toward `target`. Returns the new node id if one was added.
    fn extend(&mut self, target: &Configuration<T>) -> Option<usize> {
        let rho = self.p.rho;
        let (near_id, _) = nearest(&self.tree, target);
        let from = self.tree.nodes[near_id].config;
        let full = rs_shortest(&from, target, rho);
        if full.total_length <= T::zero() {
            return None;
        }
        let steer = rs_truncate(&full, self.p.eta);
        let q_new = steer.end(&from);
        if collides(&q_new, &self.p.footprint, self.w) || !self.free(&steer, &from) {
            return None;
        }
        let r = self
            .p
            .rewire_radius(self.tree.len() + 1, self.w.extent)
            .max(self.p.eta);

        // near set with distances, computed once
        let mut near: Vec<(usize, T)> = Vec::new();
        for (i, n) in self.tree.nodes.iter().enumerate() {
            if rs_lower_bound(&n.config, &q_new, rho) > r {
                continue;
            }
            let d = rs_length(&n.config, &q_new, rho);
            if d <= r {
                near.push((i, d));
            }
        }

        // choose parent: cheapest first, stop at the first free edge
        let mut best_parent = near_id;
        let mut best_edge = steer;
        let mut best_cost = self.tree.nodes[near_id].cost_from_root + best_edge.total_length;
        let mut order: Vec<(usize, T)> = near
            .iter()
            .map(|&(i, d)| (i, self.tree.nodes[i].cost_from_root + d))
            .filter(|&(_, c)| c < best_cost)
            .collect();
        order.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        for (i, c) in order {
            let src = self.tree.nodes[i].config;
            let path = rs_shortest(&src, &q_new, rho);
            if self.free(&path, &src) {
                best_parent = i;
                best_edge = path;
                best_cost = c;
                break;
            }
        }
        let _ = best_cost;
        let id = self.tree.add(best_parent, best_edge, q_new, Phase::Explored);

        // rewire explored neighbours through the new node
        let new_cost = self.tree.nodes[id].cost_from_root;
        for &(i, d) in &near {
            if i == best_parent || i == 0 || self.tree.nodes[i].phase == Phase::Initial {
                continue;
            }
            if new_cost + d >= self.tree.nodes[i].cost_from_root {
                continue;
            }
            let target = self.tree.nodes[i].config;
            let path = rs_shortest(&q_new, &target, rho);
            if self.free(&path, &q_new) {
                self.tree.reparent(i, id, path);
            }
        }
        Some(id)
    }

    fn explore(&mut self, budget: usize, goal: Option<&Configuration<T>>) {
        let max_iters = self.p.max_iters.max(budget.saturating_mul(20));
        let mut iters = 0;
        while self.tree.len() < budget && iters < max_iters {
            iters += 1;
            let target = match goal {
                Some(g) if self.rng.gen_bool(self.p.goal_bias) => *g,
                _ => sample_config(&mut self.rng, self.w.extent),
            };
            self.extend(&target);
        }
    }
}

/// RRT* tree grown from `seed` to at most `budget_nodes` nodes.
pub fn rrt_star_build<T: Scalar>(
    seed: &Configuration<T>,
    w: &Workspace<T>,
    p: &PlannerParams<T>,
    budget_nodes: usize,
) -> Result<Tree<T>> {
    two_phase_build(seed, w, p, 0, budget_nodes)
}

/// Exact Reeds-Shepp branches from the seed to `m1` random samples, then RRT* to the budget.
pub fn two_phase_build<T: Scalar>(
    seed: &Configuration<T>,
    w: &Workspace<T>,
    p: &PlannerParams<T>,
    m1: usize,
    budget_nodes: usize,
) -> Result<Tree<T>> {
    if m1 > budget_nodes {
        return Err(Error::InvalidArgument(format!(
            "m1 = {m1} exceeds the node budget {budget_nodes}"
        )));
    }
    let mut g = Grower::new(*seed, w, p)?;
    g.seed_phase(m1, budget_nodes);
    g.explore(budget_nodes, None);
    Ok(g.tree)
}

/// Start-to-goal RRT*: grows a tree of `budget_nodes` with goal-biased sampling, then
/// attaches the goal through the cheapest node with a free direct curve.
pub fn rrt_star_plan<T: Scalar>(
    start: &Configuration<T>,
    goal: &Configuration<T>,
    w: &Workspace<T>,
    p: &PlannerParams<T>,
    budget_nodes: usize,
) -> Result<Option<Trajectory<T>>> {
    let clock = Instant::now();
    check_endpoint(goal, p, w, "goal configuration")?;
    let mut g = Grower::new(*start, w, p)?;
    g.explore(budget_nodes, Some(goal));
    let tree = g.tree;
    let rho = p.rho;
    let mut cands: Vec<(usize, T)> = tree
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (i, n.cost_from_root + rs_length(&n.config, goal, rho)))
        .collect();
    cands.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in cands {
        let from = tree.nodes[i].config;
        let last = rs_shortest(&from, goal, rho);
        if !edge_free(&last, &from, &p.footprint, w, p.delta_col) {
            continue;
        }
        let mut t = extract_path(&tree, i, p.delta_col)?;
        t.push_rs(&last, p.delta_col);
        t.wall_time = clock.elapsed().as_secs_f64();
        return Ok(Some(t));
    }
    Ok(None)
}
