use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::reeds_shepp::{rs_interpolate, rs_length, RsPath};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Initial,
    Explored,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode<T> {
    pub config: Configuration<T>,
    pub parent: Option<usize>,
    /// Curve from the parent to this node.
    pub edge: Option<RsPath<T>>,
    pub cost_from_root: T,
    pub phase: Phase,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree<T> {
    pub root: Configuration<T>,
    pub nodes: Vec<TreeNode<T>>,
    pub workspace_id: String,
    pub rho: T,
}

#[derive(Serialize)]
struct NodeDump {
    x: f64,
    y: f64,
    theta: f64,
    parent: Option<usize>,
    cost: f64,
    phase: Phase,
}

#[derive(Serialize)]
struct TreeDump {
    root: [f64; 3],
    workspace_id: String,
    rho: f64,
    nodes: Vec<NodeDump>,
}

impl<T: Scalar> Tree<T> {
    pub fn new(root: Configuration<T>, workspace_id: impl Into<String>, rho: T) -> Self {
        Self {
            root,
            nodes: vec![TreeNode {
                config: root,
                parent: None,
                edge: None,
                cost_from_root: T::zero(),
                phase: Phase::Initial,
                children: Vec::new(),
            }],
            workspace_id: workspace_id.into(),
            rho,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn add(&mut self, parent: usize, edge: RsPath<T>, config: Configuration<T>, phase: Phase) -> usize {
        let id = self.nodes.len();
        let cost_from_root = self.nodes[parent].cost_from_root + edge.total_length;
        self.nodes.push(TreeNode {
            config,
            parent: Some(parent),
            edge: Some(edge),
            cost_from_root,
            phase,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    /// Moves `id` under `new_parent` and pushes the cost change down its subtree.
    pub(crate) fn reparent(&mut self, id: usize, new_parent: usize, edge: RsPath<T>) {
        if let Some(old) = self.nodes[id].parent {
            self.nodes[old].children.retain(|&c| c != id);
        }
        let new_cost = self.nodes[new_parent].cost_from_root + edge.total_length;
        let delta = new_cost - self.nodes[id].cost_from_root;
        self.nodes[new_parent].children.push(id);
        let node = &mut self.nodes[id];
        node.parent = Some(new_parent);
        node.edge = Some(edge);
        node.cost_from_root = new_cost;
        let mut stack = node.children.clone();
        while let Some(c) = stack.pop() {
            let n = &mut self.nodes[c];
            n.cost_from_root = n.cost_from_root + delta;
            stack.extend_from_slice(&n.children);
        }
    }

    /// Node ids from the root down to `id`, both included.
    pub fn branch(&self, id: usize) -> Result<Vec<usize>> {
        if id >= self.nodes.len() {
            return Err(Error::InvalidArgument(format!("no node {id} in a tree of {}", self.nodes.len())));
        }
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        Ok(out)
    }

    /// Pose at arc length `s` from the root along the branch `branch` (as from [`Tree::branch`]).
    pub fn pose_on_branch(&self, branch: &[usize], s: T) -> Result<Configuration<T>> {
        let last = *branch.last().ok_or(Error::Empty("branch"))?;
        if s >= self.nodes[last].cost_from_root {
            return Ok(self.nodes[last].config);
        }
        // first node whose root cost reaches s
        let k = branch.partition_point(|&i| self.nodes[i].cost_from_root < s);
        if k == 0 {
            return Ok(self.nodes[branch[0]].config);
        }
        let child = &self.nodes[branch[k]];
        let parent = &self.nodes[branch[k - 1]];
        let edge = child.edge.as_ref().ok_or(Error::Empty("edge"))?;
        let along = (s - parent.cost_from_root).min(edge.total_length);
        rs_interpolate(edge, along, &parent.config)
    }

    /// Upper bound on the cost from the root to `q`: best node cost plus the free-space
    /// curve from that node. Ignores obstacles on the last leg.
    pub fn cost_estimate(&self, q: &Configuration<T>) -> T {
        let mut best = T::infinity();
        for n in &self.nodes {
            if n.cost_from_root + q.position_distance(&n.config) >= best {
                continue;
            }
            best = best.min(n.cost_from_root + rs_length(&n.config, q, self.rho));
        }
        best
    }

    pub fn to_json(&self) -> Result<String> {
        let dump = TreeDump {
            root: [self.root.x.as_f64(), self.root.y.as_f64(), self.root.theta.as_f64()],
            workspace_id: self.workspace_id.clone(),
            rho: self.rho.as_f64(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDump {
                    x: n.config.x.as_f64(),
                    y: n.config.y.as_f64(),
                    theta: n.config.theta.as_f64(),
                    parent: n.parent,
                    cost: n.cost_from_root.as_f64(),
                    phase: n.phase,
                })
                .collect(),
        };
        Ok(serde_json::to_string(&dump)?)
    }
}

/// Root-to-node motion split into controls of at most `spacing`.
pub fn extract_path<T: Scalar>(tree: &Tree<T>, id: usize, spacing: T) -> Result<Trajectory<T>> {
    let branch = tree.branch(id)?;
    let mut t = Trajectory::at(tree.root);
    for &i in &branch[1..] {
        if let Some(edge) = &tree.nodes[i].edge {
            t.push_rs(edge, spacing);
        }
    }
    t.success = true;
    t.reached = true;
    Ok(t)
}
