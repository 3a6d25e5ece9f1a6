//! Side-by-side runs of every planner on a shared query set.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::c2g_planner::{plan, GreedySettings};
use crate::error::{Error, Result};
use crate::geometry::{random_free_configuration, Configuration, Workspace};
use crate::model::C2gModel;
use crate::planners::{edge_free, rrt_plan, rrt_star_plan, PlannerParams};
use crate::reeds_shepp::rs_shortest;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlannerKind {
    #[serde(rename = "RRT")]
    Rrt,
    #[serde(rename = "RRTStar")]
    RrtStar,
    #[serde(rename = "C2G")]
    C2g,
    #[serde(rename = "C2G_Uniform")]
    C2gUniform,
    #[serde(rename = "RS_Optimal")]
    RsOptimal,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 5] = [
        PlannerKind::Rrt,
        PlannerKind::RrtStar,
        PlannerKind::C2g,
        PlannerKind::C2gUniform,
        PlannerKind::RsOptimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Rrt => "RRT",
            PlannerKind::RrtStar => "RRTStar",
            PlannerKind::C2g => "C2G",
            PlannerKind::C2gUniform => "C2G_Uniform",
            PlannerKind::RsOptimal => "RS_Optimal",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PlannerKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown planner {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Query {
    pub id: usize,
    pub start: Configuration<f64>,
    pub goal: Configuration<f64>,
}

/// `n` collision-free start/goal pairs, deterministic in `seed` and the workspace id.
pub fn make_queries(w: &Workspace<f64>, n: usize, seed: u64, params: &PlannerParams<f64>) -> Result<Vec<Query>> {
    let mut r = rng::stream(seed, &w.id, "queries");
    (0..n)
        .map(|id| {
            let mut draw = || {
                random_free_configuration(&mut r, &params.footprint, w, 100_000)
                    .ok_or(Error::Empty("no free configuration for a query"))
            };
            let start = draw()?;
            let goal = draw()?;
            Ok(Query { id, start, goal })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub planner: PlannerKind,
    pub workspace: String,
    pub query: usize,
    pub success: bool,
    pub length: Option<f64>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchSettings {
    pub tree: PlannerParams<f64>,
    pub rrt_star_nodes: usize,
    pub greedy: GreedySettings<f32>,
}

impl BenchSettings {
    pub fn for_workspace(rho: f64, extent: f64) -> Self {
        Self {
            tree: PlannerParams::for_workspace(rho, extent),
            rrt_star_nodes: 5000,
            greedy: GreedySettings::for_rho(rho as f32),
        }
    }
}

/// Trained models available to the learned planners.
#[derive(Debug, Clone, Copy, Default)]
pub struct Models<'a> {
    pub adaptive: Option<&'a C2gModel<f32>>,
    pub uniform: Option<&'a C2gModel<f32>>,
}

/// Runs one planner on one query. The greedy planners count as successful only when the
/// final pose is inside the goal tolerance.
pub fn run_query(
    kind: PlannerKind,
    q: &Query,
    w: &Workspace<f64>,
    models: Models<'_>,
    s: &BenchSettings,
    seed: u64,
) -> Result<BenchRecord> {
    let tree = s.tree.with_seed(rng::derive_seed(seed, &w.id, &format!("{kind}-{}", q.id)));
    let (success, length, wall_time) = match kind {
        PlannerKind::Rrt => {
            let clock = Instant::now();
            let t = rrt_plan(&q.start, &q.goal, w, &tree)?;
            (t.is_some(), t.map(|t| t.length), clock.elapsed().as_secs_f64())
        }
        PlannerKind::RrtStar => {
            let clock = Instant::now();
            let t = rrt_star_plan(&q.start, &q.goal, w, &tree, s.rrt_star_nodes)?;
            (t.is_some(), t.map(|t| t.length), clock.elapsed().as_secs_f64())
        }
        PlannerKind::C2g | PlannerKind::C2gUniform => {
            let m = if kind == PlannerKind::C2g { models.adaptive } else { models.uniform };
            let m = m.ok_or_else(|| Error::InvalidArgument(format!("{kind} needs a trained model")))?;
            let t = plan(&q.start.cast(), &q.goal.cast(), &w.cast::<f32>(), m, &s.greedy)?;
            let ok = t.reached;
            (ok, ok.then_some(t.length as f64), t.wall_time)
        }
        PlannerKind::RsOptimal => {
            let clock = Instant::now();
            let p = rs_shortest(&q.start, &q.goal, tree.rho);
            let free = edge_free(&p, &q.start, &tree.footprint, w, tree.delta_col);
            (free, free.then_some(p.total_length), clock.elapsed().as_secs_f64())
        }
    };
    Ok(BenchRecord {
        planner: kind,
        workspace: w.id.clone(),
        query: q.id,
        success,
        length,
        wall_time,
    })
}

pub fn write_records<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: std::io::Read>(inp: R) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(inp);
    Ok(r.deserialize().collect::<std::result::Result<Vec<BenchRecord>, _>>()?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub planner: PlannerKind,
    pub queries: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_length: Option<f64>,
    /// Mean length over queries the reference also solved, divided by the reference's mean
    /// on the same queries.
    pub normalized_length: Option<f64>,
    pub median_wall_time: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Per-planner summary, lengths normalized by `reference`.
pub fn aggregate(records: &[BenchRecord], reference: PlannerKind) -> Vec<Aggregate> {
    let key = |r: &BenchRecord| (r.workspace.clone(), r.query);
    let reference_len: std::collections::HashMap<_, f64> = records
        .iter()
        .filter(|r| r.planner == reference)
        .filter_map(|r| r.length.map(|l| (key(r), l)))
        .collect();
    let mut kinds: Vec<PlannerKind> = records.iter().map(|r| r.planner).collect();
    kinds.sort();
    kinds.dedup();
    kinds
        .into_iter()
        .map(|k| {
            let mine: Vec<&BenchRecord> = records.iter().filter(|r| r.planner == k).collect();
            let lens: Vec<f64> = mine.iter().filter_map(|r| r.length).collect();
            let successes = lens.len();
            let (mut a, mut b) = (0.0, 0.0);
            for r in &mine {
                if let (Some(l), Some(&rl)) = (r.length, reference_len.get(&key(r))) {
                    a += l;
                    b += rl;
                }
            }
            Aggregate {
                planner: k,
                queries: mine.len(),
                successes,
                success_rate: successes as f64 / mine.len().max(1) as f64,
                mean_length: (successes > 0).then(|| lens.iter().sum::<f64>() / successes as f64),
                normalized_length: (b > 0.0).then_some(a / b),
                median_wall_time: median(mine.iter().map(|r| r.wall_time).collect()),
            }
        })
        .collect()
}

/// Fixed-width text table of aggregates.
pub fn format_table(rows: &[Aggregate], reference: PlannerKind) -> String {
    let mut s = format!(
        "{:<12} {:>7} {:>9} {:>11} {:>14} {:>12}\n",
        "planner", "queries", "success", "mean_len", format!("len/{reference}"), "median_s"
    );
    let opt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |v| format!("{v:.p$}"));
    for r in rows {
        s.push_str(&format!(
            "{:<12} {:>7} {:>8.1}% {:>11} {:>14} {:>12.4}\n",
            r.planner.name(),
            r.queries,
            100.0 * r.success_rate,
            opt(r.mean_length, 1),
            opt(r.normalized_length, 3),
            r.median_wall_time
        ));
    }
    s
}
