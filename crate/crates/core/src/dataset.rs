//! Cost-to-go training triples drawn from planner trees, gradient-ratio resampling and
//! dataset files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{collides, Configuration, Workspace};
use crate::planners::{edge_free, two_phase_build, PlannerParams, Tree};
use crate::reeds_shepp::{rs_length, rs_shortest};
use crate::rng::{self, Rng};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    SameBranch,
    CrossVertex,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::SameBranch => "same_branch",
            Origin::CrossVertex => "cross_vertex",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "same_branch" => Ok(Origin::SameBranch),
            "cross_vertex" => Ok(Origin::CrossVertex),
            other => Err(Error::DatasetFormat(format!("unknown origin {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub s: Configuration<T>,
    pub t: Configuration<T>,
    pub cost: T,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    Uniform,
    Adaptive,
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SamplingMode::Uniform),
            "adaptive" => Ok(SamplingMode::Adaptive),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

/// Pairs along one root-to-node branch. With `interpolate` both ends fall anywhere on the
/// branch (mid-edge included); otherwise they are a random node and one of its ancestors.
pub fn sample_same_branch<T: Scalar>(
    tree: &Tree<T>,
    k: usize,
    interpolate: bool,
    rng: &mut Rng,
) -> Result<Vec<Sample<T>>> {
    if tree.len() < 2 {
        return Err(Error::Empty("tree has no node besides the root"));
    }
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let leaf = rng.gen_range(1..tree.len());
        let branch = tree.branch(leaf)?;
        let sample = if interpolate {
            let total = tree.nodes[leaf].cost_from_root.as_f64();
            let a = rng.gen_range(0.0..=total);
            let b = rng.gen_range(0.0..=total);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (lo, hi) = (T::of(lo), T::of(hi));
            Sample {
                s: tree.pose_on_branch(&branch, lo)?,
                t: tree.pose_on_branch(&branch, hi)?,
                cost: hi - lo,
                origin: Origin::SameBranch,
            }
        } else {
            let i = branch[rng.gen_range(0..branch.len() - 1)];
            let (s, t) = (&tree.nodes[i], &tree.nodes[leaf]);
            Sample {
                s: s.config,
                t: t.config,
                cost: t.cost_from_root - s.cost_from_root,
                origin: Origin::SameBranch,
            }
        };
        out.push(sample);
    }
    Ok(out)
}

/// Vertex pairs within `alpha·ρ` of each other joined by a free direct curve, costed by
/// its length. Pairs are visited in random order; at most `k` are returned.
pub fn sample_cross_vertex<T: Scalar>(
    tree: &Tree<T>,
    w: &Workspace<T>,
    p: &PlannerParams<T>,
    alpha: T,
    k: usize,
    rng: &mut Rng,
) -> Result<Vec<Sample<T>>> {
    if !(alpha > T::zero()) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let reach = alpha * p.rho;
    let mut pairs = Vec::new();
    for i in 0..tree.len() {
        for j in i + 1..tree.len() {
            if tree.nodes[i].config.position_distance(&tree.nodes[j].config) <= reach {
                pairs.push((i, j));
            }
        }
    }
    pairs.shuffle(rng);
    let mut out = Vec::with_capacity(k.min(pairs.len()));
    for (i, j) in pairs {
        if out.len() >= k {
            break;
        }
        let (i, j) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        let (s, t) = (tree.nodes[i].config, tree.nodes[j].config);
        let path = rs_shortest(&s, &t, p.rho);
        if !edge_free(&path, &s, &p.footprint, w, p.delta_col) {
            continue;
        }
        out.push(Sample {
            s,
            t,
            cost: rs_length(&s, &t, p.rho),
            origin: Origin::CrossVertex,
        });
    }
    Ok(out)
}

/// `cost / max(|st|, 1e-6·L)`, clamped below at 1.
pub fn compute_ratio<T: Scalar>(sample: &Sample<T>, extent: T) -> T {
    let d = sample.s.position_distance(&sample.t).max(T::of(1e-6) * extent);
    (sample.cost / d).max(T::one())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioHistogram {
    /// `counts.len() + 1` increasing edges; ratios past the last edge land in the last bin.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// `n` bins with geometrically spaced edges from `lo` to `hi`.
pub fn geometric_edges(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let step = (hi / lo).ln() / n as f64;
    (0..=n).map(|i| lo * (step * i as f64).exp()).collect()
}

/// Default binning: 12 geometric bins spanning ratios 1 to 8.
pub fn default_edges() -> Vec<f64> {
    geometric_edges(12, 1.0, 8.0)
}

fn bin_of(edges: &[f64], r: f64) -> usize {
    let nb = edges.len() - 1;
    edges[1..nb].partition_point(|&e| e <= r)
}

impl RatioHistogram {
    pub fn of<T: Scalar>(samples: &[Sample<T>], edges: &[f64], extent: T) -> Self {
        let mut counts = vec![0; edges.len() - 1];
        for s in samples {
            counts[bin_of(edges, compute_ratio(s, extent).as_f64())] += 1;
        }
        Self {
            bin_edges: edges.to_vec(),
            counts,
        }
    }

    /// Largest over smallest count among nonempty bins.
    pub fn spread(&self) -> f64 {
        let nz: Vec<usize> = self.counts.iter().copied().filter(|&c| c > 0).collect();
        match (nz.iter().max(), nz.iter().min()) {
            (Some(&a), Some(&b)) => a as f64 / b as f64,
            _ => 1.0,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_lo", "bin_hi", "count"])?;
        for (i, c) in self.counts.iter().enumerate() {
            w.write_record([
                self.bin_edges[i].to_string(),
                self.bin_edges[i + 1].to_string(),
                c.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fraction of samples whose ratio exceeds `threshold`.
pub fn fraction_above<T: Scalar>(samples: &[Sample<T>], threshold: f64, extent: T) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let n = samples
        .iter()
        .filter(|s| compute_ratio(*s, extent).as_f64() > threshold)
        .count();
    n as f64 / samples.len() as f64
}

/// Smallest per-bin quota whose capped total reaches `target` (all counts if unreachable).
pub fn quota_for_target(counts: &[usize], target: usize) -> usize {
    let total: usize = counts.iter().sum();
    if target >= total {
        return counts.iter().copied().max().unwrap_or(0).max(1);
    }
    let (mut lo, mut hi) = (1usize, counts.iter().copied().max().unwrap_or(1));
    while lo < hi {
        let mid = (lo + hi) / 2;
        let kept: usize = counts.iter().map(|&c| c.min(mid)).sum();
        if kept >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Stratified flattening: at most `quota` samples per ratio bin, chosen at random; the
/// result is shuffled.
pub fn adaptive_filter<T: Scalar>(
    samples: &[Sample<T>],
    edges: &[f64],
    quota: usize,
    extent: T,
    rng: &mut Rng,
) -> Result<Vec<Sample<T>>> {
    if quota == 0 {
        return Err(Error::InvalidArgument("quota per bin must be positive".into()));
    }
    let mut bins: Vec<Vec<usize>> = vec![Vec::new(); edges.len() - 1];
    for (i, s) in samples.iter().enumerate() {
        bins[bin_of(edges, compute_ratio(s, extent).as_f64())].push(i);
    }
    let mut keep = Vec::new();
    for b in &mut bins {
        if b.len() > quota {
            b.shuffle(rng);
            b.truncate(quota);
        }
        keep.extend_from_slice(b);
    }
    keep.shuffle(rng);
    Ok(keep.into_iter().map(|i| samples[i]).collect())
}

/// Which planar slice of C-space a Laplacian grid covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Section<T> {
    /// x–y plane at fixed heading.
    XY { theta: T },
    /// x–θ plane at fixed y; θ spans `[-π, π)`.
    XTheta { y: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub section: Section<T>,
    pub x_range: (T, T),
    /// y range for `XY`; ignored for `XTheta`.
    pub y_range: (T, T),
    pub nx: usize,
    pub ny: usize,
}

/// Scalar field on a regular 2-D grid, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> Field<T> {
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }
}

/// Five-point Laplacian of the free-space cost-to-go field toward `goal`, evaluated on the
/// interior of the grid. Returns `(cost field, Laplacian on the (nx−2)×(ny−2) interior)`.
pub fn laplacian_grid<T: Scalar>(
    goal: &Configuration<T>,
    rho: T,
    spec: &GridSpec<T>,
) -> Result<(Field<T>, Field<T>)> {
    if spec.nx < 3 || spec.ny < 3 {
        return Err(Error::InvalidArgument("grid needs at least 3 points per axis".into()));
    }
    let (nx, ny) = (spec.nx, spec.ny);
    let lin = |r: (T, T), n: usize, i: usize| r.0 + (r.1 - r.0) * T::of(i as f64 / (n - 1) as f64);
    let pi = T::PI();
    let second = match spec.section {
        Section::XY { .. } => spec.y_range,
        Section::XTheta { .. } => (-pi, pi),
    };
    let mut cost = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let v = lin(second, ny, j);
        for i in 0..nx {
            let x = lin(spec.x_range, nx, i);
            let q = match spec.section {
                Section::XY { theta } => Configuration::new(x, v, theta),
                Section::XTheta { y } => Configuration::new(x, y, v),
            };
            cost.push(rs_length(&q, goal, rho));
        }
    }
    let hx = (spec.x_range.1 - spec.x_range.0) / T::of((nx - 1) as f64);
    let hy = (second.1 - second.0) / T::of((ny - 1) as f64);
    let field = Field { nx, ny, values: cost };
    let mut lap = Vec::with_capacity((nx - 2) * (ny - 2));
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let c = field.at(i, j);
            let two = T::of(2.0);
            let dxx = (field.at(i + 1, j) - two * c + field.at(i - 1, j)) / (hx * hx);
            let dyy = (field.at(i, j + 1) - two * c + field.at(i, j - 1)) / (hy * hy);
            lap.push(dxx + dyy);
        }
    }
    Ok((
        field,
        Field {
            nx: nx - 2,
            ny: ny - 2,
            values: lap,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetConfig<T> {
    pub mode: SamplingMode,
    pub master_seed: u64,
    pub n_trees: usize,
    pub nodes_per_tree: usize,
    /// Phase-1 samples per tree.
    pub m1: usize,
    pub alpha: T,
    /// Samples in the finished dataset.
    pub target_size: usize,
    /// Pool size before adaptive filtering.
    pub pool_size: usize,
    /// Share of the adaptive pool reserved for cross-vertex pairs.
    pub cross_fraction: f64,
    pub interpolate: bool,
    pub n_bins: usize,
    pub planner: PlannerParams<T>,
}

impl<T: Scalar> DatasetConfig<T> {
    pub fn new(mode: SamplingMode, master_seed: u64, rho: T, extent: T) -> Self {
        Self {
            mode,
            master_seed,
            n_trees: 4,
            nodes_per_tree: 2000,
            m1: 500,
            alpha: T::of(1.5),
            target_size: 20_000,
            pool_size: 80_000,
            cross_fraction: 0.5,
            interpolate: true,
            n_bins: 12,
            planner: PlannerParams::for_workspace(rho, extent),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub workspace_id: String,
    pub rho: f64,
    pub extent: f64,
    pub master_seed: u64,
    pub seeds: Vec<[f64; 3]>,
    pub mode: SamplingMode,
    pub same_branch: usize,
    pub cross_vertex: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    pub workspace_id: String,
    pub samples: Vec<Sample<T>>,
    pub meta: DatasetMeta,
}

/// Tree roots at the four quarter-extent points with random headings; a root that collides
/// is redrawn with a new heading and then anywhere in the free space.
pub fn seed_configurations<T: Scalar>(
    w: &Workspace<T>,
    p: &PlannerParams<T>,
    n: usize,
    rng: &mut Rng,
) -> Result<Vec<Configuration<T>>> {
    let l = w.extent;
    let (a, b) = (l / T::of(4.0), l * T::of(0.75));
    let spots = [(a, a), (b, a), (b, b), (a, b)];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (x, y) = spots[i % 4];
        let mut found = None;
        for _ in 0..32 {
            let th = T::of(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
            let q = Configuration::new(x, y, th);
            if !collides(&q, &p.footprint, w) {
                found = Some(q);
                break;
            }
        }
        let q = match found {
            Some(q) => q,
            None => crate::geometry::random_free_configuration(rng, &p.footprint, w, 100_000)
                .ok_or(Error::Empty("no free configuration for a tree seed"))?,
        };
        out.push(q);
    }
    Ok(out)
}

/// Two-phase trees for every seed, each on its own RNG stream.
pub fn build_trees<T: Scalar>(w: &Workspace<T>, cfg: &DatasetConfig<T>) -> Result<Vec<Tree<T>>> {
    w.validate()?;
    let mut rng = rng::stream(cfg.master_seed, &w.id, "seeds");
    let seeds = seed_configurations(w, &cfg.planner, cfg.n_trees, &mut rng)?;
    seeds
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = cfg
                .planner
                .with_seed(rng::derive_seed(cfg.master_seed, &w.id, &format!("tree-{i}")));
            two_phase_build(s, w, &p, cfg.m1.min(cfg.nodes_per_tree), cfg.nodes_per_tree)
        })
        .collect()
}

fn split(total: usize, parts: usize, i: usize) -> usize {
    total / parts + usize::from(i < total % parts)
}

/// Samples from prebuilt trees according to `cfg.mode`.
pub fn dataset_from_trees<T: Scalar>(
    w: &Workspace<T>,
    trees: &[Tree<T>],
    cfg: &DatasetConfig<T>,
) -> Result<Dataset<T>> {
    if trees.is_empty() {
        return Err(Error::Empty("no trees"));
    }
    let n = trees.len();
    let mut samples = Vec::new();
    match cfg.mode {
        SamplingMode::Uniform => {
            for (i, tree) in trees.iter().enumerate() {
                let mut r = rng::stream(cfg.master_seed, &w.id, &format!("uniform-{i}"));
                samples.extend(sample_same_branch(tree, split(cfg.target_size, n, i), cfg.interpolate, &mut r)?);
            }
        }
        SamplingMode::Adaptive => {
            let pool = cfg.pool_size.max(cfg.target_size);
            let n_cross = (pool as f64 * cfg.cross_fraction).round() as usize;
            let mut cross = Vec::new();
            for (i, tree) in trees.iter().enumerate() {
                let mut r = rng::stream(cfg.master_seed, &w.id, &format!("cross-{i}"));
                cross.extend(sample_cross_vertex(tree, w, &cfg.planner, cfg.alpha, split(n_cross, n, i), &mut r)?);
            }
            // same-branch draws fill whatever the cross-vertex pairs left
            let n_same = pool - cross.len();
            let mut pooled = cross;
            for (i, tree) in trees.iter().enumerate() {
                let mut r = rng::stream(cfg.master_seed, &w.id, &format!("branch-{i}"));
                pooled.extend(sample_same_branch(tree, split(n_same, n, i), cfg.interpolate, &mut r)?);
            }
            let edges = geometric_edges(cfg.n_bins, 1.0, 8.0);
            let hist = RatioHistogram::of(&pooled, &edges, w.extent);
            let quota = quota_for_target(&hist.counts, cfg.target_size);
            let mut r = rng::stream(cfg.master_seed, &w.id, "filter");
            samples = adaptive_filter(&pooled, &edges, quota, w.extent, &mut r)?;
        }
    }
    let count = |o: Origin| samples.iter().filter(|s| s.origin == o).count();
    let meta = DatasetMeta {
        workspace_id: w.id.clone(),
        rho: cfg.planner.rho.as_f64(),
        extent: w.extent.as_f64(),
        master_seed: cfg.master_seed,
        seeds: trees
            .iter()
            .map(|t| [t.root.x.as_f64(), t.root.y.as_f64(), t.root.theta.as_f64()])
            .collect(),
        mode: cfg.mode,
        same_branch: count(Origin::SameBranch),
        cross_vertex: count(Origin::CrossVertex),
    };
    Ok(Dataset {
        workspace_id: w.id.clone(),
        samples,
        meta,
    })
}

/// Trees and samples for one workspace.
pub fn build_dataset<T: Scalar>(w: &Workspace<T>, cfg: &DatasetConfig<T>) -> Result<(Dataset<T>, Vec<Tree<T>>)> {
    let trees = build_trees(w, cfg)?;
    let d = dataset_from_trees(w, &trees, cfg)?;
    Ok((d, trees))
}

const HEADER: [&str; 8] = ["s_x", "s_y", "s_theta", "t_x", "t_y", "t_theta", "cost", "origin"];

/// Sidecar path holding the metadata of the dataset stored at `csv`.
pub fn meta_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

impl<T: Scalar> Dataset<T> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn cast<U: Scalar>(&self) -> Dataset<U> {
        Dataset {
            workspace_id: self.workspace_id.clone(),
            samples: self
                .samples
                .iter()
                .map(|s| Sample {
                    s: s.s.cast(),
                    t: s.t.cast(),
                    cost: s.cost.cast(),
                    origin: s.origin,
                })
                .collect(),
            meta: self.meta.clone(),
        }
    }

    pub fn histogram(&self, edges: &[f64]) -> RatioHistogram {
        RatioHistogram::of(&self.samples, edges, T::of(self.meta.extent))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(HEADER)?;
        for s in &self.samples {
            w.write_record([
                s.s.x.to_string(),
                s.s.y.to_string(),
                s.s.theta.to_string(),
                s.t.x.to_string(),
                s.t.y.to_string(),
                s.t.theta.to_string(),
                s.cost.to_string(),
                s.origin.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the CSV at `path` and its metadata next to it.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.write_csv(BufWriter::new(File::create(path)?))?;
        let meta = serde_json::to_string_pretty(&self.meta)?;
        std::fs::write(meta_path(path), meta)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let meta: DatasetMeta = serde_json::from_reader(BufReader::new(File::open(meta_path(path))?))?;
        let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
        if r.headers()?.iter().ne(HEADER.iter().copied()) {
            return Err(Error::DatasetFormat(format!("unexpected header in {}", path.display())));
        }
        let num = |f: &str| -> Result<T> {
            f.parse::<T>()
                .map_err(|_| Error::DatasetFormat(format!("bad number {f:?}")))
        };
        let mut samples = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != HEADER.len() {
                return Err(Error::DatasetFormat(format!("row with {} fields", rec.len())));
            }
            // stored angles are already wrapped; keep them bit-exact
            let conf = |a: usize| -> Result<Configuration<T>> {
                Ok(Configuration {
                    x: num(&rec[a])?,
                    y: num(&rec[a + 1])?,
                    theta: num(&rec[a + 2])?,
                })
            };
            samples.push(Sample {
                s: conf(0)?,
                t: conf(3)?,
                cost: num(&rec[6])?,
                origin: Origin::parse(&rec[7])?,
            });
        }
        Ok(Self {
            workspace_id: meta.workspace_id.clone(),
            samples,
            meta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_and_bins() {
        let e = default_edges();
        assert_eq!(e.len(), 13);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[12] - 8.0).abs() < 1e-12);
        assert_eq!(bin_of(&e, 1.0), 0);
        assert_eq!(bin_of(&e, 100.0), 11);
        assert_eq!(bin_of(&e, e[3]), 3);
    }

    #[test]
    fn quota_water_filling() {
        assert_eq!(quota_for_target(&[1000, 10], 110), 100);
        assert_eq!(quota_for_target(&[5, 5], 100), 5);
        let q = quota_for_target(&[400, 300, 20, 0], 500);
        let kept: usize = [400usize, 300, 20, 0].iter().map(|&c| c.min(q)).sum();
        assert!(kept >= 500 && kept < 500 + 3);
    }

    #[test]
    fn ratio_examples() {
        let o = Configuration::<f64>::new(0.0, 0.0, 0.0);
        let ahead = Sample {
            s: o,
            t: Configuration::new(10.0, 0.0, 0.0),
            cost: 10.0,
            origin: Origin::SameBranch,
        };
        assert_eq!(compute_ratio(&ahead, 500.0), 1.0);
        let same = Sample { t: o, cost: 0.0, ..ahead };
        assert_eq!(compute_ratio(&same, 500.0), 1.0);
    }
}
