//! `c2g`: workspaces, datasets, training, planning and benchmarks from the shell.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use c2g_core::bench::{self, BenchSettings, Models, PlannerKind};
use c2g_core::c2g_planner::{plan, GreedySettings};
use c2g_core::dataset::{build_dataset, default_edges, Dataset, DatasetConfig, SamplingMode};
use c2g_core::geometry::{random_workspace, Configuration, Workspace, WorkspaceSpec};
use c2g_core::model::{load_model, save_model, train, TrainConfig};
use c2g_core::svg;

#[derive(Parser)]
#[command(name = "c2g", version, about = "Learned cost-to-go planning for a Reeds-Shepp car")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Uniform,
    Adaptive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Planner {
    #[value(name = "RRT")]
    Rrt,
    #[value(name = "RRTStar")]
    RrtStar,
    #[value(name = "C2G")]
    C2g,
    #[value(name = "C2G_Uniform")]
    C2gUniform,
    #[value(name = "RS_Optimal")]
    RsOptimal,
}

impl From<Planner> for PlannerKind {
    fn from(p: Planner) -> Self {
        match p {
            Planner::Rrt => PlannerKind::Rrt,
            Planner::RrtStar => PlannerKind::RrtStar,
            Planner::C2g => PlannerKind::C2g,
            Planner::C2gUniform => PlannerKind::C2gUniform,
            Planner::RsOptimal => PlannerKind::RsOptimal,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Write random workspaces as JSON files named after their ids.
    GenWorkspaces {
        #[arg(long, env = "C2G_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        obstacles: usize,
        #[arg(long, default_value_t = 500.0)]
        extent: f64,
        #[arg(long, default_value_t = 25.0)]
        rho: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grow trees in a workspace and write the cost-to-go dataset, its metadata and ratio histogram.
    GenDataset {
        #[arg(long)]
        workspace: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Adaptive)]
        mode: Mode,
        #[arg(long, default_value_t = 25.0)]
        rho: f64,
        #[arg(long, env = "C2G_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        target_size: usize,
        #[arg(long)]
        trees: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
        /// Directory for JSON dumps of the grown trees.
        #[arg(long)]
        tree_out: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a cost-to-go network; writes the model and a per-epoch report CSV.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out_model: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        lr: f64,
        #[arg(long, default_value_t = 256)]
        batch: usize,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        /// Cosine-decay the learning rate to this fraction of --lr by the last epoch.
        #[arg(long, default_value_t = 1.0)]
        lr_final: f64,
        #[arg(long, env = "C2G_SEED", default_value_t = 0)]
        seed: u64,
        /// Defaults to the model path with a `.report.csv` extension.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Greedy planning with a trained model; prints a JSON summary.
    Plan {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        workspace: PathBuf,
        #[arg(long, value_parser = parse_pose, allow_hyphen_values = true)]
        start: Configuration<f64>,
        #[arg(long, value_parser = parse_pose, allow_hyphen_values = true)]
        goal: Configuration<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        no_docking: bool,
    },
    /// Run planners on a shared query set over every workspace in a directory.
    Bench {
        #[arg(long)]
        workspaces: PathBuf,
        /// Where `<id>.model` and `<id>.uniform.model` live; defaults to the workspace directory.
        #[arg(long)]
        models: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        queries: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "RS_Optimal,RRT,RRTStar,C2G")]
        planners: Vec<Planner>,
        #[arg(long, env = "C2G_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25.0)]
        rho: f64,
        #[arg(long, default_value_t = 5000)]
        rrt_star_nodes: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_pose(s: &str) -> std::result::Result<Configuration<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [x, y, th] => Configuration::try_new(x, y, th).map_err(|e| e.to_string()),
        _ => Err(format!("expected x,y,theta, got {s:?}")),
    }
}

fn load_workspace(path: &Path) -> Result<Workspace<f64>> {
    Workspace::load(path).with_context(|| format!("reading workspace {}", path.display()))
}

fn gen_workspaces(seed: u64, count: usize, obstacles: usize, extent: f64, rho: f64, out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let spec = WorkspaceSpec::new(obstacles, extent, (0.08 * extent, 0.2 * extent), rho);
    for i in 0..count as u64 {
        let w = random_workspace::<f64>(seed + i, &spec);
        let path = out.join(format!("{}.json", w.id));
        w.save(&path).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen_dataset(
    workspace: &Path,
    mode: Mode,
    rho: f64,
    seed: u64,
    target_size: usize,
    trees: Option<usize>,
    nodes: Option<usize>,
    tree_out: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let w = load_workspace(workspace)?;
    let mode = match mode {
        Mode::Uniform => SamplingMode::Uniform,
        Mode::Adaptive => SamplingMode::Adaptive,
    };
    let base = DatasetConfig::new(mode, seed, rho, w.extent);
    let cfg = DatasetConfig {
        target_size,
        pool_size: base.pool_size.max(4 * target_size),
        n_trees: trees.unwrap_or(base.n_trees),
        nodes_per_tree: nodes.unwrap_or(base.nodes_per_tree),
        m1: nodes.map_or(base.m1, |n| n / 4),
        ..base
    };
    let (d, forest) = build_dataset(&w, &cfg)?;
    d.save(out).with_context(|| format!("writing {}", out.display()))?;
    let hist = d.histogram(&default_edges());
    hist.write_csv(BufWriter::new(File::create(out.with_extension("hist.csv"))?))?;
    if let Some(dir) = tree_out {
        fs::create_dir_all(dir)?;
        for (k, t) in forest.iter().enumerate() {
            fs::write(dir.join(format!("tree-{k}.json")), t.to_json()?)?;
        }
    }
    println!(
        "{} samples ({} same-branch, {} cross-vertex), histogram spread {:.2}",
        d.len(),
        d.meta.same_branch,
        d.meta.cross_vertex,
        hist.spread()
    );
    Ok(())
}

fn train_cmd(dataset: &Path, out_model: &Path, cfg: &TrainConfig, report: Option<&Path>) -> Result<()> {
    let d: Dataset<f32> = Dataset::load(dataset).with_context(|| format!("reading dataset {}", dataset.display()))?;
    let (m, rep) = train(&d, cfg)?;
    save_model(&m, out_model)?;
    let report = report.map_or_else(|| out_model.with_extension("report.csv"), Path::to_path_buf);
    rep.write_csv(BufWriter::new(File::create(&report)?))?;
    println!("best epoch {}, validation rmse {:.3}", rep.best_epoch, rep.rmse);
    Ok(())
}

fn plan_cmd(
    model: &Path,
    workspace: &Path,
    start: &Configuration<f64>,
    goal: &Configuration<f64>,
    svg_out: Option<&Path>,
    no_docking: bool,
) -> Result<()> {
    let m: c2g_core::C2gModel = load_model(model).with_context(|| format!("reading model {}", model.display()))?;
    let w = load_workspace(workspace)?.cast::<f32>();
    let mut s = GreedySettings::for_rho(m.rho);
    if no_docking {
        s = s.without_docking();
    }
    let t = plan(&start.cast(), &goal.cast(), &w, &m, &s)?;
    println!("{}", serde_json::to_string_pretty(&t.summary())?);
    if let Some(p) = svg_out {
        fs::write(p, svg::render(&w, &start.cast(), &goal.cast(), Some(&t), &s.footprint, 4))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench_cmd(
    dir: &Path,
    models_dir: Option<&Path>,
    queries: usize,
    planners: &[PlannerKind],
    seed: u64,
    rho: f64,
    rrt_star_nodes: usize,
    out: &Path,
) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no workspace JSON files in {}", dir.display());
    }
    let models_dir = models_dir.unwrap_or(dir);
    let mut records = Vec::new();
    let mut cluttered = false;
    for f in &files {
        let w = load_workspace(f)?;
        cluttered |= !w.obstacles.is_empty();
        let mut s = BenchSettings::for_workspace(rho, w.extent);
        s.rrt_star_nodes = rrt_star_nodes;
        let load = |suffix: &str, kind: PlannerKind| -> Result<Option<c2g_core::C2gModel>> {
            if !planners.contains(&kind) {
                return Ok(None);
            }
            let p = models_dir.join(format!("{}{suffix}", w.id));
            Ok(Some(load_model(&p).with_context(|| format!("{kind} needs {}", p.display()))?))
        };
        let adaptive = load(".model", PlannerKind::C2g)?;
        let uniform = load(".uniform.model", PlannerKind::C2gUniform)?;
        let models = Models { adaptive: adaptive.as_ref(), uniform: uniform.as_ref() };
        for q in bench::make_queries(&w, queries, seed, &s.tree)? {
            for &k in planners {
                records.push(bench::run_query(k, &q, &w, models, &s, seed)?);
            }
        }
    }
    bench::write_records(&records, BufWriter::new(File::create(out)?))?;
    let reference = if cluttered { PlannerKind::RrtStar } else { PlannerKind::RsOptimal };
    print!("{}", bench::format_table(&bench::aggregate(&records, reference), reference));
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::GenWorkspaces { seed, count, obstacles, extent, rho, out } => {
            gen_workspaces(seed, count, obstacles, extent, rho, &out)
        }
        Cmd::GenDataset { workspace, mode, rho, seed, target_size, trees, nodes, tree_out, out } => {
            gen_dataset(&workspace, mode, rho, seed, target_size, trees, nodes, tree_out.as_deref(), &out)
        }
        Cmd::Train { dataset, out_model, lr, batch, epochs, lr_final, seed, report } => {
            let cfg = TrainConfig { learning_rate: lr, batch_size: batch, epochs, seed, final_lr_fraction: lr_final, ..Default::default() };
            train_cmd(&dataset, &out_model, &cfg, report.as_deref())
        }
        Cmd::Plan { model, workspace, start, goal, svg, no_docking } => {
            plan_cmd(&model, &workspace, &start, &goal, svg.as_deref(), no_docking)
        }
        Cmd::Bench { workspaces, models, queries, planners, seed, rho, rrt_star_nodes, out } => {
            let kinds: Vec<PlannerKind> = planners.into_iter().map(PlannerKind::from).collect();
            bench_cmd(&workspaces, models.as_deref(), queries, &kinds, seed, rho, rrt_star_nodes, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        // clap exits 0 for --help/--version and 2 for usage errors
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
