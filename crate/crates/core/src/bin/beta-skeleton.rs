use beta_skeleton::config::{apply_growth_keys, apply_random_set_keys, parse_list, KeyValues};
use beta_skeleton::experiments::{
    edge_loss_sweep_with, fit_power_law, generate_random_set, growth_sweep, GrowthRun, PowerLawFit, RandomSetConfig,
    SweepStrategy,
};
use beta_skeleton::growth::grow_with;
use beta_skeleton::render::{render_svg, RenderStyle};
use beta_skeleton::skeleton::io::{parse_edges, parse_points, write_edges, write_points};
use beta_skeleton::skeleton::{stability_violation, ConnectivityMode};
use beta_skeleton::{build_indexed, build_naive, compute_metrics, GridIndex, GrowthConfig, MetricsReport, PointSet, SkeletonGraph};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Beta-skeletons of planar point sets: construction, connected growth,
/// sweeps and rendering.
///
/// Data goes to stdout or the named files; progress and diagnostics go to
/// stderr. Set RAYON_NUM_THREADS to cap worker threads.
#[derive(Parser)]
#[command(name = "beta-skeleton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the skeleton of a point file and write its edge list and/or metrics.
    Build(BuildArgs),
    /// Grow a point set whose skeleton stays connected.
    Grow(GrowArgs),
    /// Edge counts over a beta grid, with a power-law fit.
    SweepEdges(SweepEdgesArgs),
    /// Grow and measure skeletons for every (beta, dtheta) pair.
    SweepGrow(SweepGrowArgs),
    /// Draw points and edges as SVG.
    Render(RenderArgs),
    /// Check whether every Gabriel edge survives arbitrarily large beta.
    Stability(StabilityArgs),
    /// Generate a seeded random point set.
    RandomPoints(RandomPointsArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    beta: f64,
    /// Edge list destination (default: stdout unless --metrics-out is given).
    #[arg(long)]
    edges_out: Option<PathBuf>,
    /// Metrics CSV destination; `-` for stdout.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
    /// Test every point against every pair instead of using the grid index.
    #[arg(long)]
    naive: bool,
}

#[derive(Args, Clone)]
struct GrowthFlags {
    /// key = value file with growth settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    /// Angular step in degrees.
    #[arg(long)]
    dtheta: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    dr: Option<f64>,
    /// Minimum separation between points.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    seed_x: Option<f64>,
    #[arg(long)]
    seed_y: Option<f64>,
    /// path-connected or no-isolated-nodes.
    #[arg(long)]
    mode: Option<ConnectivityMode>,
    /// Reject candidates that remove any existing edge.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct GrowArgs {
    #[command(flatten)]
    growth: GrowthFlags,
    #[arg(long)]
    points_out: Option<PathBuf>,
    #[arg(long)]
    edges_out: Option<PathBuf>,
    /// Trace CSV destination (default: stdout).
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[arg(long)]
    metrics_out: Option<PathBuf>,
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepEdgesArgs {
    /// Point file to sweep; alternatively use --random.
    #[arg(long, conflicts_with = "random")]
    points: Option<PathBuf>,
    /// Generate this many random points instead of reading a file.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 250.0)]
    domain_radius: f64,
    #[arg(long, default_value_t = 5.0)]
    min_separation: f64,
    /// key = value file with random-set and sweep settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta_min: Option<f64>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    beta_step: Option<f64>,
    /// Upper beta of the power-law fit window (default: beta_max).
    #[arg(long)]
    fit_beta_max: Option<f64>,
    /// Retest only surviving edges at each next beta.
    #[arg(long)]
    nested: bool,
    /// Curve CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    fit_out: Option<PathBuf>,
    /// Write the generated random set here.
    #[arg(long)]
    points_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepGrowArgs {
    #[command(flatten)]
    growth: GrowthFlags,
    /// Comma-separated betas.
    #[arg(long)]
    betas: Option<String>,
    /// Comma-separated angular steps in degrees.
    #[arg(long)]
    dthetas: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    points: PathBuf,
    /// Edge file; without it the skeleton is built at --beta.
    #[arg(long, required_unless_present = "beta")]
    edges: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 2.5)]
    node_radius: f64,
    #[arg(long, default_value_t = 1.0)]
    edge_width: f64,
    #[arg(long, default_value_t = 10.0)]
    padding: f64,
    #[arg(long, default_value = "black")]
    node_fill: String,
    #[arg(long, default_value = "black")]
    edge_stroke: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long)]
    points: PathBuf,
}

#[derive(Args)]
struct RandomPointsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 250.0)]
    domain_radius: f64,
    #[arg(long, default_value_t = 5.0)]
    min_separation: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(dest: Option<&Path>, text: &str) -> CliResult<()> {
    match dest {
        Some(p) if p != Path::new("-") => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        _ => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn load_points(path: &Path) -> CliResult<PointSet> {
    parse_points(&read(path)?, &path.display().to_string()).map_err(|e| e.to_string())
}

fn load_config(path: &Path) -> CliResult<KeyValues> {
    KeyValues::parse(&read(path)?, &path.display().to_string()).map_err(|e| e.to_string())
}

fn metrics_csv(m: &MetricsReport) -> String {
    format!("{}\n{}\n", MetricsReport::CSV_HEADER, m.csv_row())
}

fn growth_config(flags: &GrowthFlags, kv: Option<&mut KeyValues>) -> CliResult<GrowthConfig> {
    let mut cfg = GrowthConfig::default();
    if let Some(kv) = kv {
        cfg = apply_growth_keys(kv, cfg).map_err(|e| e.to_string())?;
    }
    if let Some(v) = flags.beta {
        cfg.beta = v;
    }
    if let Some(v) = flags.dtheta {
        cfg.dtheta = v;
    }
    if let Some(v) = flags.r0 {
        cfg.r0 = v;
    }
    if let Some(v) = flags.dr {
        cfg.dr = v;
    }
    if let Some(v) = flags.delta {
        cfg.delta = v;
    }
    if let Some(v) = flags.r_max {
        cfg.r_max = v;
    }
    if let Some(v) = flags.seed_x {
        cfg.seed.x = v;
    }
    if let Some(v) = flags.seed_y {
        cfg.seed.y = v;
    }
    if let Some(m) = flags.mode {
        cfg.connectivity_mode = m;
    }
    cfg.strict |= flags.strict;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn build_graph(ps: &PointSet, beta: f64, naive: bool) -> CliResult<SkeletonGraph> {
    let g = if naive {
        build_naive(ps, beta)
    } else {
        GridIndex::with_default_cell(ps).and_then(|idx| build_indexed(ps, beta, &idx))
    };
    g.map_err(|e| e.to_string())
}

fn cmd_build(a: BuildArgs) -> CliResult<()> {
    let ps = load_points(&a.points)?;
    let g = build_graph(&ps, a.beta, a.naive)?;
    eprintln!("built skeleton: {} nodes, {} edges at beta={}", g.node_count(), g.edge_count(), a.beta);
    if a.edges_out.is_some() || a.metrics_out.is_none() {
        emit(a.edges_out.as_deref(), &write_edges(&g))?;
    }
    if let Some(dest) = &a.metrics_out {
        emit(Some(dest), &metrics_csv(&compute_metrics(&ps, &g)))?;
    }
    Ok(())
}

fn cmd_grow(a: GrowArgs) -> CliResult<()> {
    let mut kv = a.growth.config.as_deref().map(load_config).transpose()?;
    let cfg = growth_config(&a.growth, kv.as_mut())?;
    if let Some(kv) = &kv {
        kv.finish().map_err(|e| e.to_string())?;
    }
    let (ps, g, trace) = grow_with(&cfg, |r| {
        if (r - cfg.r0) % 10.0 < cfg.dr {
            eprintln!("grow: reached r={r}");
        }
    })
    .map_err(|e| e.to_string())?;
    eprintln!("grown: {} nodes, {} edges", ps.len(), g.edge_count());
    if let Some(p) = &a.points_out {
        emit(Some(p), &write_points(&ps, &[]))?;
    }
    if let Some(p) = &a.edges_out {
        emit(Some(p), &write_edges(&g))?;
    }
    if let Some(p) = &a.metrics_out {
        emit(Some(p), &metrics_csv(&compute_metrics(&ps, &g)))?;
    }
    if let Some(p) = &a.svg_out {
        let svg = render_svg(&ps, &g, &RenderStyle::default()).map_err(|e| e.to_string())?;
        emit(Some(p), &svg)?;
    }
    emit(a.trace_out.as_deref(), &trace.to_csv())
}

fn cmd_sweep_edges(a: SweepEdgesArgs) -> CliResult<()> {
    let mut kv = a.config.as_deref().map(load_config).transpose()?;
    let mut rcfg = RandomSetConfig {
        n: a.random.unwrap_or(0),
        domain_radius: a.domain_radius,
        min_separation: a.min_separation,
        rng_seed: a.seed,
    };
    let (mut beta_min, mut beta_max, mut beta_step, mut fit_max) = (1.0, 100.0, 0.1, None);
    if let Some(kv) = kv.as_mut() {
        rcfg = apply_random_set_keys(kv, rcfg).map_err(|e| e.to_string())?;
        let get = |kv: &mut KeyValues, k: &str| kv.get::<f64>(k).map_err(|e| e.to_string());
        beta_min = get(kv, "beta_min")?.unwrap_or(beta_min);
        beta_max = get(kv, "beta_max")?.unwrap_or(beta_max);
        beta_step = get(kv, "beta_step")?.unwrap_or(beta_step);
        fit_max = get(kv, "fit_beta_max")?;
        kv.finish().map_err(|e| e.to_string())?;
    }
    if let Some(n) = a.random {
        rcfg.n = n;
    }
    beta_min = a.beta_min.unwrap_or(beta_min);
    beta_max = a.beta_max.unwrap_or(beta_max);
    beta_step = a.beta_step.unwrap_or(beta_step);
    let fit_max = a.fit_beta_max.or(fit_max).unwrap_or(beta_max);

    let ps = match &a.points {
        Some(p) => load_points(p)?,
        None if rcfg.n > 0 => {
            let ps = generate_random_set(&rcfg).map_err(|e| e.to_string())?;
            for line in rcfg.provenance() {
                eprintln!("# {line}");
            }
            if let Some(p) = &a.points_out {
                emit(Some(p), &write_points(&ps, &rcfg.provenance()))?;
            }
            ps
        }
        None => return Err("sweep-edges needs --points or --random (or n in --config)".into()),
    };
    let strategy = if a.nested { SweepStrategy::Nested } else { SweepStrategy::Recompute };
    let curve = edge_loss_sweep_with(&ps, beta_min, beta_max, beta_step, strategy).map_err(|e| e.to_string())?;
    emit(a.out.as_deref(), &curve.to_csv())?;
    match fit_power_law(&curve.window(beta_min, fit_max)) {
        Ok(fit) => {
            eprintln!(
                "power law over beta in [{beta_min}, {fit_max}]: exponent={} coefficient={} r_squared={}",
                fit.exponent, fit.coefficient, fit.r_squared
            );
            if let Some(p) = &a.fit_out {
                emit(Some(p), &format!("{}\n{}\n", PowerLawFit::CSV_HEADER, fit.csv_row()))?;
            }
        }
        Err(e) => {
            eprintln!("power law fit skipped: {e}");
            if a.fit_out.is_some() {
                return Err(format!("power law fit failed: {e}"));
            }
        }
    }
    Ok(())
}

fn cmd_sweep_grow(a: SweepGrowArgs) -> CliResult<()> {
    let mut kv = a.growth.config.as_deref().map(load_config).transpose()?;
    let base = growth_config(&a.growth, kv.as_mut())?;
    let mut betas = vec![base.beta];
    let mut dthetas = vec![base.dtheta];
    if let Some(kv) = kv.as_mut() {
        if let Some(v) = kv.get_list::<f64>("betas").map_err(|e| e.to_string())? {
            betas = v;
        }
        if let Some(v) = kv.get_list::<f64>("dthetas").map_err(|e| e.to_string())? {
            dthetas = v;
        }
        kv.finish().map_err(|e| e.to_string())?;
    }
    if let Some(s) = &a.betas {
        betas = parse_list(s).map_err(|e| format!("--betas: {e}"))?;
    }
    if let Some(s) = &a.dthetas {
        dthetas = parse_list(s).map_err(|e| format!("--dthetas: {e}"))?;
    }
    eprintln!("sweep-grow: {} runs", betas.len() * dthetas.len());
    let runs = growth_sweep(&base, &betas, &dthetas);
    let mut out = format!("{}\n", GrowthRun::CSV_HEADER);
    for run in &runs {
        out.push_str(&run.csv_row());
        out.push('\n');
    }
    emit(a.out.as_deref(), &out)?;
    let failed = runs.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        eprintln!("sweep-grow: {failed} run(s) failed");
    }
    Ok(())
}

fn cmd_render(a: RenderArgs) -> CliResult<()> {
    let ps = load_points(&a.points)?;
    let g = match (&a.edges, a.beta) {
        (Some(path), beta) => {
            let edges = parse_edges(&read(path)?, &path.display().to_string()).map_err(|e| e.to_string())?;
            SkeletonGraph::from_edges(ps.len(), beta.unwrap_or(f64::NAN), edges)
                .map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(beta)) => build_graph(&ps, beta, false)?,
        (None, None) => unreachable!("clap requires --edges or --beta"),
    };
    let style = RenderStyle {
        node_radius: a.node_radius,
        edge_width: a.edge_width,
        canvas_padding: a.padding,
        node_fill: a.node_fill,
        edge_stroke: a.edge_stroke,
    };
    let svg = render_svg(&ps, &g, &style).map_err(|e| e.to_string())?;
    emit(a.out.as_deref(), &svg)
}

fn cmd_stability(a: StabilityArgs) -> CliResult<()> {
    let ps = load_points(&a.points)?;
    let text = match stability_violation(&ps).map_err(|e| e.to_string())? {
        None => "stable: yes\n".to_string(),
        Some((i, j, k)) => {
            format!("stable: no\nviolation: edge {i} {j} has point {k} inside its limit strip\n")
        }
    };
    emit(None, &text)
}

fn cmd_random_points(a: RandomPointsArgs) -> CliResult<()> {
    let cfg = RandomSetConfig {
        n: a.n,
        domain_radius: a.domain_radius,
        min_separation: a.min_separation,
        rng_seed: a.seed,
    };
    let ps = generate_random_set(&cfg).map_err(|e| e.to_string())?;
    emit(a.out.as_deref(), &write_points(&ps, &cfg.provenance()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Grow(a) => cmd_grow(a),
        Command::SweepEdges(a) => cmd_sweep_edges(a),
        Command::SweepGrow(a) => cmd_sweep_grow(a),
        Command::Render(a) => cmd_render(a),
        Command::Stability(a) => cmd_stability(a),
        Command::RandomPoints(a) => cmd_random_points(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
