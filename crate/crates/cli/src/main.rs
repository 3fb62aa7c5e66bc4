//! `alaam`: simulate networks, attributes and ALAAM outcomes, sample them,
//! estimate models, and run sampling experiments.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for data errors and 3
//! when `estimate --strict` does not converge.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alaam::ergm::{ergm_simulate, ErgmParams};
use alaam::estimate::{estimate, EstimationConfig, EstimationResult};
use alaam::harness::{draw_covariates, AttributeSpec, Experiment, ExperimentConfig, FollowLimit};
use alaam::io;
use alaam::model::{simulate_outcomes, SimulationConfig};
use alaam::sampling::{random_node_sample, snowball, SeedSpec, SnowballConfig};
use alaam::{Effect, Error, Graph};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alaam", version, about = "ALAAM simulation, estimation and sampling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a network from an ERGM and write it as an edge list.
    GenNet(GenNet),
    /// Draw binary and continuous covariates.
    GenAttrs(GenAttrs),
    /// Simulate ALAAM outcomes on a network.
    SimAlaam(SimAlaam),
    /// Draw a random node or snowball sample.
    #[command(subcommand)]
    Sample(SampleCmd),
    /// Estimate an ALAAM, optionally conditional on snowball waves.
    Estimate(EstimateCmd),
    /// Run an experiment with a single sampling cell.
    Experiment(ExperimentCmd),
    /// Run every cell of an experiment's sampling grid.
    Sweep(ExperimentCmd),
    /// Descriptive statistics of a network.
    Stats(StatsCmd),
}

#[derive(Args)]
struct NetworkArg {
    /// Edge-list file.
    #[arg(long)]
    network: PathBuf,
    /// Node ids in the edge list start at 1.
    #[arg(long)]
    one_based: bool,
}

impl NetworkArg {
    fn load(&self) -> Result<Graph, Error> {
        io::read_edge_list(&self.network, self.one_based)
    }
}

#[derive(Args)]
struct GenNet {
    #[arg(long, default_value_t = 500)]
    nodes: usize,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    edge: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    alt_k_star: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alt_k_triangle: f64,
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    alt_two_path: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Tie toggles before the network is returned.
    #[arg(long, default_value_t = 10_000_000)]
    burn_in: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenAttrs {
    /// Network whose node count is used.
    #[arg(long, conflicts_with = "nodes", required_unless_present = "nodes")]
    network: Option<PathBuf>,
    #[arg(long)]
    one_based: bool,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    binary_fraction: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    continuous_mean: f64,
    #[arg(long, default_value_t = 1.0)]
    continuous_sd: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SimAlaam {
    #[command(flatten)]
    network: NetworkArg,
    /// Attribute file; an outcome column, if any, is ignored.
    #[arg(long)]
    attrs: PathBuf,
    /// Parameter file (`effect,value`).
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    burn_in: usize,
    #[arg(long, default_value_t = 100_000)]
    spacing: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving `outcome_<k>.csv` attribute files.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum SampleCmd {
    /// Subgraph induced by nodes drawn uniformly without replacement.
    Random {
        #[command(flatten)]
        common: SampleCommon,
        #[arg(long)]
        size: usize,
    },
    /// Link-tracing sample from random seeds.
    Snowball {
        #[command(flatten)]
        common: SampleCommon,
        #[arg(long)]
        seeds: usize,
        #[arg(long, default_value_t = 2)]
        waves: usize,
        /// Ties traced per node: an integer or `inf`.
        #[arg(long, default_value = "inf")]
        max_follow: FollowLimit,
    },
}

#[derive(Args)]
struct SampleCommon {
    #[command(flatten)]
    network: NetworkArg,
    /// Attributes to restrict to the sample.
    #[arg(long)]
    attrs: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix: writes `<prefix>.edges`, `<prefix>.ids.csv`, and
    /// `<prefix>.attrs.csv` / `<prefix>.waves.csv` when applicable.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct EstimateCmd {
    #[command(flatten)]
    network: NetworkArg,
    /// Attribute file with an outcome column.
    #[arg(long)]
    attrs: PathBuf,
    /// Hold the outcomes of the outermost wave fixed.
    #[arg(long, requires = "waves")]
    conditional: bool,
    /// Wave file (`node,wave`) of a snowball sample.
    #[arg(long)]
    waves: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    subphases: Option<usize>,
    #[arg(long)]
    phase3_samples: Option<usize>,
    #[arg(long)]
    spacing: Option<usize>,
    /// Exit with status 3 when the estimate does not converge.
    #[arg(long)]
    strict: bool,
    /// Write the result here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentCmd {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configuration's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory receiving `summary.csv`, `replicates.csv` and
    /// `manifest.json`.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct StatsCmd {
    #[command(flatten)]
    network: NetworkArg,
    /// Attribute file; adds the percentage of positive outcomes.
    #[arg(long)]
    attrs: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(Error),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match cli.command {
        Command::GenNet(a) => gen_net(a),
        Command::GenAttrs(a) => gen_attrs(a),
        Command::SimAlaam(a) => sim_alaam(a),
        Command::Sample(a) => sample(a),
        Command::Estimate(a) => estimate_cmd(a),
        Command::Experiment(a) => experiment(a, false),
        Command::Sweep(a) => experiment(a, true),
        Command::Stats(a) => stats(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::NotConverged) => {
            eprintln!("error: estimation did not converge");
            ExitCode::from(3)
        }
    }
}

fn gen_net(a: GenNet) -> CmdResult {
    let p = ErgmParams {
        edge: a.edge,
        alt_k_star: a.alt_k_star,
        alt_k_triangle: a.alt_k_triangle,
        alt_two_path: a.alt_two_path,
        lambda: a.lambda,
        n: a.nodes,
    };
    let g = ergm_simulate(&p, a.burn_in, a.seed)?;
    io::write_edge_list(&a.output, &g)?;
    Ok(())
}

fn gen_attrs(a: GenAttrs) -> CmdResult {
    let n = match (&a.network, a.nodes) {
        (Some(path), _) => io::read_edge_list(path, a.one_based)?.node_count(),
        (None, Some(n)) => n,
        (None, None) => return Err(Failure::Usage("give --network or --nodes".into())),
    };
    let spec = AttributeSpec {
        binary_fraction: a.binary_fraction,
        continuous_mean: a.continuous_mean,
        continuous_sd: a.continuous_sd,
    };
    let attrs = draw_covariates(n, &spec, a.seed)?;
    io::write_attributes(&a.output, &attrs, false)?;
    Ok(())
}

fn sim_alaam(a: SimAlaam) -> CmdResult {
    let g = a.network.load()?;
    let attrs = io::read_attributes_for(&a.attrs, &g)?.table;
    let theta = io::read_params(&a.params)?;
    let cfg = SimulationConfig::new(a.burn_in, a.spacing, a.count, a.seed);
    let ys = simulate_outcomes(&g, &attrs, &theta, &cfg)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| io_error(&a.out_dir, e))?;
    let width = a.count.to_string().len();
    for (k, y) in ys.into_iter().enumerate() {
        let path = a.out_dir.join(format!("outcome_{:0width$}.csv", k + 1));
        io::write_attributes(&path, &attrs.with_outcome(y)?, true)?;
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn sample(cmd: SampleCmd) -> CmdResult {
    let (common, sub, ids, waves) = match cmd {
        SampleCmd::Random { common, size } => {
            let g = common.network.load()?;
            let (sub, map) = random_node_sample(&g, size, common.seed)?;
            (common, sub, map.to_original, None)
        }
        SampleCmd::Snowball {
            common,
            seeds,
            waves,
            max_follow,
        } => {
            let g = common.network.load()?;
            let s = snowball(
                &g,
                &SnowballConfig {
                    seeds: SeedSpec::Count(seeds),
                    waves,
                    max_follow: max_follow.0,
                    rng_seed: common.seed,
                },
            )?;
            (common, s.graph, s.origin_ids, Some(s.wave_of))
        }
    };
    let out = &common.output;
    io::write_edge_list(&with_suffix(out, ".edges"), &sub)?;
    let ids_path = with_suffix(out, ".ids.csv");
    io::write_atomic(&ids_path, io::format_id_map(&ids).as_bytes())?;
    if let Some(w) = waves {
        io::write_waves(&with_suffix(out, ".waves.csv"), &w)?;
    }
    if let Some(path) = &common.attrs {
        let source = common.network.load()?;
        let a = io::read_attributes_for(path, &source)?;
        io::write_attributes(&with_suffix(out, ".attrs.csv"), &a.table.project(&ids), a.has_outcome)?;
    }
    Ok(())
}

fn estimate_cmd(a: EstimateCmd) -> CmdResult {
    let g = a.network.load()?;
    let file = io::read_attributes_for(&a.attrs, &g)?;
    if !file.has_outcome {
        return Err(Failure::Data(Error::InvalidInput(format!(
            "{} has no outcome column",
            a.attrs.display()
        ))));
    }
    let mut cfg = EstimationConfig {
        rng_seed: a.seed,
        mcmc_spacing: a.spacing,
        ..Default::default()
    };
    if let Some(k) = a.subphases {
        cfg.phase2_subphases = k;
    }
    if let Some(k) = a.phase3_samples {
        cfg.phase3_samples = k;
    }
    match (&a.waves, a.conditional) {
        (Some(path), true) => {
            let wave_of = io::read_waves(path)?;
            if wave_of.len() != g.node_count() {
                return Err(Failure::Data(Error::InvalidInput(format!(
                    "{} lists {} nodes but the network has {}",
                    path.display(),
                    wave_of.len(),
                    g.node_count()
                ))));
            }
            let outer = wave_of.iter().copied().max().unwrap_or(0);
            cfg.free_nodes = Some((0..wave_of.len()).filter(|&i| wave_of[i] < outer).collect());
        }
        (Some(_), false) => return Err(Failure::Usage("--waves is only used with --conditional".into())),
        _ => {}
    }
    let r = estimate(&g, &file.table, &cfg)?;
    let text = format_result(&r);
    match &a.output {
        Some(path) => io::write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if a.strict && !r.converged {
        return Err(Failure::NotConverged);
    }
    Ok(())
}

/// One row per effect of an estimation result.
fn format_result(r: &EstimationResult) -> String {
    let mut out = String::from("effect,estimate,std_error,t_ratio,significant,converged\n");
    for e in Effect::ALL {
        let k = e.index();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.name(),
            r.theta_hat.0[k],
            r.std_errors.0[k],
            r.t_ratios.0[k],
            r.significant[k] as u8,
            r.converged as u8
        );
    }
    out
}

fn experiment(a: ExperimentCmd, grid: bool) -> CmdResult {
    let mut cfg: ExperimentConfig = io::read_experiment_config(&a.config)?;
    if let Some(s) = a.seed {
        cfg.rng_seed = s;
    }
    let cells = cfg.sampling.cells();
    if !grid && cells.len() != 1 {
        return Err(Failure::Usage(format!(
            "the sampling scheme has {} cells; use `sweep` for grids",
            cells.len()
        )));
    }
    let exp = Experiment::prepare(&cfg)?;
    let mut summaries = Vec::new();
    let mut failed = Vec::new();
    for cell in cells {
        eprintln!("cell {cell}");
        match exp.run_cell(cell) {
            Ok(s) => summaries.push(s),
            Err(e) => {
                eprintln!("cell {cell} failed: {e}");
                failed.push(cell);
            }
        }
    }

    std::fs::create_dir_all(&a.out_dir).map_err(|e| io_error(&a.out_dir, e))?;
    let summary = a.out_dir.join("summary.csv");
    let replicates = a.out_dir.join("replicates.csv");
    io::write_atomic(&summary, io::format_summary_csv(&summaries).as_bytes())?;
    io::write_atomic(&replicates, io::format_replicates_csv(&summaries).as_bytes())?;
    let mut manifest = io::RunManifest::new(&cfg, cfg.rng_seed)?;
    manifest.outcome_hash = Some(exp.outcome_hash.clone());
    manifest.add(&summary)?;
    manifest.add(&replicates)?;
    manifest.write(&a.out_dir.join("manifest.json"))?;

    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Data(Error::InvalidInput(format!("{} cell(s) failed", failed.len()))))
    }
}

fn stats(a: StatsCmd) -> CmdResult {
    let g = a.network.load()?;
    let s = g.stats()?;
    let mut header = String::from("nodes,edges,components,mean_degree,max_degree,density,clustering");
    let mut row = format!(
        "{},{},{},{},{},{},{}",
        s.n,
        g.edge_count(),
        s.component_count,
        s.mean_degree,
        s.max_degree,
        s.density,
        s.global_clustering
    );
    if let Some(path) = &a.attrs {
        let file = io::read_attributes_for(path, &g)?;
        if !file.has_outcome {
            return Err(Failure::Data(Error::InvalidInput(format!(
                "{} has no outcome column",
                path.display()
            ))));
        }
        header.push_str(",outcome_percent");
        let _ = write!(row, ",{}", 100.0 * file.table.positive_count() as f64 / s.n as f64);
    }
    println!("{header}\n{row}");
    Ok(())
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}
