//! `hideseek`: generate networks, plan and simulate infections, and analyze
//! the source/administrator game from the command line.
//!
//! Exit status is 0 on success, 2 for invalid input and 1 for runtime
//! failures such as I/O errors.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hideseek::experiments::{self, write_csv, ExperimentSpec, NetworkFamily};
use hideseek::game::{best_response_admin, best_response_source, find_nash, GameConfig, Snapshot, SourceMenu};
use hideseek::graph::{
    bfs_spanning_tree, distance_to_set, generate_random_tree, generate_regular_tree, generate_scale_free,
    jordan_centers, load_edge_list, write_edge_list,
};
use hideseek::spread::{lambda_max_strategy, read_strategy_csv, write_outcome_csv, write_strategy_csv};
use hideseek::{binary_search_tobs, build_dis, rational, simulate, Error, Network, NodeId, RateBounds, Rational};

#[derive(Parser)]
#[command(name = "hideseek", version, about = "Infection source hiding and Jordan-center search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network and write it as an edge list.
    Gen {
        #[command(flatten)]
        net: NetworkArgs,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Spread an infection and write per-node infection times.
    Simulate {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        spread: SpreadArgs,
        /// Horizon `t`.
        #[arg(long)]
        t: String,
        /// Strategy CSV (`parent,child,rate_num,rate_den`); defaults to
        /// every edge at its bound.
        #[arg(long, value_name = "FILE")]
        rates: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Print the Jordan centers of an infected set.
    Jordan {
        #[command(flatten)]
        net: NetworkArgs,
        /// Whitespace-separated infected node ids; defaults to every node.
        #[arg(long, value_name = "FILE")]
        infected: Option<PathBuf>,
        /// Also print the distance from this node to the nearest center.
        #[arg(long)]
        source: Option<u64>,
    },
    /// Build the dominant strategy for a safety margin.
    Dis {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        spread: SpreadArgs,
        #[arg(long)]
        t: String,
        #[arg(long)]
        ds: usize,
        /// Write the strategy CSV here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Smallest observation time at which a margin-`ds` infection reaches
    /// `nobs` nodes.
    Tobs {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        spread: SpreadArgs,
        #[arg(long)]
        ds: usize,
        #[arg(long)]
        nobs: usize,
        /// Print a decimal approximation instead of `num/den`.
        #[arg(long)]
        decimal: bool,
    },
    /// Print a player's best responses.
    BestResponse {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        spread: SpreadArgs,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum)]
        player: Player,
        /// Administrator radius the source responds to.
        #[arg(long, required_if_eq("player", "source"))]
        da: Option<usize>,
        /// Safety margin the administrator responds to.
        #[arg(long, required_if_eq("player", "admin"))]
        ds: Option<usize>,
    },
    /// Find the pure equilibria on the strategy grid.
    Nash {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        spread: SpreadArgs,
        #[command(flatten)]
        game: GameArgs,
        /// Write every grid cell as CSV here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run a seeded Monte Carlo study and write its CSVs.
    Experiment {
        #[arg(value_enum)]
        study: Study,
        #[command(flatten)]
        net: NetworkArgs,
        /// Observation time in hops.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        runs: Option<usize>,
        /// Observed percentages, comma separated.
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        /// Worker threads (0 picks the core count).
        #[arg(long)]
        workers: Option<usize>,
        /// Flat `key = value` experiment settings; flags win.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tree,
    Ba,
    Regular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Player {
    Source,
    Admin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Study {
    DisVsAd,
    Source,
    Admin,
    Incomplete,
    All,
}

#[derive(Args)]
struct NetworkArgs {
    /// Edge list file (`u v` per line).
    #[arg(long, value_name = "FILE", conflicts_with = "gen")]
    network: Option<PathBuf>,
    /// Generate the network instead of loading it.
    #[arg(long, value_enum)]
    gen: Option<GenKind>,
    /// Node count for generated trees and scale-free graphs.
    #[arg(long, default_value_t = 5000)]
    n: usize,
    /// Links per new node in scale-free graphs.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Allowed node degrees in random trees.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    degrees: Vec<usize>,
    /// Degree of regular trees.
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Depth of regular trees.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Seed for every random choice.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SpreadArgs {
    /// Infection source; defaults to the first node.
    #[arg(long)]
    source: Option<u64>,
    /// Per-depth rate bounds, comma separated (`1,1/2`); the last value
    /// repeats.
    #[arg(long, default_value = "1")]
    bounds: String,
}

#[derive(Args)]
struct GameArgs {
    /// Horizon `t` at which the administrator observes.
    #[arg(long)]
    t: String,
    /// Flat `key = value` gains and costs.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

type CliResult<T> = Result<T, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

impl NetworkArgs {
    fn seed(&self) -> CliResult<u64> {
        self.seed.ok_or_else(|| invalid("this command is randomized; pass --seed"))
    }

    fn load(&self) -> CliResult<Network> {
        match (&self.network, self.gen) {
            (Some(path), _) => Ok(load_edge_list(BufReader::new(File::open(path)?))?.network),
            (None, Some(GenKind::Tree)) => generate_random_tree(self.n, &self.degrees, self.seed()?),
            (None, Some(GenKind::Ba)) => generate_scale_free(self.n, self.m, self.seed()?),
            (None, Some(GenKind::Regular)) => generate_regular_tree(self.r, self.depth),
            (None, None) => Err(invalid("pass --network FILE or --gen KIND")),
        }
    }
}

/// Dense id of the node labeled `label`.
fn resolve(net: &Network, label: u64) -> CliResult<NodeId> {
    let found = match net.labels() {
        Some(labels) => labels.iter().position(|&l| l == label),
        None => usize::try_from(label).ok().filter(|&v| v < net.node_count()),
    };
    found.ok_or_else(|| invalid(format!("node {label} is not in the network")))
}

fn source_of(net: &Network, spread: &SpreadArgs) -> CliResult<NodeId> {
    match spread.source {
        Some(label) => resolve(net, label),
        None => Ok(0),
    }
}

fn bounds_of(spread: &SpreadArgs) -> CliResult<RateBounds> {
    RateBounds::parse(&spread.bounds)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn game_config(path: Option<&PathBuf>) -> CliResult<GameConfig> {
    match path {
        Some(p) => GameConfig::parse(&fs::read_to_string(p)?),
        None => Ok(GameConfig::default()),
    }
}

fn labels(net: &Network, nodes: &[NodeId]) -> String {
    nodes.iter().map(|&v| net.label(v).to_string()).collect::<Vec<_>>().join(" ")
}

fn run(command: Command) -> CliResult<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Gen { net, out: path } => {
            if net.gen.is_none() {
                return Err(invalid("gen needs --gen KIND"));
            }
            let network = net.load()?;
            let mut w = create(&path)?;
            write_edge_list(&network, &mut w)?;
            w.flush()?;
            writeln!(out, "nodes {} edges {}", network.node_count(), network.edge_count())?;
        }
        Command::Simulate { net, spread, t, rates, out: path } => {
            let network = net.load()?;
            let tree = bfs_spanning_tree(&network, source_of(&network, &spread)?)?;
            let bounds = bounds_of(&spread)?;
            let strategy = match rates {
                Some(p) => read_strategy_csv(tree, BufReader::new(File::open(p)?))?,
                None => lambda_max_strategy(&tree, &bounds),
            };
            let outcome = simulate(&strategy, &rational::parse(&t)?, &bounds)?;
            let (centers, margin) = outcome.measure_on(&network)?;
            let mut w = create(&path)?;
            write_outcome_csv(&outcome, &mut w)?;
            w.flush()?;
            writeln!(out, "infected {}", outcome.size())?;
            writeln!(out, "centers {}", labels(&network, &centers))?;
            writeln!(out, "margin {margin}")?;
        }
        Command::Jordan { net, infected, source } => {
            let network = net.load()?;
            let set: Vec<NodeId> = match infected {
                Some(p) => fs::read_to_string(p)?
                    .split_whitespace()
                    .map(|tok| {
                        let label = tok.parse().map_err(|_| invalid(format!("`{tok}` is not a node id")))?;
                        resolve(&network, label)
                    })
                    .collect::<CliResult<_>>()?,
                None => (0..network.node_count()).collect(),
            };
            let centers = jordan_centers(&network, &set)?;
            writeln!(out, "{}", labels(&network, &centers))?;
            if let Some(label) = source {
                let margin = distance_to_set(&network, resolve(&network, label)?, &centers)?;
                writeln!(out, "margin {margin}")?;
            }
        }
        Command::Dis { net, spread, t, ds, out: path } => {
            let network = net.load()?;
            let tree = bfs_spanning_tree(&network, source_of(&network, &spread)?)?;
            let plan = build_dis(&tree, &bounds_of(&spread)?, &rational::parse(&t)?, ds)?;
            if let Some(path) = path {
                let mut w = create(&path)?;
                write_strategy_csv(&plan.strategy, &mut w)?;
                w.flush()?;
            }
            writeln!(out, "d_t,d_s,t,infected_count,path_weight")?;
            writeln!(out, "{}", plan.summary())?;
        }
        Command::Tobs { net, spread, ds, nobs, decimal } => {
            let network = net.load()?;
            let tree = bfs_spanning_tree(&network, source_of(&network, &spread)?)?;
            let (t_obs, _) = binary_search_tobs(&tree, &bounds_of(&spread)?, ds, nobs)?;
            writeln!(out, "{}", show(&t_obs, decimal))?;
        }
        Command::BestResponse { net, spread, game, player, da, ds } => {
            let seed = net.seed()?;
            let network = net.load()?;
            let source = source_of(&network, &spread)?;
            let tree = bfs_spanning_tree(&network, source)?;
            let bounds = bounds_of(&spread)?;
            let t = rational::parse(&game.t)?;
            let cfg = game_config(game.config.as_ref())?;
            let best = match player {
                Player::Source => {
                    let menu = SourceMenu::build(&tree, &network, &bounds, &t, seed)?;
                    let d_a = da.expect("clap enforces --da");
                    best_response_source(&cfg, d_a, &menu)
                }
                Player::Admin => {
                    let plan = build_dis(&tree, &bounds, &t, ds.expect("clap enforces --ds"))?;
                    best_response_admin(&cfg, &Snapshot::measure(&network, plan.infected(), source, seed)?)
                }
            };
            writeln!(out, "{}", best.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))?;
        }
        Command::Nash { net, spread, game, out: path } => {
            let seed = net.seed()?;
            let network = net.load()?;
            let tree = bfs_spanning_tree(&network, source_of(&network, &spread)?)?;
            let t = rational::parse(&game.t)?;
            let menu = SourceMenu::build(&tree, &network, &bounds_of(&spread)?, &t, seed)?;
            let report = find_nash(&game_config(game.config.as_ref())?, &menu)?;
            let c = &report.conditions;
            let pairs = |v: &[(usize, usize)]| {
                v.iter().map(|(a, s)| format!("({a},{s})")).collect::<Vec<_>>().join(" ")
            };
            writeln!(out, "size_gain {}", c.size_gain)?;
            writeln!(out, "catch_cost {}", c.catch_cost)?;
            writeln!(out, "admin_gain {}", c.admin_gain)?;
            writeln!(out, "admin_extra_cost {}", c.admin_extra_cost)?;
            writeln!(out, "predicted {}", pairs(&report.predicted))?;
            writeln!(out, "deviation {}", pairs(&report.deviation))?;
            writeln!(out, "sum_argmax {}", pairs(&report.sum_argmax))?;
            if let Some(path) = path {
                let mut w = create(&path)?;
                report.write_csv(&mut w)?;
                w.flush()?;
            }
        }
        Command::Experiment { study, net, t, runs, alpha, workers, config, out: dir } => {
            let spec = experiment_spec(&net, t, runs, alpha, workers, config.as_ref())?;
            fs::create_dir_all(&dir)?;
            let wants = |s: Study| study == s || study == Study::All;
            let write = |name: &str, f: &dyn Fn(&mut BufWriter<File>) -> CliResult<()>| -> CliResult<()> {
                let mut w = create(&dir.join(name))?;
                f(&mut w)?;
                w.flush()?;
                Ok(())
            };
            if wants(Study::DisVsAd) {
                let r = experiments::run_dis_vs_ad(&spec)?;
                write("dis_vs_ad.csv", &|w| write_csv(&r.records, w))?;
                write("dis_vs_ad_summary.csv", &|w| write_csv(&r.summary, w))?;
            }
            if wants(Study::Source) {
                let r = experiments::run_best_response_source(&spec)?;
                write("best_response_source.csv", &|w| write_csv(&r.records, w))?;
                write("best_response_source_summary.csv", &|w| write_csv(&r.summary, w))?;
            }
            if wants(Study::Admin) {
                let r = experiments::run_best_response_admin(&spec)?;
                write("best_response_admin.csv", &|w| write_csv(&r.records, w))?;
                write("best_response_admin_summary.csv", &|w| write_csv(&r.summary, w))?;
            }
            if wants(Study::Incomplete) {
                let r = experiments::run_incomplete_obs(&spec)?;
                write("incomplete_obs.csv", &|w| write_csv(&r.records, w))?;
                write("incomplete_obs_cells.csv", &|w| write_csv(&r.cells, w))?;
            }
            writeln!(out, "wrote {}", dir.display())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn show(r: &Rational, decimal: bool) -> String {
    if decimal {
        rational::to_f64(r).to_string()
    } else {
        rational::format(r)
    }
}

fn experiment_spec(
    net: &NetworkArgs,
    t: Option<usize>,
    runs: Option<usize>,
    alpha: Option<Vec<f64>>,
    workers: Option<usize>,
    config: Option<&PathBuf>,
) -> CliResult<ExperimentSpec> {
    let seed = net.seed()?;
    let mut spec = match (&net.network, net.gen) {
        (Some(path), _) => {
            let network = load_edge_list(BufReader::new(File::open(path)?))?.network;
            let name = path.file_stem().map_or("network".into(), |s| s.to_string_lossy().into_owned());
            let t_obs = t.ok_or_else(|| invalid("loaded networks need --t"))?;
            ExperimentSpec {
                family: NetworkFamily::Fixed { name, network: Arc::new(network) },
                t_obs,
                ..ExperimentSpec::random_trees(1000, seed)
            }
        }
        (None, Some(GenKind::Tree) | None) => ExperimentSpec {
            family: NetworkFamily::RandomTree { n: net.n, degrees: net.degrees.clone() },
            ..ExperimentSpec::random_trees(1000, seed)
        },
        (None, Some(GenKind::Ba)) => ExperimentSpec {
            family: NetworkFamily::ScaleFree { n: net.n, m: net.m },
            ..ExperimentSpec::scale_free(net.n, 1000, seed)
        },
        (None, Some(GenKind::Regular)) => ExperimentSpec {
            family: NetworkFamily::RegularTree { r: net.r, depth: net.depth },
            t_obs: net.depth,
            ..ExperimentSpec::random_trees(1000, seed)
        },
    };
    if let Some(path) = config {
        spec.apply_config(&fs::read_to_string(path)?)?;
    }
    spec.base_seed = seed;
    if let Some(t) = t {
        spec.t_obs = t;
    }
    if let Some(runs) = runs {
        spec.runs = runs;
    }
    if let Some(alpha) = alpha {
        spec.alphas = alpha;
    }
    if let Some(workers) = workers {
        spec.workers = workers;
    }
    Ok(spec)
}
