use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use commlt::centrality::{self, CentralityParams, Measure, VitalityMode};
use commlt::community;
use commlt::diffusion::{self, ThresholdSpec};
use commlt::graph;
use commlt::harness::{self, config, ExperimentConfig};
use commlt::voting;
use commlt::Result;

#[derive(Parser)]
#[command(name = "commlt", version, about = "Community-aware centrality under linear threshold diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list, one `u v` pair per line.
    graph: PathBuf,
}

#[derive(Args)]
struct PartitionArgs {
    /// Partition file with `label community` lines.
    #[arg(required_unless_present = "detect")]
    partition: Option<PathBuf>,
    /// Detect communities by label propagation instead of reading a partition.
    #[arg(long, conflicts_with = "partition")]
    detect: bool,
    /// Seed for label propagation.
    #[arg(long, default_value_t = 0)]
    lpa_seed: u64,
    /// Skip partition lines naming nodes outside the largest component.
    #[arg(long)]
    ignore_unknown: bool,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    measure: Measure,
    /// Bridge weight of Comm centrality.
    #[arg(long = "R", default_value_t = 1.0)]
    r: f64,
    /// Intra/inter mixing weight of k-shell with community.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Keep the sign of modularity vitality instead of its magnitude.
    #[arg(long)]
    signed_vitality: bool,
}

impl MeasureArgs {
    fn params(&self) -> CentralityParams {
        CentralityParams {
            r: self.r,
            delta: self.delta,
            vitality: if self.signed_vitality {
                VitalityMode::Signed
            } else {
                VitalityMode::Absolute
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Descriptive statistics of the largest connected component.
    Stats {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Label-propagation communities of the largest connected component.
    Communities {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scores and ranks for one centrality measure.
    Centrality {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Seeds the top-ranked nodes of a measure and runs LT diffusion.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Shared node threshold.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        theta: Option<f64>,
        /// Draw thresholds uniformly from [0, 1) for every run.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = config::DEFAULT_MASTER_SEED)]
        seed: u64,
        /// Fraction of nodes seeded.
        #[arg(long)]
        fraction: f64,
        #[arg(long, default_value_t = 50)]
        runs: usize,
    },
    /// Runs a full experiment described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the output directory of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recomputes Schulze rankings from sweep CSVs under a directory.
    Rank {
        #[arg(long)]
        from: PathBuf,
        /// Also write elections/ and consensus/ CSVs here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn network_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "network".to_owned(), |s| s.to_string_lossy().into_owned())
}

fn prepare(graph: &GraphArgs, part: &PartitionArgs) -> Result<harness::PreparedNetwork> {
    let cfg = ExperimentConfig {
        fallback: if part.detect {
            config::Fallback::LabelPropagation
        } else {
            config::Fallback::None
        },
        lpa_seed: part.lpa_seed,
        ignore_unknown_labels: part.ignore_unknown,
        ..Default::default()
    };
    let spec = config::NetworkSpec {
        name: network_name(&graph.graph),
        edges: graph.graph.clone(),
        partition: part.partition.clone(),
        expected: None,
    };
    harness::prepare_network(&spec, &cfg)
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Stats { graph } => {
            let (raw, lcc) = harness::load_lcc(&graph.graph)?;
            let stats = graph::network_stats(&lcc)?;
            let name = network_name(&graph.graph);
            harness::write_stats_csv(&mut out, &[(&name, &stats, raw.n_nodes(), raw.n_edges())])?;
        }
        Command::Communities { graph, seed } => {
            let (_, lcc) = harness::load_lcc(&graph.graph)?;
            let p = community::detect_label_propagation(&lcc, seed);
            info!(
                "{} communities, modularity {}",
                p.n_communities(),
                community::modularity(&lcc, &p)?
            );
            p.write(lcc.labels(), &mut out)?;
        }
        Command::Centrality {
            graph,
            partition,
            measure,
        } => {
            let net = prepare(&graph, &partition)?;
            let (g, p) = (&net.graph, &net.partition);
            let census = community::link_census(g, p)?;
            let scores = centrality::compute(measure.measure, g, p, &census, &measure.params())?;
            let ranking = centrality::rank(&scores);
            centrality::write_scores_csv(&mut out, g, &scores, &ranking, p.fingerprint())?;
        }
        Command::Simulate {
            graph,
            partition,
            measure,
            theta,
            random,
            seed,
            fraction,
            runs,
        } => {
            let net = prepare(&graph, &partition)?;
            let (g, p) = (&net.graph, &net.partition);
            let census = community::link_census(g, p)?;
            let scores = centrality::compute(measure.measure, g, p, &census, &measure.params())?;
            let ranking = centrality::rank(&scores);
            let spec = match (theta, random) {
                (_, true) => ThresholdSpec::Random { master_seed: seed },
                (Some(t), false) => ThresholdSpec::fixed(t)?,
                (None, false) => unreachable!("clap requires --theta or --random"),
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(harness::workers_from_env())
                .build()
                .map_err(|e| commlt::Error::Parameter(e.to_string()))?;
            let table =
                pool.install(|| diffusion::lt_sweep(g, &net.name, &ranking, &[fraction], spec, runs))?;
            diffusion::write_sweep_csv(&mut out, &[table])?;
        }
        Command::Sweep { config, out: dir } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(dir) = dir {
                cfg.output = dir;
            }
            let workers = harness::workers_from_env();
            info!("running with {workers} worker(s)");
            let result = harness::run_experiment(&cfg, workers)?;
            let names: Vec<&str> = cfg.measures.iter().map(|m| m.id()).collect();
            for (tag, e) in &result.elections.consensus {
                let order: Vec<&str> = e.order.iter().map(|&c| names[c]).collect();
                writeln!(out, "{tag}: {}{}", order.join(" > "), if e.tied { " (tie)" } else { "" })?;
            }
            writeln!(out, "results written to {}", cfg.output.display())?;
        }
        Command::Rank { from, out: dir } => {
            let set = harness::rank_from_dir(&from)?;
            voting::write_elections_csv(&mut out, &set.candidates, &set.per_network)?;
            writeln!(out)?;
            voting::write_consensus_csv(&mut out, &set.candidates, &set.consensus)?;
            if let Some(dir) = dir {
                fs::create_dir_all(&dir)?;
                voting::write_elections_csv(File::create(dir.join("elections.csv"))?, &set.candidates, &set.per_network)?;
                voting::write_consensus_csv(File::create(dir.join("consensus.csv"))?, &set.candidates, &set.consensus)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
