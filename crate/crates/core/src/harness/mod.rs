//! End-to-end experiment runner.
//!
//! For every configured network: load, keep the largest connected
//! component, attach a partition, compute descriptive statistics and all
//! requested centralities, then sweep LT diffusion over the seed-fraction
//! grid for every threshold spec. Sweep results feed the Schulze elections.
//! Everything lands in one output directory whose contents are a pure
//! function of the configuration.

pub mod config;
pub mod svg;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::centrality::{self, CentralityScores, Measure, Ranking};
use crate::community::{self, Partition, PartitionOptions};
use crate::diffusion::{self, SweepRow, SweepTable, ThresholdSpec};
use crate::error::{Error, Result};
use crate::graph::{self, Graph, LoadOptions, NetworkStats};
use crate::voting::{self, Ballot, Election, Voter};

pub use config::{fraction_grid, ExperimentConfig, Fallback, NetworkSpec};

/// Relative tolerance when checking a network against its expected size.
pub const SIZE_TOLERANCE: f64 = 0.02;

/// Worker count from `COMMLT_WORKERS`, else the available parallelism.
pub fn workers_from_env() -> usize {
    std::env::var("COMMLT_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommunitySource {
    File,
    LabelPropagation,
}

/// A network reduced to its largest component, with the partition used
/// for every community-aware measure.
#[derive(Debug, Clone)]
pub struct PreparedNetwork {
    pub name: String,
    pub raw_nodes: usize,
    pub raw_edges: usize,
    pub graph: Graph,
    pub partition: Partition,
    pub community_source: CommunitySource,
}

/// Loads an edge list and keeps the largest connected component.
pub fn load_lcc(path: &Path) -> Result<(Graph, Graph)> {
    let file = File::open(path).map_err(|_| Error::MissingFile(path.to_owned()))?;
    let raw = graph::load_edge_list(BufReader::new(file), &LoadOptions::default())?;
    let lcc = graph::largest_connected_component(&raw)?;
    Ok((raw, lcc))
}

/// Reads a partition of the full network and restricts it to `lcc`.
pub fn load_partition_for(raw: &Graph, lcc: &Graph, path: &Path, options: &PartitionOptions) -> Result<Partition> {
    let file = File::open(path).map_err(|_| Error::MissingFile(path.to_owned()))?;
    let full = community::load_partition(BufReader::new(file), raw.labels(), options)?;
    let restricted: Vec<usize> = (0..lcc.n_nodes())
        .map(|v| {
            let raw_id = raw.labels().get(lcc.label(v)).expect("LCC labels come from the raw graph");
            full.community(raw_id)
        })
        .collect();
    Ok(Partition::from_assignment(&restricted))
}

pub fn prepare_network(spec: &NetworkSpec, cfg: &ExperimentConfig) -> Result<PreparedNetwork> {
    let (raw, lcc) = load_lcc(&spec.edges)?;
    if lcc.n_nodes() < raw.n_nodes() {
        info!(
            "{}: kept largest component with {} of {} nodes",
            spec.name,
            lcc.n_nodes(),
            raw.n_nodes()
        );
    }
    let (partition, community_source) = match (&spec.partition, cfg.fallback) {
        (Some(path), _) => {
            let options = PartitionOptions {
                ignore_unknown_labels: cfg.ignore_unknown_labels,
            };
            (load_partition_for(&raw, &lcc, path, &options)?, CommunitySource::File)
        }
        (None, Fallback::LabelPropagation) => (
            community::detect_label_propagation(&lcc, cfg.lpa_seed),
            CommunitySource::LabelPropagation,
        ),
        (None, Fallback::None) => {
            return Err(Error::Parameter(format!(
                "network `{}` has no partition file and fallback is none",
                spec.name
            )))
        }
    };
    Ok(PreparedNetwork {
        name: spec.name.clone(),
        raw_nodes: raw.n_nodes(),
        raw_edges: raw.n_edges(),
        graph: lcc,
        partition,
        community_source,
    })
}

/// Mismatch between a network and its expected `(N, |E|)`, if any.
pub fn size_warning(name: &str, actual: (usize, usize), expected: (usize, usize)) -> Option<String> {
    let off = |a: usize, e: usize| (a as f64 - e as f64).abs() > SIZE_TOLERANCE * e as f64;
    (off(actual.0, expected.0) || off(actual.1, expected.1)).then(|| {
        format!(
            "{name}: dataset version mismatch, largest component has N={} |E|={} but N={} |E|={} was expected",
            actual.0, actual.1, expected.0, expected.1
        )
    })
}

#[derive(Debug, Clone)]
pub struct NetworkResult {
    pub network: PreparedNetwork,
    pub stats: NetworkStats,
    pub modularity: f64,
    pub scores: Vec<CentralityScores>,
    pub rankings: Vec<Ranking>,
    /// One table per `(threshold, measure)`, thresholds outermost.
    pub sweeps: Vec<SweepTable>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ElectionSet {
    pub candidates: Vec<Measure>,
    pub ballots: Vec<(Voter, Ballot)>,
    /// `(threshold tag, network, election)`.
    pub per_network: Vec<(String, String, Election)>,
    /// `(threshold tag, election)` over every network's ballots.
    pub consensus: Vec<(String, Election)>,
}

impl ElectionSet {
    /// Per-network ranks of each candidate under one threshold tag.
    pub fn rank_samples(&self, tag: &str) -> Vec<Vec<usize>> {
        (0..self.candidates.len())
            .map(|c| {
                self.per_network
                    .iter()
                    .filter(|(t, _, _)| t == tag)
                    .map(|(_, _, e)| e.ranks[c])
                    .collect()
            })
            .collect()
    }

    pub fn tags(&self) -> Vec<String> {
        self.consensus.iter().map(|(t, _)| t.clone()).collect()
    }
}

/// Ballots, per-network elections and the pooled consensus per threshold.
pub fn hold_elections(tables: &[SweepTable], candidates: &[Measure]) -> Result<ElectionSet> {
    let ballots = voting::build_ballots(tables, candidates)?;
    let mut per_network = Vec::new();
    let mut consensus = Vec::new();
    let mut start = 0;
    while start < ballots.len() {
        let tag = &ballots[start].0.threshold;
        let end = start + ballots[start..].iter().take_while(|(v, _)| &v.threshold == tag).count();
        let group: Vec<Ballot> = ballots[start..end].iter().map(|(_, b)| b.clone()).collect();
        let mut i = start;
        while i < end {
            let net = &ballots[i].0.network;
            let j = i + ballots[i..end].iter().take_while(|(v, _)| &v.network == net).count();
            let own: Vec<Ballot> = ballots[i..j].iter().map(|(_, b)| b.clone()).collect();
            per_network.push((tag.clone(), net.clone(), voting::elect(&own)?));
            i = j;
        }
        consensus.push((tag.clone(), voting::elect(&group)?));
        start = end;
    }
    Ok(ElectionSet {
        candidates: candidates.to_vec(),
        ballots,
        per_network,
        consensus,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub networks: Vec<NetworkResult>,
    pub elections: ElectionSet,
    pub fractions: Vec<f64>,
}

impl ExperimentOutput {
    pub fn sweep_tables(&self) -> Vec<SweepTable> {
        self.networks.iter().flat_map(|n| n.sweeps.iter().cloned()).collect()
    }
}

fn in_cell<T>(cell: impl FnOnce() -> String, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Cell {
        cell: cell(),
        source: Box::new(e),
    })
}

fn check_inputs(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate()?;
    for spec in &cfg.networks {
        for path in std::iter::once(&spec.edges).chain(spec.partition.as_ref()) {
            if !path.is_file() {
                return Err(Error::MissingFile(path.clone()));
            }
        }
        if spec.partition.is_none() && cfg.fallback == Fallback::None {
            return Err(Error::Parameter(format!(
                "network `{}` has no partition file and fallback is none",
                spec.name
            )));
        }
    }
    Ok(())
}

fn analyse_network(spec: &NetworkSpec, cfg: &ExperimentConfig, fractions: &[f64]) -> Result<NetworkResult> {
    let name = spec.name.as_str();
    let network = in_cell(|| format!("{name}/load"), prepare_network(spec, cfg))?;
    let g = &network.graph;
    let p = &network.partition;
    let stats = in_cell(|| format!("{name}/stats"), graph::network_stats(g))?;
    let mut warnings = Vec::new();
    if let Some(expected) = spec.expected {
        if let Some(w) = size_warning(name, (g.n_nodes(), g.n_edges()), expected) {
            warn!("{w}");
            warnings.push(w);
        }
    }
    let modularity = in_cell(|| format!("{name}/modularity"), community::modularity(g, p))?;
    let census = in_cell(|| format!("{name}/census"), community::link_census(g, p))?;

    let scores: Vec<CentralityScores> = cfg
        .measures
        .par_iter()
        .map(|&m| {
            in_cell(
                || format!("{name}/{}", m.id()),
                centrality::compute(m, g, p, &census, &cfg.params),
            )
        })
        .collect::<Result<_>>()?;
    for s in &scores {
        if !s.flagged.is_empty() {
            let w = format!(
                "{name}: {} node(s) flagged by {} (removal leaves no edges)",
                s.flagged.len(),
                s.measure.id()
            );
            warn!("{w}");
            warnings.push(w);
        }
    }
    let rankings: Vec<Ranking> = scores.iter().map(centrality::rank).collect();

    let cells: Vec<(ThresholdSpec, &Ranking)> = cfg
        .thresholds
        .iter()
        .flat_map(|&t| rankings.iter().map(move |r| (t, r)))
        .collect();
    let sweeps: Vec<SweepTable> = cells
        .par_iter()
        .map(|&(spec, ranking)| {
            in_cell(
                || format!("{name}/{}/{}", ranking.measure.id(), spec.tag()),
                diffusion::lt_sweep(g, name, ranking, fractions, spec, cfg.runs),
            )
        })
        .collect::<Result<_>>()?;
    info!("{name}: {} sweeps done", sweeps.len());

    Ok(NetworkResult {
        network,
        stats,
        modularity,
        scores,
        rankings,
        sweeps,
        warnings,
    })
}

/// Runs the whole experiment on a pool of `workers` threads without
/// writing anything.
///
/// Every input file is checked before any computation starts. A failing
/// cell aborts the run with an [`Error::Cell`] naming it.
pub fn execute(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
    check_inputs(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    let fractions = cfg.fraction_grid();
    pool.install(|| {
        let networks = cfg
            .networks
            .iter()
            .map(|spec| analyse_network(spec, cfg, &fractions))
            .collect::<Result<Vec<_>>>()?;
        let tables: Vec<SweepTable> = networks.iter().flat_map(|n| n.sweeps.iter().cloned()).collect();
        let elections = hold_elections(&tables, &cfg.measures)?;
        Ok(ExperimentOutput {
            networks,
            elections,
            fractions,
        })
    })
}

/// [`execute`] followed by [`write_bundle`] into `cfg.output`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
    let out = execute(cfg, workers)?;
    write_bundle(cfg, &out, &cfg.output)?;
    Ok(out)
}

pub const STATS_HEADER: [&str; 10] = [
    "network",
    "n_nodes",
    "n_edges",
    "avg_degree",
    "avg_distance",
    "density",
    "transitivity",
    "assortativity",
    "raw_nodes",
    "raw_edges",
];

/// One row per network; assortativity is left empty when undefined.
pub fn write_stats_csv<W: Write>(out: W, rows: &[(&str, &NetworkStats, usize, usize)]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(STATS_HEADER)?;
    for (name, s, raw_n, raw_e) in rows {
        writer.write_record([
            name.to_string(),
            s.n_nodes.to_string(),
            s.n_edges.to_string(),
            s.avg_degree.to_string(),
            s.avg_distance.to_string(),
            s.density.to_string(),
            s.transitivity.to_string(),
            s.assortativity.map(|a| a.to_string()).unwrap_or_default(),
            raw_n.to_string(),
            raw_e.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Rows of `threshold,network,fraction_index,ballot`.
pub fn write_ballots_csv<W: Write>(out: W, set: &ElectionSet) -> Result<()> {
    let names: Vec<&str> = set.candidates.iter().map(|m| m.id()).collect();
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["threshold", "network", "fraction_index", "ballot"])?;
    for (voter, ballot) in &set.ballots {
        writer.write_record([
            voter.threshold.as_str(),
            voter.network.as_str(),
            &voter.fraction_index.to_string(),
            &ballot.render(&names),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

#[derive(Serialize)]
struct NetworkMeta<'a> {
    name: &'a str,
    edges: String,
    partition: Option<String>,
    community_source: CommunitySource,
    raw_nodes: usize,
    raw_edges: usize,
    lcc_nodes: usize,
    lcc_edges: usize,
    n_communities: usize,
    modularity: f64,
    partition_fingerprint: String,
    expected: Option<(usize, usize)>,
    warnings: &'a [String],
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    master_seed: u64,
    runs: usize,
    measures: Vec<&'static str>,
    thresholds: &'a [ThresholdSpec],
    params: &'a centrality::CentralityParams,
    fraction_grid: &'a [f64],
    include_zero: bool,
    seed_count_rounding: &'static str,
    fallback: Fallback,
    lpa_seed: u64,
    networks: Vec<NetworkMeta<'a>>,
}

/// Writes the result bundle:
///
/// ```text
/// metadata.json
/// stats.csv
/// ballots.csv
/// elections/<threshold>.csv
/// consensus/<threshold>.csv
/// plots/ranks_<threshold>.svg
/// networks/<name>/{stats.csv, labels.csv, partition.txt}
/// networks/<name>/scores_<MEASURE>.csv
/// networks/<name>/sweep_<threshold>.csv
/// networks/<name>/curves_<threshold>.svg
/// ```
pub fn write_bundle(cfg: &ExperimentConfig, out: &ExperimentOutput, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let stats_rows: Vec<_> = out
        .networks
        .iter()
        .map(|n| (n.network.name.as_str(), &n.stats, n.network.raw_nodes, n.network.raw_edges))
        .collect();
    write_stats_csv(create(&dir.join("stats.csv"))?, &stats_rows)?;

    for (n, row) in out.networks.iter().zip(&stats_rows) {
        let net_dir = dir.join("networks").join(&n.network.name);
        let g = &n.network.graph;
        write_stats_csv(create(&net_dir.join("stats.csv"))?, std::slice::from_ref(row))?;
        g.labels().write_csv(create(&net_dir.join("labels.csv"))?)?;
        n.network
            .partition
            .write(g.labels(), create(&net_dir.join("partition.txt"))?)?;
        let fingerprint = n.network.partition.fingerprint();
        for (s, r) in n.scores.iter().zip(&n.rankings) {
            let path = net_dir.join(format!("scores_{}.csv", s.measure.id()));
            centrality::write_scores_csv(create(&path)?, g, s, r, fingerprint)?;
        }
        for spec in &cfg.thresholds {
            let tables: Vec<SweepTable> = n.sweeps.iter().filter(|t| t.spec == *spec).cloned().collect();
            diffusion::write_sweep_csv(create(&net_dir.join(format!("sweep_{}.csv", spec.tag())))?, &tables)?;
            let title = format!("{} ({})", n.network.name, spec);
            let svg = svg::emit_curves(&title, &tables)?;
            fs::write(net_dir.join(format!("curves_{}.svg", spec.tag())), svg)?;
        }
    }

    let set = &out.elections;
    write_ballots_csv(create(&dir.join("ballots.csv"))?, set)?;
    for tag in set.tags() {
        let own: Vec<_> = set.per_network.iter().filter(|(t, _, _)| *t == tag).cloned().collect();
        voting::write_elections_csv(create(&dir.join("elections").join(format!("{tag}.csv")))?, &set.candidates, &own)?;
        let pooled: Vec<_> = set.consensus.iter().filter(|(t, _)| *t == tag).cloned().collect();
        voting::write_consensus_csv(create(&dir.join("consensus").join(format!("{tag}.csv")))?, &set.candidates, &pooled)?;
        let svg = svg::emit_rank_boxes(&tag, &set.candidates, &set.rank_samples(&tag))?;
        let path = dir.join("plots").join(format!("ranks_{tag}.svg"));
        fs::create_dir_all(path.parent().unwrap())?;
        fs::write(path, svg)?;
    }

    let metadata = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        master_seed: cfg.master_seed,
        runs: cfg.runs,
        measures: cfg.measures.iter().map(|m| m.id()).collect(),
        thresholds: &cfg.thresholds,
        params: &cfg.params,
        fraction_grid: &out.fractions,
        include_zero: cfg.include_zero,
        seed_count_rounding: "round half up",
        fallback: cfg.fallback,
        lpa_seed: cfg.lpa_seed,
        networks: out
            .networks
            .iter()
            .zip(&cfg.networks)
            .map(|(n, spec)| NetworkMeta {
                name: &n.network.name,
                edges: spec.edges.display().to_string(),
                partition: spec.partition.as_ref().map(|p| p.display().to_string()),
                community_source: n.network.community_source,
                raw_nodes: n.network.raw_nodes,
                raw_edges: n.network.raw_edges,
                lcc_nodes: n.stats.n_nodes,
                lcc_edges: n.stats.n_edges,
                n_communities: n.network.partition.n_communities(),
                modularity: n.modularity,
                partition_fingerprint: format!("{:016x}", n.network.partition.fingerprint()),
                expected: spec.expected,
                warnings: &n.warnings,
            })
            .collect(),
    };
    let mut meta = create(&dir.join("metadata.json"))?;
    serde_json::to_writer_pretty(&mut meta, &metadata)?;
    meta.write_all(b"\n")?;
    meta.flush()?;
    Ok(())
}

/// Parses sweep CSVs written by [`diffusion::write_sweep_csv`].
///
/// Consecutive rows sharing network, measure and threshold form one table.
pub fn read_sweep_csv<R: Read>(source: R) -> Result<Vec<SweepTable>> {
    let mut reader = csv::Reader::from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(diffusion::SWEEP_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {}", diffusion::SWEEP_HEADER.join(",")),
        });
    }
    let mut tables: Vec<SweepTable> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let bad = |what: &str| Error::Parse {
            line,
            message: format!("bad {what}"),
        };
        let num = |idx: usize, what: &str| -> Result<f64> { record[idx].parse().map_err(|_| bad(what)) };
        let int = |idx: usize, what: &str| -> Result<usize> { record[idx].parse().map_err(|_| bad(what)) };
        let measure: Measure = record[1].parse().map_err(|_| bad("measure"))?;
        let spec = match &record[2] {
            "fixed" => ThresholdSpec::fixed(num(3, "threshold")?).map_err(|_| bad("threshold"))?,
            "random" => ThresholdSpec::Random {
                master_seed: record[3].parse().map_err(|_| bad("seed"))?,
            },
            _ => return Err(bad("threshold kind")),
        };
        let row = SweepRow {
            fraction: num(4, "fraction")?,
            mean_activation: num(5, "mean_activation")?,
            std_activation: num(6, "std_activation")?,
            seed_count: int(7, "seed_count")?,
            runs: int(8, "runs")?,
        };
        match tables.last_mut() {
            Some(t) if t.network == record[0] && t.measure == measure && t.spec == spec => t.rows.push(row),
            _ => tables.push(SweepTable {
                network: record[0].to_owned(),
                measure,
                spec,
                rows: vec![row],
            }),
        }
    }
    Ok(tables)
}

/// All `sweep_*.csv` files below `dir`, in path order.
pub fn find_sweep_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::MissingFile(dir.to_owned()));
    }
    let mut found = Vec::new();
    let mut stack = vec![dir.to_owned()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path
                .file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("sweep_") && n.ends_with(".csv"))
            {
                found.push(path);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Re-runs the elections from sweep CSVs found under `dir`. Candidates are
/// the measures present, in canonical order.
pub fn rank_from_dir(dir: &Path) -> Result<ElectionSet> {
    let mut tables = Vec::new();
    for path in find_sweep_files(dir)? {
        tables.extend(read_sweep_csv(File::open(&path)?)?);
    }
    if tables.is_empty() {
        return Err(Error::EmptyTable(format!("no sweep files under {}", dir.display())));
    }
    let present: BTreeMap<Measure, ()> = tables.iter().map(|t| (t.measure, ())).collect();
    let candidates: Vec<Measure> = present.into_keys().collect();
    hold_elections(&tables, &candidates)
}
