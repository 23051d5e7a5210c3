//! Linear Threshold diffusion seeded from the top of a centrality ranking.
//!
//! Updates are synchronous: in round `t` every inactive node compares its
//! active-neighbor share, counted against the states at the end of round
//! `t − 1`, with its threshold. Final active sets coincide with any
//! asynchronous schedule because the dynamics are monotone; round counts
//! are specific to the synchronous schedule.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::centrality::{Measure, Ranking};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::hash;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ThresholdSpec {
    /// Every node shares threshold `theta`.
    Fixed { theta: f64 },
    /// Per-node thresholds drawn uniformly from `[0, 1)` for every run.
    Random { master_seed: u64 },
}

impl ThresholdSpec {
    pub fn fixed(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Parameter(format!("threshold {theta} outside [0, 1]")));
        }
        Ok(Self::Fixed { theta })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ThresholdSpec::Fixed { .. } => "fixed",
            ThresholdSpec::Random { .. } => "random",
        }
    }

    /// The threshold for fixed specs, the master seed for random ones.
    pub fn value_string(&self) -> String {
        match self {
            ThresholdSpec::Fixed { theta } => theta.to_string(),
            ThresholdSpec::Random { master_seed } => master_seed.to_string(),
        }
    }

    /// Short tag used in file names: `fixed-0.4` or `random`.
    pub fn tag(&self) -> String {
        match self {
            ThresholdSpec::Fixed { theta } => format!("fixed-{theta}"),
            ThresholdSpec::Random { .. } => "random".to_owned(),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, ThresholdSpec::Random { .. })
    }
}

impl fmt::Display for ThresholdSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdSpec::Fixed { theta } => write!(f, "θ={theta}"),
            ThresholdSpec::Random { .. } => f.write_str("θ=U[0,1]"),
        }
    }
}

/// Number of seeds for fraction `f` of `n` nodes: `round(f·n)`, halves up.
pub fn seed_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64 + 0.5).floor() as usize).min(n)
}

/// The first `round(f·N)` nodes of the ranking.
pub fn select_seeds(ranking: &Ranking, fraction: f64, n: usize) -> &[NodeId] {
    &ranking.order[..seed_count(fraction, n).min(ranking.order.len())]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtOutcome {
    /// `A(t_f)`.
    pub final_active: usize,
    /// `t_f`: rounds that activated at least one node.
    pub rounds: usize,
    /// `A(0), A(1), …, A(t_f)`.
    pub per_round_active: Vec<usize>,
    pub seed_count: usize,
}

/// Reusable LT simulator; buffers are sized once per graph.
pub struct LtSimulator<'g> {
    graph: &'g Graph,
    active: Vec<bool>,
    active_neighbors: Vec<u32>,
    frontier: Vec<NodeId>,
    candidates: Vec<NodeId>,
    marked: Vec<bool>,
}

impl<'g> LtSimulator<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let n = graph.n_nodes();
        Self {
            graph,
            active: vec![false; n],
            active_neighbors: vec![0; n],
            frontier: Vec::new(),
            candidates: Vec::new(),
            marked: vec![false; n],
        }
    }

    /// Runs the cascade to its fixpoint.
    ///
    /// An inactive node `v` with `k_v > 0` activates once `m_v ≥ 1` and
    /// `m_v / k_v ≥ θ_v`. Isolated nodes activate only as seeds. Repeated
    /// seeds count once.
    pub fn run(&mut self, seeds: &[NodeId], thresholds: &[f64]) -> LtOutcome {
        let g = self.graph;
        assert_eq!(thresholds.len(), g.n_nodes(), "one threshold per node");
        self.active.fill(false);
        self.active_neighbors.fill(0);
        self.frontier.clear();
        for &s in seeds {
            if !self.active[s] {
                self.active[s] = true;
                self.frontier.push(s);
            }
        }
        let seed_count = self.frontier.len();
        let mut total = seed_count;
        let mut per_round = vec![total];

        loop {
            // Counts so far reflect everything active before this frontier;
            // folding the frontier in gives the states at the end of the
            // previous round.
            self.candidates.clear();
            for &u in &self.frontier {
                for &v in g.neighbors(u) {
                    self.active_neighbors[v] += 1;
                    if !self.active[v] && !self.marked[v] {
                        self.marked[v] = true;
                        self.candidates.push(v);
                    }
                }
            }
            self.frontier.clear();
            for &v in &self.candidates {
                self.marked[v] = false;
                let share = self.active_neighbors[v] as f64 / g.degree(v) as f64;
                if share >= thresholds[v] {
                    self.frontier.push(v);
                }
            }
            if self.frontier.is_empty() {
                break;
            }
            // Activate only after the whole round has been evaluated.
            for &v in &self.frontier {
                self.active[v] = true;
            }
            total += self.frontier.len();
            per_round.push(total);
        }

        LtOutcome {
            final_active: total,
            rounds: per_round.len() - 1,
            per_round_active: per_round,
            seed_count,
        }
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.active[v]
    }

    /// Final states of the last run.
    pub fn active(&self) -> &[bool] {
        &self.active
    }
}

/// One-shot convenience wrapper around [`LtSimulator`].
pub fn lt_simulate(g: &Graph, seeds: &[NodeId], thresholds: &[f64]) -> LtOutcome {
    LtSimulator::new(g).run(seeds, thresholds)
}

/// Seed for the thresholds of one cell of a sweep.
///
/// Mixing every coordinate of the cell means the draw does not depend on
/// which worker computes the cell, or in what order.
pub fn child_seed(
    master_seed: u64,
    network: &str,
    measure: Measure,
    fraction_index: usize,
    run: usize,
) -> u64 {
    hash::mix(&[
        master_seed,
        hash::fnv1a(network.as_bytes()),
        hash::fnv1a(measure.id().as_bytes()),
        fraction_index as u64,
        run as u64,
    ])
}

/// Uniform `[0, 1)` thresholds from a ChaCha8 stream, one per node in index order.
pub fn random_thresholds(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub fraction: f64,
    /// Mean of `A(t_f)/N` over runs.
    pub mean_activation: f64,
    /// Population standard deviation of `A(t_f)/N` over runs.
    pub std_activation: f64,
    pub seed_count: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub network: String,
    pub measure: Measure,
    pub spec: ThresholdSpec,
    pub rows: Vec<SweepRow>,
}

/// Activation size over a grid of seed fractions.
///
/// Fixed thresholds are deterministic, so they always use a single run
/// whatever `runs` says. Random thresholds are redrawn for every
/// `(fraction, run)` cell from [`child_seed`]. Cells run in parallel on
/// the current rayon pool; aggregation happens in a fixed order afterwards.
pub fn lt_sweep(
    g: &Graph,
    network: &str,
    ranking: &Ranking,
    fractions: &[f64],
    spec: ThresholdSpec,
    runs: usize,
) -> Result<SweepTable> {
    if runs == 0 {
        return Err(Error::Parameter("runs must be at least 1".into()));
    }
    if fractions.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Parameter("fractions must be sorted ascending".into()));
    }
    if let Some(f) = fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::Parameter(format!("fraction {f} outside [0, 1]")));
    }
    let runs = if spec.is_random() { runs } else { 1 };
    let n = g.n_nodes();

    let cells: Vec<(usize, usize)> = (0..fractions.len())
        .flat_map(|fi| (0..runs).map(move |r| (fi, r)))
        .collect();
    let fixed = match spec {
        ThresholdSpec::Fixed { theta } => Some(vec![theta; n]),
        ThresholdSpec::Random { .. } => None,
    };
    let finals: Vec<usize> = cells
        .par_iter()
        .map_init(
            || LtSimulator::new(g),
            |sim, &(fi, run)| {
                let seeds = select_seeds(ranking, fractions[fi], n);
                match (&fixed, spec) {
                    (Some(theta), _) => sim.run(seeds, theta).final_active,
                    (None, ThresholdSpec::Random { master_seed }) => {
                        let seed = child_seed(master_seed, network, ranking.measure, fi, run);
                        sim.run(seeds, &random_thresholds(seed, n)).final_active
                    }
                    (None, ThresholdSpec::Fixed { .. }) => unreachable!(),
                }
            },
        )
        .collect();

    let rows = fractions
        .iter()
        .enumerate()
        .map(|(fi, &fraction)| {
            let sizes: Vec<f64> = finals[fi * runs..(fi + 1) * runs]
                .iter()
                .map(|&a| a as f64 / n as f64)
                .collect();
            let mean = sizes.iter().sum::<f64>() / runs as f64;
            let var = sizes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / runs as f64;
            SweepRow {
                fraction,
                mean_activation: mean,
                std_activation: var.sqrt(),
                seed_count: seed_count(fraction, n),
                runs,
            }
        })
        .collect();

    Ok(SweepTable {
        network: network.to_owned(),
        measure: ranking.measure,
        spec,
        rows,
    })
}

pub const SWEEP_HEADER: [&str; 9] = [
    "network",
    "measure",
    "threshold_kind",
    "theta_or_seed",
    "fraction",
    "mean_activation",
    "std_activation",
    "seed_count",
    "runs",
];

/// Writes sweep tables as one CSV with [`SWEEP_HEADER`] columns.
pub fn write_sweep_csv<W: Write>(out: W, tables: &[SweepTable]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(SWEEP_HEADER)?;
    for t in tables {
        for row in &t.rows {
            writer.write_record([
                t.network.as_str(),
                t.measure.id(),
                t.spec.kind(),
                &t.spec.value_string(),
                &row.fraction.to_string(),
                &row.mean_activation.to_string(),
                &row.std_activation.to_string(),
                &row.seed_count.to_string(),
                &row.runs.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}
