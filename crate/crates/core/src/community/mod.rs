//! Community partitions and the per-node link census derived from them.

mod census;
mod lpa;

use std::collections::HashMap;
use std::io::{BufRead, Write};

pub use census::{link_census, LinkCensus};
pub use lpa::detect_label_propagation;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMap, NodeId};
use crate::hash::Fnv1a;

pub type CommunityId = usize;

/// Total assignment of nodes to communities `0..n_communities`, every
/// community nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<CommunityId>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary community tokens, renumbering them
    /// densely in order of first appearance along node order.
    pub fn from_assignment<T>(raw: &[T]) -> Self
    where
        T: std::hash::Hash + Eq,
    {
        let mut renumber: HashMap<&T, CommunityId> = HashMap::new();
        let mut sizes = Vec::new();
        let assignment = raw
            .iter()
            .map(|token| {
                let next = renumber.len();
                let c = *renumber.entry(token).or_insert(next);
                if c == sizes.len() {
                    sizes.push(0);
                }
                sizes[c] += 1;
                c
            })
            .collect();
        Self { assignment, sizes }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            sizes: vec![1; n],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.assignment.len()
    }

    pub fn n_communities(&self) -> usize {
        self.sizes.len()
    }

    pub fn community(&self, v: NodeId) -> CommunityId {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[CommunityId] {
        &self.assignment
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size_of(&self, c: CommunityId) -> usize {
        self.sizes[c]
    }

    /// Members of every community, each list ascending.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut members = vec![Vec::new(); self.n_communities()];
        for (v, &c) in self.assignment.iter().enumerate() {
            members[c].push(v);
        }
        members
    }

    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.n_nodes() != g.n_nodes() {
            return Err(Error::PartitionMismatch {
                partition: self.n_nodes(),
                graph: g.n_nodes(),
            });
        }
        Ok(())
    }

    /// Stable 64-bit fingerprint of the node grouping.
    ///
    /// FNV-1a over the little-endian `u64` pairs `(node index, community)`
    /// in ascending node order, with communities first renumbered by first
    /// appearance along node order. Two partitions that group the nodes
    /// identically share a fingerprint regardless of how the communities
    /// were named in their source files.
    pub fn fingerprint(&self) -> u64 {
        let canonical = Partition::from_assignment(&self.assignment);
        let mut h = Fnv1a::new();
        for (v, &c) in canonical.assignment.iter().enumerate() {
            h.write_u64(v as u64);
            h.write_u64(c as u64);
        }
        h.finish()
    }

    /// Writes `label community` lines, the same format [`load_partition`] reads.
    pub fn write<W: Write>(&self, labels: &LabelMap, mut out: W) -> Result<()> {
        for (v, &c) in self.assignment.iter().enumerate() {
            writeln!(out, "{} {}", labels.label(v), c)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct PartitionOptions {
    /// Skip labels the graph does not know instead of failing. Useful when
    /// the partition was computed on the full network and the graph is its
    /// largest component.
    pub ignore_unknown_labels: bool,
}

/// Reads `label<whitespace>community_token` lines (`#` comments allowed).
///
/// Communities are renumbered densely in order of first appearance in the
/// file. Every node of `labels` must be assigned exactly once.
pub fn load_partition<R: BufRead>(
    source: R,
    labels: &LabelMap,
    options: &PartitionOptions,
) -> Result<Partition> {
    let n = labels.len();
    let mut token_of: Vec<Option<usize>> = vec![None; n];
    let mut token_ids: HashMap<String, usize> = HashMap::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(label), Some(token)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected `label community`".into(),
            });
        };
        let Some(v) = labels.get(label) else {
            if options.ignore_unknown_labels {
                continue;
            }
            return Err(Error::UnknownLabel {
                line: i + 1,
                label: label.to_owned(),
            });
        };
        if token_of[v].is_some() {
            return Err(Error::DuplicateAssignment {
                line: i + 1,
                label: label.to_owned(),
            });
        }
        let next = token_ids.len();
        token_of[v] = Some(*token_ids.entry(token.to_owned()).or_insert(next));
    }
    let missing: Vec<String> = token_of
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_none())
        .map(|(v, _)| labels.label(v).to_owned())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingNodes(missing));
    }
    // Token ids are dense and in file order already; only assigned lines
    // ever create one.
    let assignment: Vec<CommunityId> = token_of.into_iter().map(|t| t.unwrap()).collect();
    let mut sizes = vec![0; token_ids.len()];
    for &c in &assignment {
        sizes[c] += 1;
    }
    Ok(Partition { assignment, sizes })
}

/// Newman–Girvan modularity `Σ_q [l_q/m − (d_q/2m)²]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    p.check_covers(g)?;
    let m = g.n_edges();
    if m == 0 {
        return Err(Error::UndefinedModularity);
    }
    let (intra, degree_sums) = community_totals(g, p);
    Ok(modularity_from_totals(&intra, &degree_sums, m))
}

/// Per-community intra-edge counts `l_q` and degree sums `d_q`.
pub(crate) fn community_totals(g: &Graph, p: &Partition) -> (Vec<usize>, Vec<usize>) {
    let mut intra = vec![0usize; p.n_communities()];
    let mut degree_sums = vec![0usize; p.n_communities()];
    for v in 0..g.n_nodes() {
        degree_sums[p.community(v)] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if p.community(u) == p.community(v) {
            intra[p.community(u)] += 1;
        }
    }
    (intra, degree_sums)
}

pub(crate) fn modularity_from_totals(intra: &[usize], degree_sums: &[usize], m: usize) -> f64 {
    let m = m as f64;
    intra
        .iter()
        .zip(degree_sums)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum()
}
