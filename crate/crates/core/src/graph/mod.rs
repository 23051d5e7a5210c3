//! Undirected simple graphs in compressed adjacency form.
//!
//! Nodes are dense indices `0..n`. Every graph carries a [`LabelMap`] that
//! ties each index back to the label it had in the input file, so results
//! can be reported in original labels after re-indexing (largest component,
//! sub-graph extraction).

mod kcore;
mod load;
mod stats;

use std::collections::{HashMap, VecDeque};
use std::io::Write;

pub use kcore::k_core_decomposition;
pub use load::{load_edge_list, Delimiter, LoadOptions};
pub use stats::{network_stats, NetworkStats};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Bijection between dense node indices and their original string labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl LabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Labels `0..n` as their own decimal strings.
    pub fn numeric(n: usize) -> Self {
        let mut map = Self::new();
        for i in 0..n {
            map.intern(&i.to_string());
        }
        map
    }

    /// Returns the index for `label`, assigning the next free one if unseen.
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Keeps the labels of `kept` (old indices) in the given order.
    fn select(&self, kept: &[NodeId]) -> Self {
        let mut map = Self::new();
        for &old in kept {
            map.intern(&self.labels[old]);
        }
        map
    }

    /// Writes the two-column `label,index` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["label", "index"])?;
        for (i, label) in self.labels.iter().enumerate() {
            writer.write_record([label.as_str(), &i.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Immutable undirected simple graph.
///
/// Neighbor lists are sorted and contain neither self-loops nor duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    labels: LabelMap,
}

impl Graph {
    /// Builds a graph on `labels.len()` nodes from an arbitrary edge list.
    ///
    /// Edge direction, duplicates and self-loops are normalized away.
    pub fn from_edges<I>(labels: LabelMap, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) outside 0..{n}");
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for mut list in adjacency {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(&list);
            offsets.push(neighbors.len());
        }
        Self {
            offsets,
            neighbors,
            labels,
        }
    }

    /// Graph with numeric labels `"0".."n-1"`.
    pub fn from_edge_slice(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        Self::from_edges(LabelMap::numeric(n), edges.iter().copied())
    }

    pub fn n_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n_nodes()).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n_nodes()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn labels(&self) -> &LabelMap {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        self.labels.label(v)
    }

    /// Same node set, keeping only the edges accepted by `keep`.
    pub fn filter_edges<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(NodeId, NodeId) -> bool,
    {
        let kept: Vec<_> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Self::from_edges(self.labels.clone(), kept)
    }

    /// Induced subgraph on `nodes`, re-indexed densely in the given order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Self {
        let mut new_index = vec![usize::MAX; self.n_nodes()];
        for (new, &old) in nodes.iter().enumerate() {
            new_index[old] = new;
        }
        let edges: Vec<_> = self
            .edges()
            .filter_map(|(u, v)| {
                let (a, b) = (new_index[u], new_index[v]);
                (a != usize::MAX && b != usize::MAX).then_some((a, b))
            })
            .collect();
        Self::from_edges(self.labels.select(nodes), edges)
    }

    /// Connected components, each sorted ascending, listed in order of
    /// their smallest node.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut component = Vec::new();
            while let Some(u) = queue.pop_front() {
                component.push(u);
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n_nodes() > 0 && self.connected_components().len() == 1
    }
}

/// Induced subgraph on the largest connected component.
///
/// Among components of equal size the one holding the smallest node index
/// wins. Node order (and therefore label order) is preserved.
pub fn largest_connected_component(g: &Graph) -> Result<Graph> {
    if g.n_nodes() == 0 {
        return Err(Error::EmptyGraph);
    }
    let components = g.connected_components();
    if components.len() == 1 {
        return Ok(g.clone());
    }
    // max_by_key keeps the last maximum; scan in reverse so the earliest wins.
    let largest = components
        .iter()
        .rev()
        .max_by_key(|c| c.len())
        .expect("nonempty graph has a component");
    Ok(g.induced_subgraph(largest))
}
