use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

/// Macroscopic summary of a connected graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub avg_degree: f64,
    pub avg_distance: f64,
    pub density: f64,
    pub transitivity: f64,
    /// Degree assortativity; `None` when every edge joins equal degrees
    /// (zero variance, correlation undefined).
    pub assortativity: Option<f64>,
}

/// Computes [`NetworkStats`] for a connected graph.
///
/// The average distance runs one BFS per source node in parallel, which is
/// `O(N·|E|)` overall. Per-source sums are integers, so the result does not
/// depend on scheduling.
pub fn network_stats(g: &Graph) -> Result<NetworkStats> {
    let n = g.n_nodes();
    if n < 2 {
        return Err(Error::UndefinedStats(format!("graph has {n} node(s)")));
    }
    let m = g.n_edges();
    let sums: Vec<Option<u64>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), source| bfs_distance_sum(g, source, dist, queue),
        )
        .collect();
    let mut total: u64 = 0;
    for s in sums {
        total += s.ok_or_else(|| Error::UndefinedStats("graph is disconnected".into()))?;
    }
    let pairs = (n as u64) * (n as u64 - 1);

    Ok(NetworkStats {
        n_nodes: n,
        n_edges: m,
        avg_degree: 2.0 * m as f64 / n as f64,
        avg_distance: total as f64 / pairs as f64,
        density: 2.0 * m as f64 / pairs as f64,
        transitivity: transitivity(g),
        assortativity: assortativity(g),
    })
}

/// Sum of BFS distances from `source`, or `None` if some node is unreachable.
fn bfs_distance_sum(
    g: &Graph,
    source: usize,
    dist: &mut [u32],
    queue: &mut VecDeque<usize>,
) -> Option<u64> {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let mut reached = 1usize;
    let mut sum = 0u64;
    while let Some(u) = queue.pop_front() {
        let d = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = d;
                sum += d as u64;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    (reached == g.n_nodes()).then_some(sum)
}

fn transitivity(g: &Graph) -> f64 {
    let mut triangles = 0u64;
    for (u, v) in g.edges() {
        // Count each triangle u < v < w once.
        triangles += count_common_above(g.neighbors(u), g.neighbors(v), v);
    }
    let triples: u64 = (0..g.n_nodes())
        .map(|v| {
            let k = g.degree(v) as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    }
}

fn count_common_above(a: &[usize], b: &[usize], floor: usize) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i] > floor {
                    count += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Newman's degree assortativity over undirected edges.
fn assortativity(g: &Graph) -> Option<f64> {
    let m = g.n_edges() as f64;
    if m == 0.0 {
        return None;
    }
    let (mut prod, mut half_sum, mut half_sq) = (0.0, 0.0, 0.0);
    for (u, v) in g.edges() {
        let (a, b) = (g.degree(u) as f64, g.degree(v) as f64);
        prod += a * b;
        half_sum += 0.5 * (a + b);
        half_sq += 0.5 * (a * a + b * b);
    }
    let mean = half_sum / m;
    let numerator = prod / m - mean * mean;
    let denominator = half_sq / m - mean * mean;
    if denominator.abs() <= f64::EPSILON * half_sq / m {
        None
    } else {
        Some((numerator / denominator).clamp(-1.0, 1.0))
    }
}
