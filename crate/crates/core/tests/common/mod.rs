//! Random instance generators and naive reference implementations shared by
//! the integration and acceptance tests. Nothing here calls into the
//! library's measure, diffusion or voting code; the oracles work on dense
//! adjacency matrices straight from the formulas.

#![allow(dead_code)]

use commlt::community::Partition;
use commlt::graph::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<bool>>;

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_slice(n, &edges)
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra_p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra_p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_slice(n, &edges)
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Partition {
    let k = rng.gen_range(1..=n.clamp(1, 8));
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_assignment(&raw)
}

pub fn adjacency(g: &Graph) -> Matrix {
    let n = g.n_nodes();
    let mut a = vec![vec![false; n]; n];
    for u in 0..n {
        for &v in g.neighbors(u) {
            a[u][v] = true;
        }
    }
    a
}

fn deg(a: &Matrix, i: usize) -> usize {
    a[i].iter().filter(|&&x| x).count()
}

fn links_into(a: &Matrix, labels: &[usize], i: usize, c: usize) -> usize {
    (0..a.len()).filter(|&j| a[i][j] && labels[j] == c).count()
}

fn n_comm(labels: &[usize]) -> usize {
    labels.iter().copied().max().map_or(0, |m| m + 1)
}

fn size(labels: &[usize], c: usize) -> usize {
    labels.iter().filter(|&&x| x == c).count()
}

pub fn oracle_comm(a: &Matrix, labels: &[usize], r: f64) -> Vec<f64> {
    let n = a.len();
    let intra: Vec<usize> = (0..n).map(|i| links_into(a, labels, i, labels[i])).collect();
    let inter: Vec<usize> = (0..n).map(|i| deg(a, i) - intra[i]).collect();
    (0..n)
        .map(|i| {
            let q = labels[i];
            let members: Vec<usize> = (0..n).filter(|&j| labels[j] == q).collect();
            let mu = members
                .iter()
                .map(|&j| {
                    if deg(a, j) == 0 {
                        0.0
                    } else {
                        inter[j] as f64 / deg(a, j) as f64
                    }
                })
                .sum::<f64>()
                / members.len() as f64;
            let max_intra = members.iter().map(|&j| intra[j]).max().unwrap();
            let max_inter = members.iter().map(|&j| inter[j]).max().unwrap();
            let first = if max_intra == 0 {
                0.0
            } else {
                (1.0 + mu) * (intra[i] as f64 / max_intra as f64 * r)
            };
            let second = if max_inter == 0 {
                0.0
            } else {
                (1.0 - mu) * (inter[i] as f64 / max_inter as f64 * r).powi(2)
            };
            first + second
        })
        .collect()
}

pub fn oracle_cbc(a: &Matrix, labels: &[usize]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n_comm(labels))
                .map(|c| links_into(a, labels, i, c) as f64 * (size(labels, c) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// `log` selects the logarithm (natural or otherwise).
pub fn oracle_cbm(a: &Matrix, labels: &[usize], log: fn(f64) -> f64) -> Vec<f64> {
    let n = a.len();
    let total: usize = (0..n).map(|i| deg(a, i)).sum();
    (0..n)
        .map(|i| {
            let k = deg(a, i);
            if k == 0 {
                return 0.0;
            }
            let ri = links_into(a, labels, i, labels[i]) as f64 / k as f64;
            let re = 1.0 - ri;
            let h = |x: f64| if x == 0.0 { 0.0 } else { -x * log(x) };
            (h(ri) + h(re)) * k as f64 / total as f64
        })
        .collect()
}

pub fn oracle_chb(a: &Matrix, labels: &[usize]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let q = labels[i];
            let intra = links_into(a, labels, i, q);
            let inter = deg(a, i) - intra;
            let reached = (0..n_comm(labels))
                .filter(|&l| l != q)
                .filter(|&l| (0..n).any(|j| labels[j] == l && a[i][j]))
                .count();
            (size(labels, q) * intra + reached * inter) as f64
        })
        .collect()
}

/// Modularity via the pairwise form `(1/2m) Σ_ij [a_ij − k_i k_j / 2m] δ(c_i, c_j)`.
pub fn oracle_modularity(a: &Matrix, labels: &[usize]) -> Option<f64> {
    let n = a.len();
    let two_m: usize = (0..n).map(|i| deg(a, i)).sum();
    if two_m == 0 {
        return None;
    }
    let two_m = two_m as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                let aij = if a[i][j] { 1.0 } else { 0.0 };
                sum += aij - deg(a, i) as f64 * deg(a, j) as f64 / two_m;
            }
        }
    }
    Some(sum / two_m)
}

/// Full recomputation after deleting each node; empty remainder counts as 0.
pub fn oracle_mv(a: &Matrix, labels: &[usize]) -> Vec<f64> {
    let n = a.len();
    let base = oracle_modularity(a, labels).expect("graph has edges");
    (0..n)
        .map(|i| {
            let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let sub: Matrix = keep
                .iter()
                .map(|&u| keep.iter().map(|&v| a[u][v]).collect())
                .collect();
            let sub_labels: Vec<usize> = keep.iter().map(|&u| labels[u]).collect();
            let after = oracle_modularity(&sub, &sub_labels).unwrap_or(0.0);
            (after - base).abs()
        })
        .collect()
}

pub fn oracle_pc(a: &Matrix, labels: &[usize]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let k = deg(a, i);
            if k == 0 {
                return 0.0;
            }
            1.0 - (0..n_comm(labels))
                .map(|c| (links_into(a, labels, i, c) as f64 / k as f64).powi(2))
                .sum::<f64>()
        })
        .collect()
}

/// Level-by-level peeling on an adjacency matrix.
pub fn oracle_shells(a: &Matrix) -> Vec<usize> {
    let n = a.len();
    let mut alive = vec![true; n];
    let mut shell = vec![0; n];
    let mut remaining = n;
    let mut level = 0;
    while remaining > 0 {
        loop {
            let victims: Vec<usize> = (0..n)
                .filter(|&v| {
                    alive[v] && (0..n).filter(|&u| alive[u] && a[v][u]).count() <= level
                })
                .collect();
            if victims.is_empty() {
                break;
            }
            for v in victims {
                alive[v] = false;
                shell[v] = level;
                remaining -= 1;
            }
        }
        level += 1;
    }
    shell
}

pub fn oracle_ksc(a: &Matrix, labels: &[usize], delta: f64) -> Vec<f64> {
    let n = a.len();
    let intra: Matrix = (0..n)
        .map(|i| (0..n).map(|j| a[i][j] && labels[i] == labels[j]).collect())
        .collect();
    let inter: Matrix = (0..n)
        .map(|i| (0..n).map(|j| a[i][j] && labels[i] != labels[j]).collect())
        .collect();
    oracle_shells(&intra)
        .into_iter()
        .zip(oracle_shells(&inter))
        .map(|(x, y)| delta * x as f64 + (1.0 - delta) * y as f64)
        .collect()
}

/// LT fixpoint by in-place sweeps until nothing changes. A node needs at
/// least one active neighbor and an active share of at least its threshold.
pub fn oracle_lt(a: &Matrix, seeds: &[usize], theta: &[f64]) -> Vec<bool> {
    let n = a.len();
    let mut active = vec![false; n];
    for &s in seeds {
        active[s] = true;
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if active[v] {
                continue;
            }
            let k = deg(a, v);
            let m = (0..n).filter(|&u| a[v][u] && active[u]).count();
            if k > 0 && m > 0 && m as f64 / k as f64 >= theta[v] {
                active[v] = true;
                changed = true;
            }
        }
        if !changed {
            return active;
        }
    }
}

/// Widest path by enumerating every simple path from `d` to `e`.
pub fn oracle_widest(margins: &[Vec<i64>], d: usize, e: usize) -> i64 {
    fn walk(m: &[Vec<i64>], at: usize, target: usize, used: &mut Vec<bool>, floor: i64, best: &mut i64) {
        for next in 0..m.len() {
            if used[next] || next == at {
                continue;
            }
            let strength = floor.min(m[at][next]);
            if next == target {
                *best = (*best).max(strength);
                continue;
            }
            used[next] = true;
            walk(m, next, target, used, strength, best);
            used[next] = false;
        }
    }
    let mut used = vec![false; margins.len()];
    used[d] = true;
    let mut best = i64::MIN;
    walk(margins, d, e, &mut used, i64::MAX, &mut best);
    best
}

/// Connected graph with planted communities: `n` nodes, `m` edges, `k`
/// blocks of random sizes, and about `mix` of the edges between blocks.
pub fn planted_partition_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    k: usize,
    mix: f64,
) -> (Graph, Vec<usize>) {
    use std::collections::HashSet;
    assert!(k >= 1 && n >= 2 * k && m >= n - 1);
    // cut points split 0..n into k nonempty runs
    let mut cuts: Vec<usize> = (1..n).collect();
    for i in 0..k - 1 {
        let j = rng.gen_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts[..k - 1].to_vec();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(n);
    let block: Vec<usize> = (0..n)
        .map(|v| cuts.partition_point(|&c| c <= v) - 1)
        .collect();

    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let add = |u: usize, v: usize, edges: &mut HashSet<(usize, usize)>| {
        u != v && edges.insert((u.min(v), u.max(v)))
    };
    for b in 0..k {
        let (lo, hi) = (cuts[b], cuts[b + 1]);
        for v in lo + 1..hi {
            // preferential attachment inside the block for a skewed degree profile
            let u = if rng.gen_bool(0.5) { lo } else { rng.gen_range(lo..v) };
            add(u, v, &mut edges);
        }
        if b > 0 {
            let u = rng.gen_range(0..lo);
            let v = rng.gen_range(lo..hi);
            add(u, v, &mut edges);
        }
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = if rng.gen_bool(mix) {
            rng.gen_range(0..n)
        } else {
            rng.gen_range(cuts[block[u]]..cuts[block[u] + 1])
        };
        add(u, v, &mut edges);
    }
    let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
    edges.sort_unstable();
    (Graph::from_edge_slice(n, &edges), block)
}

/// Writes a graph as an edge list and its blocks as a partition file.
pub fn write_network(dir: &std::path::Path, name: &str, g: &Graph, blocks: Option<&[usize]>) {
    use std::fmt::Write as _;
    let mut text = String::from("# synthetic\n");
    for (u, v) in g.edges() {
        let _ = writeln!(text, "{} {}", g.label(u), g.label(v));
    }
    std::fs::write(dir.join(format!("{name}.edges")), text).unwrap();
    if let Some(blocks) = blocks {
        let mut text = String::new();
        for (v, b) in blocks.iter().enumerate() {
            let _ = writeln!(text, "{} c{b}", g.label(v));
        }
        std::fs::write(dir.join(format!("{name}.partition")), text).unwrap();
    }
}
