use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Partition;
use crate::graph::Graph;

const MAX_SWEEPS: usize = 100;

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits the nodes in a
/// freshly shuffled order (ChaCha8 seeded with `seed`) and moves each one
/// to the most frequent label among its neighbors, the smallest label
/// winning ties. Stops after a sweep with no change, or after 100 sweeps.
///
/// This is a cheap fallback for when no external partition is supplied; it
/// does not reproduce flow-based detectors.
pub fn detect_label_propagation(g: &Graph, seed: u64) -> Partition {
    let n = g.n_nodes();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();

    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            if g.degree(v) == 0 {
                continue;
            }
            for &u in g.neighbors(v) {
                let l = labels[u];
                if counts[l] == 0 {
                    touched.push(l);
                }
                counts[l] += 1;
            }
            let mut best = usize::MAX;
            let mut best_count = 0;
            for &l in &touched {
                let c = counts[l];
                if c > best_count || (c == best_count && l < best) {
                    best = l;
                    best_count = c;
                }
            }
            for &l in &touched {
                counts[l] = 0;
            }
            touched.clear();
            if labels[v] != best {
                labels[v] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Partition::from_assignment(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::modularity;

    fn assert_valid(p: &Partition, n: usize) {
        assert_eq!(p.n_nodes(), n);
        assert_eq!(p.sizes().iter().sum::<usize>(), n);
        assert!(p.sizes().iter().all(|&s| s > 0));
        assert!(p.assignment().iter().all(|&c| c < p.n_communities()));
    }

    #[test]
    fn barbell_of_triangles() {
        let g = Graph::from_edge_slice(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let mut split = 0;
        for seed in 0..100 {
            let p = detect_label_propagation(&g, seed);
            assert_valid(&p, 6);
            let q = modularity(&g, &p).unwrap();
            assert!(q >= 0.0, "seed {seed}");
            if q > 0.0 {
                split += 1;
            }
        }
        assert!(split > 50);
        let p = detect_label_propagation(&g, 1);
        assert_eq!(p.n_communities(), 2);
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn complete_graph_collapses() {
        let mut edges = vec![];
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edge_slice(5, &edges);
        for seed in 0..10 {
            assert_eq!(detect_label_propagation(&g, seed).n_communities(), 1);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = Graph::from_edge_slice(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0), (0, 4)],
        );
        assert_eq!(detect_label_propagation(&g, 9), detect_label_propagation(&g, 9));
    }

    #[test]
    fn isolated_nodes_stay_alone() {
        let g = Graph::from_edge_slice(4, &[(0, 1)]);
        let p = detect_label_propagation(&g, 0);
        assert_valid(&p, 4);
        assert_eq!(p.n_communities(), 3);
    }
}
