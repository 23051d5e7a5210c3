use super::{CentralityParams, CentralityScores, Measure, VitalityMode};
use crate::community::{community_totals, link_census, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Modularity from integer totals: `L/m − S/(4m²)` with `L = Σ l_q` and
/// `S = Σ d_q²`.
fn modularity_from_sums(intra_total: u64, degree_sq_sum: u64, m: u64) -> f64 {
    let m = m as f64;
    intra_total as f64 / m - degree_sq_sum as f64 / (4.0 * m * m)
}

/// Modularity Vitality: change in modularity when each node is removed.
///
/// Removing node `i` of community `q` deletes its `k_i` edges, so
/// `m' = m − k_i`, `l_q' = l_q − k_i^intra`, `d_q' = d_q − k_i − k_{i,q}`
/// and `d_c' = d_c − k_{i,c}` for every other community `c` it touches.
/// Only those communities change, so each node costs `O(#neighbor
/// communities)` after an `O(N + |E|)` setup. Sums are kept as integers,
/// which makes the result agree with a full recomputation up to the final
/// floating-point division.
///
/// If removing a node leaves no edge, `M(G_i)` is taken as 0 and the node
/// is listed in [`CentralityScores::flagged`].
pub fn modularity_vitality(
    g: &Graph,
    p: &Partition,
    mode: VitalityMode,
) -> Result<CentralityScores> {
    p.check_covers(g)?;
    let m = g.n_edges() as u64;
    if m == 0 {
        return Err(Error::UndefinedModularity);
    }
    let census = link_census(g, p)?;
    let (intra, degree_sums) = community_totals(g, p);
    let intra_total: u64 = intra.iter().map(|&l| l as u64).sum();
    let sq_sum: u64 = degree_sums.iter().map(|&d| (d as u64).pow(2)).sum();
    let base = modularity_from_sums(intra_total, sq_sum, m);

    let mut flagged = Vec::new();
    let values = (0..g.n_nodes())
        .map(|v| {
            let k = g.degree(v) as u64;
            if k == 0 {
                return 0.0;
            }
            let m_after = m - k;
            let after = if m_after == 0 {
                flagged.push(v);
                0.0
            } else {
                let own = p.community(v);
                let k_intra = census.intra_degree(v) as u64;
                let mut sq_after = sq_sum;
                let mut own_seen = false;
                for &(c, kc) in census.community_links(v) {
                    let d = degree_sums[c] as u64;
                    let d_after = if c == own {
                        own_seen = true;
                        d - k - kc as u64
                    } else {
                        d - kc as u64
                    };
                    sq_after = sq_after - d * d + d_after * d_after;
                }
                if !own_seen {
                    let d = degree_sums[own] as u64;
                    let d_after = d - k;
                    sq_after = sq_after - d * d + d_after * d_after;
                }
                modularity_from_sums(intra_total - k_intra, sq_after, m_after)
            };
            match mode {
                VitalityMode::Absolute => (after - base).abs(),
                VitalityMode::Signed => after - base,
            }
        })
        .collect();

    let params = CentralityParams {
        vitality: mode,
        ..Default::default()
    };
    let mut scores = CentralityScores::new(Measure::Mv, values, params);
    scores.flagged = flagged;
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn path_vitality() {
        let g = Graph::from_edge_slice(4, &[(0, 1), (1, 2), (2, 3)]);
        let p = Partition::from_assignment(&[0, 0, 1, 1]);
        let s = modularity_vitality(&g, &p, VitalityMode::Absolute).unwrap();
        assert_abs_diff_eq!(s.values[0], 0.125 + 1.0 / 6.0, epsilon = 1e-15);
        let signed = modularity_vitality(&g, &p, VitalityMode::Signed).unwrap();
        assert_abs_diff_eq!(signed.values[0], -0.125 - 1.0 / 6.0, epsilon = 1e-15);
        assert!(s.flagged.is_empty());
    }

    #[test]
    fn isolated_node_scores_zero() {
        let g = Graph::from_edge_slice(4, &[(0, 1), (1, 2)]);
        let p = Partition::from_assignment(&[0, 0, 1, 1]);
        assert_eq!(modularity_vitality(&g, &p, VitalityMode::Absolute).unwrap().values[3], 0.0);
    }

    #[test]
    fn star_center_removal_is_flagged() {
        let g = Graph::from_edge_slice(4, &[(0, 1), (0, 2), (0, 3)]);
        let p = Partition::from_assignment(&[0, 0, 1, 1]);
        let s = modularity_vitality(&g, &p, VitalityMode::Absolute).unwrap();
        assert_eq!(s.flagged, vec![0]);
        let base = crate::community::modularity(&g, &p).unwrap();
        assert_abs_diff_eq!(s.values[0], base.abs(), epsilon = 1e-15);
    }

    #[test]
    fn requires_edges() {
        let g = Graph::from_edge_slice(2, &[]);
        assert!(modularity_vitality(&g, &Partition::singletons(2), VitalityMode::Absolute).is_err());
    }
}
