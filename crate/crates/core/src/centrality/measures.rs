use super::{CentralityParams, CentralityScores, Measure};
use crate::community::{LinkCensus, Partition};
use crate::error::{Error, Result};
use crate::graph::{k_core_decomposition, Graph};

fn check_census(g: &Graph, p: &Partition, census: &LinkCensus) -> Result<()> {
    p.check_covers(g)?;
    if census.n_nodes() != g.n_nodes() {
        return Err(Error::PartitionMismatch {
            partition: census.n_nodes(),
            graph: g.n_nodes(),
        });
    }
    Ok(())
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Comm Centrality.
///
/// `(1 + μ_c)·(k^intra/max_c k^intra · R) + (1 − μ_c)·(k^inter/max_c k^inter · R)²`,
/// maxima taken over the node's own community `c`; a term with a zero
/// maximum is 0.
pub fn comm_centrality(
    g: &Graph,
    p: &Partition,
    census: &LinkCensus,
    r: f64,
) -> Result<CentralityScores> {
    check_census(g, p, census)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Parameter(format!("R must be positive, got {r}")));
    }
    let mut max_intra = vec![0usize; p.n_communities()];
    let mut max_inter = vec![0usize; p.n_communities()];
    for v in 0..g.n_nodes() {
        let c = p.community(v);
        max_intra[c] = max_intra[c].max(census.intra_degree(v));
        max_inter[c] = max_inter[c].max(census.inter_degree(v));
    }
    let values = (0..g.n_nodes())
        .map(|v| {
            let c = p.community(v);
            let mu = census.mixing(c);
            let hub = ratio(census.intra_degree(v), max_intra[c]) * r;
            let bridge = ratio(census.inter_degree(v), max_inter[c]) * r;
            (1.0 + mu) * hub + (1.0 - mu) * bridge * bridge
        })
        .collect();
    let params = CentralityParams {
        r,
        ..Default::default()
    };
    Ok(CentralityScores::new(Measure::Comm, values, params))
}

/// Community-based Centrality: `Σ_c k_{i,c} · n_c / N`.
pub fn community_based_centrality(
    g: &Graph,
    p: &Partition,
    census: &LinkCensus,
) -> Result<CentralityScores> {
    check_census(g, p, census)?;
    let n = g.n_nodes() as f64;
    let values = (0..g.n_nodes())
        .map(|v| {
            census
                .community_links(v)
                .iter()
                .map(|&(c, k)| k as f64 * p.size_of(c) as f64 / n)
                .sum()
        })
        .collect();
    Ok(CentralityScores::new(Measure::Cbc, values, CentralityParams::default()))
}

/// `−x ln x` with `0 ln 0 = 0`.
fn entropy_term(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Community-based Mediator: binary entropy (natural log) of the
/// intra/inter split of a node's links, times `k_i / Σ_j k_j`.
pub fn community_based_mediator(
    g: &Graph,
    p: &Partition,
    census: &LinkCensus,
) -> Result<CentralityScores> {
    check_census(g, p, census)?;
    let total_degree = 2 * g.n_edges();
    let values = (0..g.n_nodes())
        .map(|v| {
            let k = g.degree(v);
            if k == 0 {
                return 0.0;
            }
            let rho_intra = ratio(census.intra_degree(v), k);
            let rho_inter = ratio(census.inter_degree(v), k);
            (entropy_term(rho_intra) + entropy_term(rho_inter)) * ratio(k, total_degree)
        })
        .collect();
    Ok(CentralityScores::new(Measure::Cbm, values, CentralityParams::default()))
}

/// Community Hub-Bridge: `|c_q|·k^intra + (#neighboring communities)·k^inter`.
pub fn community_hub_bridge(
    g: &Graph,
    p: &Partition,
    census: &LinkCensus,
) -> Result<CentralityScores> {
    check_census(g, p, census)?;
    let values = (0..g.n_nodes())
        .map(|v| {
            let c = p.community(v);
            let hub = p.size_of(c) * census.intra_degree(v);
            let bridge = census.neighbor_communities(v, c) * census.inter_degree(v);
            (hub + bridge) as f64
        })
        .collect();
    Ok(CentralityScores::new(Measure::Chb, values, CentralityParams::default()))
}

/// Participation Coefficient: `1 − Σ_c (k_{i,c}/k_i)²`, 0 for isolated nodes.
pub fn participation_coefficient(
    g: &Graph,
    p: &Partition,
    census: &LinkCensus,
) -> Result<CentralityScores> {
    check_census(g, p, census)?;
    let values = (0..g.n_nodes())
        .map(|v| {
            let k = g.degree(v);
            if k == 0 {
                return 0.0;
            }
            let concentration: f64 = census
                .community_links(v)
                .iter()
                .map(|&(_, kc)| ratio(kc, k).powi(2))
                .sum();
            // guard against 1 - 1.0000000000000002
            (1.0 - concentration).max(0.0)
        })
        .collect();
    Ok(CentralityScores::new(Measure::Pc, values, CentralityParams::default()))
}

/// K-shell with Community: `δ·shell_intra + (1 − δ)·shell_inter`, shells
/// taken in the subgraphs of intra-community and inter-community edges.
pub fn kshell_with_community(g: &Graph, p: &Partition, delta: f64) -> Result<CentralityScores> {
    p.check_covers(g)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Parameter(format!("delta must lie in [0, 1], got {delta}")));
    }
    let intra = g.filter_edges(|u, v| p.community(u) == p.community(v));
    let inter = g.filter_edges(|u, v| p.community(u) != p.community(v));
    let shell_intra = k_core_decomposition(&intra);
    let shell_inter = k_core_decomposition(&inter);
    let values = shell_intra
        .iter()
        .zip(&shell_inter)
        .map(|(&a, &b)| delta * a as f64 + (1.0 - delta) * b as f64)
        .collect();
    let params = CentralityParams {
        delta,
        ..Default::default()
    };
    Ok(CentralityScores::new(Measure::Ksc, values, params))
}
