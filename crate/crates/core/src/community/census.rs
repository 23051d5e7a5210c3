use super::{CommunityId, Partition};
use crate::error::Result;
use crate::graph::{Graph, NodeId};

/// Per-node decomposition of degree by community.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkCensus {
    intra: Vec<usize>,
    inter: Vec<usize>,
    /// `(community, links)` with `links > 0`, ascending by community.
    per_community: Vec<Vec<(CommunityId, usize)>>,
    mixing: Vec<f64>,
}

impl LinkCensus {
    pub fn intra_degree(&self, v: NodeId) -> usize {
        self.intra[v]
    }

    pub fn inter_degree(&self, v: NodeId) -> usize {
        self.inter[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.intra[v] + self.inter[v]
    }

    /// Nonzero link counts `k_{v,c}` of `v` towards each community `c`.
    pub fn community_links(&self, v: NodeId) -> &[(CommunityId, usize)] {
        &self.per_community[v]
    }

    /// `k_{v,c}`, zero when `v` has no link into `c`.
    pub fn links_to(&self, v: NodeId, c: CommunityId) -> usize {
        let list = &self.per_community[v];
        list.binary_search_by_key(&c, |&(community, _)| community)
            .map(|i| list[i].1)
            .unwrap_or(0)
    }

    /// Number of distinct foreign communities adjacent to `v`.
    pub fn neighbor_communities(&self, v: NodeId, own: CommunityId) -> usize {
        self.per_community[v].iter().filter(|&&(c, _)| c != own).count()
    }

    /// Mixing `μ_c`: mean over members of the inter-link share `k^inter/k`.
    pub fn mixing(&self, c: CommunityId) -> f64 {
        self.mixing[c]
    }

    pub fn n_nodes(&self) -> usize {
        self.intra.len()
    }
}

/// Counts intra, inter, and per-community links for every node.
///
/// A degree-0 node contributes 0 to its community's mixing.
pub fn link_census(g: &Graph, p: &Partition) -> Result<LinkCensus> {
    p.check_covers(g)?;
    let n = g.n_nodes();
    let mut intra = vec![0; n];
    let mut inter = vec![0; n];
    let mut per_community = Vec::with_capacity(n);
    let mut scratch: Vec<CommunityId> = Vec::new();
    for v in 0..n {
        let own = p.community(v);
        scratch.clear();
        scratch.extend(g.neighbors(v).iter().map(|&u| p.community(u)));
        scratch.sort_unstable();
        let mut counts: Vec<(CommunityId, usize)> = Vec::new();
        for &c in &scratch {
            match counts.last_mut() {
                Some((last, k)) if *last == c => *k += 1,
                _ => counts.push((c, 1)),
            }
        }
        for &(c, k) in &counts {
            if c == own {
                intra[v] += k;
            } else {
                inter[v] += k;
            }
        }
        per_community.push(counts);
    }

    let mut share_sums = vec![0.0; p.n_communities()];
    for v in 0..n {
        let k = g.degree(v);
        if k > 0 {
            share_sums[p.community(v)] += inter[v] as f64 / k as f64;
        }
    }
    let mixing = share_sums
        .iter()
        .zip(p.sizes())
        .map(|(&s, &size)| s / size as f64)
        .collect();

    Ok(LinkCensus {
        intra,
        inter,
        per_community,
        mixing,
    })
}
