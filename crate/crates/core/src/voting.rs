//! Schulze elections over weak-order ballots.
//!
//! Candidates are plain indices `0..n`. A ballot assigns each candidate a
//! tier (0 = most preferred); equal tiers are ties.

use std::collections::BTreeMap;
use std::io::Write;

use crate::centrality::Measure;
use crate::diffusion::SweepTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    pub voter: String,
    /// `tiers[c]` is the preference tier of candidate `c`.
    pub tiers: Vec<usize>,
}

impl Ballot {
    /// Ballot ranking candidates by descending score; equal scores tie.
    pub fn from_scores(voter: impl Into<String>, scores: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let mut tiers = vec![0; scores.len()];
        let mut tier = 0;
        for (i, &c) in order.iter().enumerate() {
            if i > 0 && scores[c] != scores[order[i - 1]] {
                tier += 1;
            }
            tiers[c] = tier;
        }
        Self {
            voter: voter.into(),
            tiers,
        }
    }

    pub fn prefers(&self, d: usize, e: usize) -> bool {
        self.tiers[d] < self.tiers[e]
    }

    /// Tie classes best-first, e.g. `[[2], [0], [1, 3]]`.
    pub fn tie_classes(&self) -> Vec<Vec<usize>> {
        let depth = self.tiers.iter().copied().max().map_or(0, |t| t + 1);
        let mut classes = vec![Vec::new(); depth];
        for (c, &t) in self.tiers.iter().enumerate() {
            classes[t].push(c);
        }
        classes
    }

    /// `A>B=C` rendering with the given candidate names.
    pub fn render(&self, names: &[&str]) -> String {
        self.tie_classes()
            .iter()
            .map(|class| class.iter().map(|&c| names[c]).collect::<Vec<_>>().join("="))
            .collect::<Vec<_>>()
            .join(">")
    }
}

/// Identifies one ballot cell: a network under one threshold spec at one
/// seed fraction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Voter {
    pub threshold: String,
    pub network: String,
    pub fraction_index: usize,
}

/// One ballot per `(network, threshold, fraction)` cell ranking `candidates`
/// by mean activation size.
///
/// Tables are grouped by network and threshold tag; every group must hold
/// one table per candidate, all over the same fraction grid.
pub fn build_ballots(
    tables: &[SweepTable],
    candidates: &[Measure],
) -> Result<Vec<(Voter, Ballot)>> {
    let mut groups: BTreeMap<(String, String), Vec<&SweepTable>> = BTreeMap::new();
    let mut network_order: Vec<String> = Vec::new();
    for t in tables {
        if !network_order.contains(&t.network) {
            network_order.push(t.network.clone());
        }
        groups
            .entry((t.spec.tag(), t.network.clone()))
            .or_default()
            .push(t);
    }
    let mut ballots = Vec::new();
    for ((threshold, network), group) in &groups {
        let grid_len = group.iter().map(|t| t.rows.len()).max().unwrap_or(0);
        let mut by_measure = Vec::with_capacity(candidates.len());
        for &m in candidates {
            let table = group.iter().find(|t| t.measure == m).ok_or_else(|| {
                Error::IncompleteCell {
                    cell: format!("{network}/{threshold}"),
                    measure: m.id().to_owned(),
                }
            })?;
            if table.rows.len() != grid_len {
                return Err(Error::IncompleteCell {
                    cell: format!("{network}/{threshold}: {} of {grid_len} fractions", table.rows.len()),
                    measure: m.id().to_owned(),
                });
            }
            by_measure.push(*table);
        }
        for fi in 0..grid_len {
            let fraction = by_measure[0].rows[fi].fraction;
            let scores: Vec<f64> = by_measure.iter().map(|t| t.rows[fi].mean_activation).collect();
            if let Some(t) = by_measure.iter().find(|t| t.rows[fi].fraction != fraction) {
                return Err(Error::IncompleteCell {
                    cell: format!("{network}/{threshold}/f={fraction}: grids differ"),
                    measure: t.measure.id().to_owned(),
                });
            }
            let voter = Voter {
                threshold: threshold.clone(),
                network: network.clone(),
                fraction_index: fi,
            };
            let label = format!("{network}/{threshold}/f={fraction}");
            ballots.push((voter, Ballot::from_scores(label, &scores)));
        }
    }
    // Report in the order networks were first seen rather than alphabetically.
    ballots.sort_by_key(|(v, _)| {
        (
            v.threshold.clone(),
            network_order.iter().position(|n| *n == v.network),
            v.fraction_index,
        )
    });
    Ok(ballots)
}

/// Antisymmetric pairwise margins, row-major `n × n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl MarginMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "square matrix expected");
                r.iter().copied()
            })
            .collect();
        Self { n, entries }
    }

    pub fn n_candidates(&self) -> usize {
        self.n
    }

    pub fn get(&self, d: usize, e: usize) -> i64 {
        self.entries[d * self.n + e]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).map(<[i64]>::to_vec).collect()
    }
}

/// `M(d, e)` = ballots strictly preferring `d` over `e` minus the reverse.
pub fn margin_matrix(ballots: &[Ballot]) -> Result<MarginMatrix> {
    let first = ballots.first().ok_or(Error::NoBallots)?;
    let n = first.tiers.len();
    let mut entries = vec![0i64; n * n];
    for b in ballots {
        if b.tiers.len() != n {
            return Err(Error::Parameter(format!(
                "ballot {} ranks {} candidates, expected {n}",
                b.voter,
                b.tiers.len()
            )));
        }
        for d in 0..n {
            for e in 0..n {
                if b.prefers(d, e) {
                    entries[d * n + e] += 1;
                    entries[e * n + d] -= 1;
                }
            }
        }
    }
    Ok(MarginMatrix { n, entries })
}

/// Widest-path strengths `st(d, e)`: the best, over all paths from `d` to
/// `e`, of the weakest margin along the path. Diagonal entries are 0.
pub fn strongest_paths(m: &MarginMatrix) -> Vec<Vec<i64>> {
    let n = m.n_candidates();
    let mut st: Vec<Vec<i64>> = (0..n)
        .map(|d| (0..n).map(|e| if d == e { 0 } else { m.get(d, e) }).collect())
        .collect();
    for x in 0..n {
        for d in 0..n {
            if d == x {
                continue;
            }
            for e in 0..n {
                if e == x || e == d {
                    continue;
                }
                let via = st[d][x].min(st[x][e]);
                if via > st[d][e] {
                    st[d][e] = via;
                }
            }
        }
    }
    st
}

/// Outcome of one election.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    /// Candidates best-first.
    pub order: Vec<usize>,
    /// Number of candidates each one beats under the Schulze relation.
    pub beat_counts: Vec<usize>,
    /// 1-based rank of each candidate.
    pub ranks: Vec<usize>,
    /// Some neighbors in `order` share a beat count and were separated by id.
    pub tied: bool,
}

impl Election {
    /// Candidate beating every other one, when it exists.
    pub fn winner(&self) -> Option<usize> {
        let n = self.order.len();
        self.order
            .first()
            .copied()
            .filter(|&c| self.beat_counts[c] + 1 == n)
    }
}

/// Orders candidates by how many others they beat (`st(d,e) > st(e,d)`),
/// ties broken by candidate index.
pub fn schulze_order(st: &[Vec<i64>]) -> Election {
    let n = st.len();
    let beat_counts: Vec<usize> = (0..n)
        .map(|d| (0..n).filter(|&e| e != d && st[d][e] > st[e][d]).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| beat_counts[b].cmp(&beat_counts[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; n];
    for (i, &c) in order.iter().enumerate() {
        ranks[c] = i + 1;
    }
    let tied = order
        .windows(2)
        .any(|w| beat_counts[w[0]] == beat_counts[w[1]]);
    Election {
        order,
        beat_counts,
        ranks,
        tied,
    }
}

/// Margins, strongest paths and order in one call.
pub fn elect(ballots: &[Ballot]) -> Result<Election> {
    let margins = margin_matrix(ballots)?;
    Ok(schulze_order(&strongest_paths(&margins)))
}

/// Rows of `threshold,network,measure,schulze_rank,beat_count`.
pub fn write_elections_csv<W: Write>(
    out: W,
    candidates: &[Measure],
    elections: &[(String, String, Election)],
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["threshold", "network", "measure", "schulze_rank", "beat_count"])?;
    for (threshold, network, election) in elections {
        for &c in &election.order {
            writer.write_record([
                threshold.as_str(),
                network.as_str(),
                candidates[c].id(),
                &election.ranks[c].to_string(),
                &election.beat_counts[c].to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Rows of `threshold,measure,schulze_rank,beat_count`.
pub fn write_consensus_csv<W: Write>(
    out: W,
    candidates: &[Measure],
    elections: &[(String, Election)],
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["threshold", "measure", "schulze_rank", "beat_count"])?;
    for (threshold, election) in elections {
        for &c in &election.order {
            writer.write_record([
                threshold.as_str(),
                candidates[c].id(),
                &election.ranks[c].to_string(),
                &election.beat_counts[c].to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}
