//! Community-aware centrality measures and the rankings derived from them.

mod measures;
mod vitality;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use measures::{
    comm_centrality, community_based_centrality, community_based_mediator,
    community_hub_bridge, kshell_with_community, participation_coefficient,
};
pub use vitality::modularity_vitality;

use crate::community::{LinkCensus, Partition};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    /// Comm Centrality.
    #[serde(rename = "COMM")]
    Comm,
    /// Community-based Centrality.
    #[serde(rename = "CBC")]
    Cbc,
    /// Community-based Mediator.
    #[serde(rename = "CBM")]
    Cbm,
    /// Community Hub-Bridge.
    #[serde(rename = "CHB")]
    Chb,
    /// Modularity Vitality.
    #[serde(rename = "MV")]
    Mv,
    /// Participation Coefficient.
    #[serde(rename = "PC")]
    Pc,
    /// K-shell with Community.
    #[serde(rename = "KSC")]
    Ksc,
}

impl Measure {
    /// All measures in canonical (id) order.
    pub const ALL: [Measure; 7] = [
        Measure::Comm,
        Measure::Cbc,
        Measure::Cbm,
        Measure::Chb,
        Measure::Mv,
        Measure::Pc,
        Measure::Ksc,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Measure::Comm => "COMM",
            Measure::Cbc => "CBC",
            Measure::Cbm => "CBM",
            Measure::Chb => "CHB",
            Measure::Mv => "MV",
            Measure::Pc => "PC",
            Measure::Ksc => "KSC",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Comm => "Comm Centrality",
            Measure::Cbc => "Community-based Centrality",
            Measure::Cbm => "Community-based Mediator",
            Measure::Chb => "Community Hub-Bridge",
            Measure::Mv => "Modularity Vitality",
            Measure::Pc => "Participation Coefficient",
            Measure::Ksc => "K-shell with Community",
        }
    }

    /// Position in [`Measure::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownMeasure(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VitalityMode {
    /// `|M(G_i) − M(G)|`.
    #[default]
    Absolute,
    /// `M(G_i) − M(G)`.
    Signed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralityParams {
    /// Comm Centrality scaling factor `R`.
    pub r: f64,
    /// K-shell with Community weight of the intra-community shell.
    pub delta: f64,
    pub vitality: VitalityMode,
}

impl Default for CentralityParams {
    fn default() -> Self {
        Self {
            r: 1.0,
            delta: 0.5,
            vitality: VitalityMode::Absolute,
        }
    }
}

/// Per-node scores of one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub measure: Measure,
    pub values: Vec<f64>,
    pub params: CentralityParams,
    /// Nodes whose score needed a convention; for Modularity Vitality, the
    /// nodes whose removal leaves no edge (their `M(G_i)` is taken as 0).
    pub flagged: Vec<NodeId>,
}

impl CentralityScores {
    fn new(measure: Measure, values: Vec<f64>, params: CentralityParams) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()), "{measure}: non-finite score");
        Self {
            measure,
            values,
            params,
            flagged: Vec::new(),
        }
    }
}

/// Computes `measure` for every node.
pub fn compute(
    measure: Measure,
    g: &Graph,
    p: &Partition,
    census: &LinkCensus,
    params: &CentralityParams,
) -> Result<CentralityScores> {
    let mut scores = match measure {
        Measure::Comm => comm_centrality(g, p, census, params.r)?,
        Measure::Cbc => community_based_centrality(g, p, census)?,
        Measure::Cbm => community_based_mediator(g, p, census)?,
        Measure::Chb => community_hub_bridge(g, p, census)?,
        Measure::Mv => modularity_vitality(g, p, params.vitality)?,
        Measure::Pc => participation_coefficient(g, p, census)?,
        Measure::Ksc => kshell_with_community(g, p, params.delta)?,
    };
    scores.params = *params;
    Ok(scores)
}

/// Nodes ordered by descending score, ties by ascending index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub measure: Measure,
    pub order: Vec<NodeId>,
}

impl Ranking {
    /// 1-based rank of every node.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i + 1;
        }
        pos
    }
}

pub fn rank(scores: &CentralityScores) -> Ranking {
    let values = &scores.values;
    let mut order: Vec<NodeId> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    Ranking {
        measure: scores.measure,
        order,
    }
}

/// Writes `node_label,measure,score,rank` rows in rank order, preceded by
/// `#` metadata lines carrying the parameters and partition fingerprint.
pub fn write_scores_csv<W: Write>(
    mut out: W,
    g: &Graph,
    scores: &CentralityScores,
    ranking: &Ranking,
    partition_fingerprint: u64,
) -> Result<()> {
    writeln!(out, "# measure={}", scores.measure)?;
    writeln!(out, "# R={}", scores.params.r)?;
    writeln!(out, "# delta={}", scores.params.delta)?;
    writeln!(
        out,
        "# vitality={}",
        match scores.params.vitality {
            VitalityMode::Absolute => "absolute",
            VitalityMode::Signed => "signed",
        }
    )?;
    writeln!(out, "# partition={partition_fingerprint:016x}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["node_label", "measure", "score", "rank"])?;
    for (i, &v) in ranking.order.iter().enumerate() {
        writer.write_record([
            g.label(v),
            scores.measure.id(),
            &scores.values[v].to_string(),
            &(i + 1).to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
