//! Experiment configuration in a flat `key = value` text format.
//!
//! ```text
//! # one line per network: name, edge list, optional partition file
//! network = euroroad data/euroroad.edges data/euroroad.communities
//! network = toy toy.edges
//! # expected LCC size per network, checked to within 2%
//! expect = euroroad 1039 1305
//! measures = COMM, CBC, CBM, CHB, MV, PC, KSC
//! thresholds = 0.4, 0.7, random
//! runs = 50
//! master_seed = 2022
//! grid_points = 100
//! include_zero = false
//! R = 1
//! delta = 0.5
//! vitality = absolute
//! fallback = label_propagation
//! lpa_seed = 0
//! ignore_unknown_labels = false
//! output = results
//! ```
//!
//! Relative paths are resolved against the directory of the config file.
//! Keys are case-insensitive except `R`, which is also accepted as `r`.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::centrality::{CentralityParams, Measure, VitalityMode};
use crate::diffusion::ThresholdSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSpec {
    pub name: String,
    pub edges: PathBuf,
    pub partition: Option<PathBuf>,
    /// Expected `(N, |E|)` of the largest component.
    pub expected: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    /// Every network must come with a partition file.
    None,
    LabelPropagation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub networks: Vec<NetworkSpec>,
    pub measures: Vec<Measure>,
    pub thresholds: Vec<ThresholdSpec>,
    pub runs: usize,
    pub master_seed: u64,
    pub grid_points: usize,
    pub include_zero: bool,
    pub params: CentralityParams,
    pub fallback: Fallback,
    pub lpa_seed: u64,
    pub ignore_unknown_labels: bool,
    pub output: PathBuf,
}

pub const DEFAULT_MASTER_SEED: u64 = 2022;

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            networks: Vec::new(),
            measures: Measure::ALL.to_vec(),
            thresholds: vec![
                ThresholdSpec::Fixed { theta: 0.4 },
                ThresholdSpec::Fixed { theta: 0.7 },
                ThresholdSpec::Random {
                    master_seed: DEFAULT_MASTER_SEED,
                },
            ],
            runs: 50,
            master_seed: DEFAULT_MASTER_SEED,
            grid_points: 100,
            include_zero: false,
            params: CentralityParams::default(),
            fallback: Fallback::None,
            lpa_seed: 0,
            ignore_unknown_labels: false,
            output: PathBuf::from("results"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut thresholds_raw: Option<(usize, String)> = None;
        let mut expectations: Vec<(usize, String, usize, usize)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            let value = value.trim();
            match key.to_ascii_lowercase().as_str() {
                "network" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if !(2..=3).contains(&parts.len()) {
                        return Err(err("network = <name> <edge list> [<partition>]".into()));
                    }
                    if cfg.networks.iter().any(|n| n.name == parts[0]) {
                        return Err(err(format!("network `{}` listed twice", parts[0])));
                    }
                    cfg.networks.push(NetworkSpec {
                        name: parts[0].to_owned(),
                        edges: base.join(parts[1]),
                        partition: parts.get(2).map(|p| base.join(p)),
                        expected: None,
                    });
                }
                "expect" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let parsed = match parts.as_slice() {
                        [name, n, m] => n.parse().ok().zip(m.parse().ok()).map(|(n, m)| (name.to_string(), n, m)),
                        _ => None,
                    };
                    let (name, n, m) =
                        parsed.ok_or_else(|| err("expect = <name> <nodes> <edges>".into()))?;
                    expectations.push((line_no, name, n, m));
                }
                "measures" => {
                    cfg.measures = value
                        .split(',')
                        .map(|m| m.parse())
                        .collect::<Result<Vec<Measure>>>()
                        .map_err(|e| err(e.to_string()))?;
                    let mut sorted = cfg.measures.clone();
                    sorted.sort();
                    sorted.dedup();
                    if sorted.len() != cfg.measures.len() {
                        return Err(err("measure listed twice".into()));
                    }
                }
                "thresholds" => thresholds_raw = Some((line_no, value.to_owned())),
                "runs" => cfg.runs = parse_num(value).map_err(err)?,
                "master_seed" => cfg.master_seed = parse_num(value).map_err(err)?,
                "grid_points" => cfg.grid_points = parse_num(value).map_err(err)?,
                "include_zero" => cfg.include_zero = parse_bool(value).map_err(err)?,
                "r" => cfg.params.r = parse_num(value).map_err(err)?,
                "delta" => cfg.params.delta = parse_num(value).map_err(err)?,
                "vitality" => {
                    cfg.params.vitality = match value.to_ascii_lowercase().as_str() {
                        "absolute" => VitalityMode::Absolute,
                        "signed" => VitalityMode::Signed,
                        other => return Err(err(format!("vitality must be absolute or signed, got `{other}`"))),
                    }
                }
                "fallback" => {
                    cfg.fallback = match value.to_ascii_lowercase().as_str() {
                        "none" => Fallback::None,
                        "label_propagation" | "lpa" => Fallback::LabelPropagation,
                        other => return Err(err(format!("unknown fallback `{other}`"))),
                    }
                }
                "lpa_seed" => cfg.lpa_seed = parse_num(value).map_err(err)?,
                "ignore_unknown_labels" => cfg.ignore_unknown_labels = parse_bool(value).map_err(err)?,
                "output" => cfg.output = base.join(value),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }

        // Thresholds are resolved last so `random` picks up the final master seed.
        if let Some((line, raw)) = thresholds_raw {
            cfg.thresholds = raw
                .split(',')
                .map(|t| parse_threshold(t.trim(), cfg.master_seed))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Config {
                    line,
                    message: e.to_string(),
                })?;
        } else {
            for t in &mut cfg.thresholds {
                if let ThresholdSpec::Random { master_seed } = t {
                    *master_seed = cfg.master_seed;
                }
            }
        }
        for (line, name, n, m) in expectations {
            let net = cfg
                .networks
                .iter_mut()
                .find(|net| net.name == name)
                .ok_or_else(|| Error::Config {
                    line,
                    message: format!("expect refers to unknown network `{name}`"),
                })?;
            net.expected = Some((n, m));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::Parameter(msg.to_owned()));
        if self.networks.is_empty() {
            return invalid("at least one network is required");
        }
        if self.measures.is_empty() {
            return invalid("at least one measure is required");
        }
        if self.thresholds.is_empty() {
            return invalid("at least one threshold is required");
        }
        if self.runs == 0 {
            return invalid("runs must be at least 1");
        }
        if self.grid_points == 0 || (self.include_zero && self.grid_points < 2) {
            return invalid("grid_points too small");
        }
        if !(self.params.r.is_finite() && self.params.r > 0.0) {
            return invalid("R must be positive");
        }
        if !(0.0..=1.0).contains(&self.params.delta) {
            return invalid("delta must lie in [0, 1]");
        }
        Ok(())
    }

    /// Seed fractions in `(0, 0.5]`, or `[0, 0.5]` with `include_zero`.
    pub fn fraction_grid(&self) -> Vec<f64> {
        fraction_grid(self.grid_points, self.include_zero)
    }
}

/// `points` evenly spaced fractions ending at 0.5: `k/(2·points)` for
/// `k = 1..=points`, or `k/(2·(points − 1))` for `k = 0..points` when zero
/// is included.
pub fn fraction_grid(points: usize, include_zero: bool) -> Vec<f64> {
    if include_zero {
        let den = (2 * (points - 1)) as f64;
        (0..points).map(|k| k as f64 / den).collect()
    } else {
        let den = (2 * points) as f64;
        (1..=points).map(|k| k as f64 / den).collect()
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse `{value}` as a number"))
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{value}`")),
    }
}

/// `random`, `U[0,1]` or a fixed threshold in `[0, 1]`.
pub fn parse_threshold(token: &str, master_seed: u64) -> Result<ThresholdSpec> {
    match token.to_ascii_lowercase().as_str() {
        "random" | "u[0,1]" | "uniform" => Ok(ThresholdSpec::Random { master_seed }),
        other => {
            let theta: f64 = other
                .parse()
                .map_err(|_| Error::Parameter(format!("bad threshold `{token}`")))?;
            ThresholdSpec::fixed(theta)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_protocol() {
        let cfg = ExperimentConfig::parse("network = toy toy.edges toy.part\n", Path::new("/d")).unwrap();
        assert_eq!(cfg.measures.len(), 7);
        assert_eq!(cfg.runs, 50);
        assert_eq!(cfg.thresholds.len(), 3);
        assert_eq!(cfg.networks[0].edges, PathBuf::from("/d/toy.edges"));
        assert_eq!(cfg.networks[0].partition, Some(PathBuf::from("/d/toy.part")));
        let grid = cfg.fraction_grid();
        assert_eq!(grid.len(), 100);
        assert_eq!(grid[0], 0.005);
        assert_eq!(grid[99], 0.5);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn include_zero_grid() {
        let grid = fraction_grid(100, true);
        assert_eq!((grid.len(), grid[0], grid[99]), (100, 0.0, 0.5));
    }

    #[test]
    fn full_config() {
        let text = "\
# comment
network = a a.txt
network = b b.txt b.part
expect = b 10 20
measures = comm, MV
thresholds = 0.4, random
runs = 5
master_seed = 9
R = 2.5
delta = 0.25
vitality = signed
fallback = label_propagation
lpa_seed = 3
include_zero = yes
grid_points = 11
output = out
";
        let cfg = ExperimentConfig::parse(text, Path::new("base")).unwrap();
        assert_eq!(cfg.measures, vec![Measure::Comm, Measure::Mv]);
        assert_eq!(
            cfg.thresholds,
            vec![ThresholdSpec::Fixed { theta: 0.4 }, ThresholdSpec::Random { master_seed: 9 }]
        );
        assert_eq!(cfg.networks[1].expected, Some((10, 20)));
        assert_eq!(cfg.params.r, 2.5);
        assert_eq!(cfg.params.vitality, VitalityMode::Signed);
        assert_eq!(cfg.fallback, Fallback::LabelPropagation);
        assert_eq!(cfg.output, PathBuf::from("base/out"));
        assert_eq!(cfg.fraction_grid()[10], 0.5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = [
            "network = a a.txt\nbogus = 1\n",
            "network = a a.txt\nruns = many\n",
            "network = a a.txt\nthresholds = 0.4, 1.5\n",
            "network = a a.txt\nmeasures = COMM, XYZ\n",
            "network = a a.txt\nexpect = b 1 2\n",
            "network = a a.txt\nno equals sign\n",
        ];
        for text in bad {
            match ExperimentConfig::parse(text, Path::new(".")) {
                Err(Error::Config { line: 2, .. }) => {}
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::parse("runs = 3\n", Path::new(".")).is_err());
        assert!(ExperimentConfig::parse("network = a a\nruns = 0\n", Path::new(".")).is_err());
        assert!(ExperimentConfig::parse("network = a a\ndelta = 2\n", Path::new(".")).is_err());
    }
}
