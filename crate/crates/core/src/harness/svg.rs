//! Minimal SVG charts: activation curves and rank boxplots.

use std::fmt::Write as _;

use crate::centrality::Measure;
use crate::diffusion::SweepTable;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Series color per measure, indexed by [`Measure::index`].
pub const PALETTE: [&str; 7] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
];

struct Frame {
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        LEFT + v / self.x_max * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

fn header(svg: &mut String, title: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(svg: &mut String, f: &Frame, x_label: &str, y_label: &str, x_ticks: &[f64], y_ticks: &[f64]) {
    let (x0, x1) = (f.x(0.0), f.x(f.x_max));
    let (y0, y1) = (f.y(f.y_min), f.y(f.y_max));
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#
    );
    for &t in x_ticks {
        let x = f.x(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle">{t}</text>"#,
            y0 + 5.0,
            y0 + 18.0
        );
    }
    for &t in y_ticks {
        let y = f.y(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/><text x="{}" y="{}" text-anchor="end">{t}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn legend(svg: &mut String, measures: &[Measure]) {
    for (i, m) in measures.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            x + 20.0,
            PALETTE[m.index()],
            x + 26.0,
            y + 4.0,
            m.id()
        );
    }
}

/// Activation size against seed fraction, one polyline per measure; random
/// thresholds add a shaded mean ± std band. Axes span `[0, 0.5] × [0, 1]`.
pub fn emit_curves(title: &str, tables: &[SweepTable]) -> Result<String> {
    if tables.is_empty() || tables.iter().all(|t| t.rows.is_empty()) {
        return Err(Error::EmptyTable(title.to_owned()));
    }
    let mut tables: Vec<&SweepTable> = tables.iter().collect();
    tables.sort_by_key(|t| t.measure);
    let frame = Frame {
        x_max: 0.5,
        y_min: 0.0,
        y_max: 1.0,
    };
    let mut svg = String::new();
    header(&mut svg, title);
    axes(
        &mut svg,
        &frame,
        "fraction of initially active nodes",
        "activation size",
        &[0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
        &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
    );
    for t in &tables {
        if !t.spec.is_random() {
            continue;
        }
        let upper = t.rows.iter().map(|r| (r.fraction, (r.mean_activation + r.std_activation).min(1.0)));
        let lower = t.rows.iter().rev().map(|r| (r.fraction, (r.mean_activation - r.std_activation).max(0.0)));
        let points: Vec<String> = upper
            .chain(lower)
            .map(|(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon class="band" data-measure="{}" points="{}" fill="{}" fill-opacity="0.2" stroke="none"/>"#,
            t.measure.id(),
            points.join(" "),
            PALETTE[t.measure.index()]
        );
    }
    for t in &tables {
        let points: Vec<String> = t
            .rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", frame.x(r.fraction), frame.y(r.mean_activation)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-measure="{}" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            t.measure.id(),
            points.join(" "),
            PALETTE[t.measure.index()]
        );
    }
    legend(&mut svg, &tables.iter().map(|t| t.measure).collect::<Vec<_>>());
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Five-number summary with linearly interpolated quartiles, plus the mean.
pub fn box_stats(values: &[f64]) -> Option<BoxStats> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    Some(BoxStats {
        min: v[0],
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        max: v[v.len() - 1],
        mean: v.iter().sum::<f64>() / v.len() as f64,
    })
}

/// Boxplots of each measure's Schulze rank across per-network elections.
///
/// `ranks[i]` holds the ranks of `measures[i]`, one per election. Rank 1
/// is drawn at the top.
pub fn emit_rank_boxes(title: &str, measures: &[Measure], ranks: &[Vec<usize>]) -> Result<String> {
    if measures.is_empty() || ranks.iter().all(Vec::is_empty) {
        return Err(Error::EmptyTable(title.to_owned()));
    }
    let n = measures.len() as f64;
    let mut svg = String::new();
    header(&mut svg, title);
    let plot_w = WIDTH - LEFT - RIGHT;
    let slot = plot_w / n;
    // rank 1 at the top: map rank r to r' = n + 1 - r on an upward axis
    let frame = Frame {
        x_max: 1.0,
        y_min: 0.5,
        y_max: n + 0.5,
    };
    let y = |rank: f64| frame.y(n + 1.0 - rank);
    let (x0, x1) = (LEFT, LEFT + plot_w);
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black"><line x1="{x0}" y1="{}" x2="{x1}" y2="{}"/><line x1="{x0}" y1="{}" x2="{x0}" y2="{}"/></g>"#,
        frame.y(0.5),
        frame.y(0.5),
        frame.y(0.5),
        frame.y(n + 0.5)
    );
    for r in 1..=measures.len() {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end">{r}</text>"#,
            x0 - 8.0,
            y(r as f64) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">rank</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (i, (m, values)) in measures.iter().zip(ranks).enumerate() {
        let cx = x0 + slot * (i as f64 + 0.5);
        let _ = writeln!(
            svg,
            r#"<text x="{cx}" y="{}" text-anchor="middle">{}</text>"#,
            frame.y(0.5) + 18.0,
            m.id()
        );
        let as_f: Vec<f64> = values.iter().map(|&r| r as f64).collect();
        let Some(s) = box_stats(&as_f) else { continue };
        let half = slot * 0.3;
        let color = PALETTE[m.index()];
        let _ = writeln!(
            svg,
            r#"<g class="box" data-measure="{}" data-min="{}" data-q1="{}" data-median="{}" data-q3="{}" data-max="{}" data-mean="{}">"#,
            m.id(),
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max,
            s.mean
        );
        let _ = writeln!(
            svg,
            r#"<line class="whisker" x1="{cx}" y1="{:.2}" x2="{cx}" y2="{:.2}" stroke="black"/>"#,
            y(s.min),
            y(s.max)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.5" stroke="black"/>"#,
            cx - half,
            y(s.q1).min(y(s.q3)),
            2.0 * half,
            (y(s.q1) - y(s.q3)).abs()
        );
        let _ = writeln!(
            svg,
            r#"<line class="median" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
            cx - half,
            y(s.median),
            cx + half,
            y(s.median)
        );
        let _ = writeln!(
            svg,
            r#"<circle class="mean" cx="{cx}" cy="{:.2}" r="3" fill="white" stroke="black"/>"#,
            y(s.mean)
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{SweepRow, ThresholdSpec};

    fn table(measure: Measure, spec: ThresholdSpec, values: &[f64]) -> SweepTable {
        SweepTable {
            network: "net".into(),
            measure,
            spec,
            rows: values
                .iter()
                .enumerate()
                .map(|(i, &v)| SweepRow {
                    fraction: 0.1 * (i + 1) as f64,
                    mean_activation: v,
                    std_activation: 0.05,
                    seed_count: 1,
                    runs: 1,
                })
                .collect(),
        }
    }

    const FIXED: ThresholdSpec = ThresholdSpec::Fixed { theta: 0.4 };

    #[test]
    fn one_polyline_per_measure() {
        let svg = emit_curves(
            "net",
            &[table(Measure::Comm, FIXED, &[0.1, 0.3, 0.5]), table(Measure::Mv, FIXED, &[0.2, 0.4, 0.6])],
        )
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(!svg.contains("class=\"band\""));
        assert!(svg.contains(">0.5</text>"));
        assert!(svg.contains(">1</text>"));
    }

    #[test]
    fn random_threshold_adds_band() {
        let spec = ThresholdSpec::Random { master_seed: 1 };
        let svg = emit_curves("net", &[table(Measure::Cbm, spec, &[0.1, 0.2])]).unwrap();
        assert_eq!(svg.matches("class=\"band\"").count(), 1);
    }

    #[test]
    fn constant_top_series_is_horizontal_at_top() {
        let svg = emit_curves("net", &[table(Measure::Pc, FIXED, &[1.0, 1.0, 1.0])]).unwrap();
        let top = format!("{:.2}", TOP);
        let line = svg.lines().find(|l| l.contains("<polyline")).unwrap();
        let points = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert!(points.split(' ').all(|p| p.ends_with(&format!(",{top}"))));
    }

    #[test]
    fn empty_tables_rejected() {
        assert!(matches!(emit_curves("x", &[]), Err(Error::EmptyTable(_))));
    }

    #[test]
    fn quartiles() {
        let s = box_stats(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.min, s.median, s.max, s.mean), (1.0, 2.0, 3.0, 2.0));
        assert_eq!((s.q1, s.q3), (1.5, 2.5));
        let flat = box_stats(&[4.0; 5]).unwrap();
        assert_eq!((flat.q1, flat.q3), (4.0, 4.0));
        assert!(box_stats(&[]).is_none());
    }

    #[test]
    fn boxes_per_measure() {
        let measures = Measure::ALL.to_vec();
        let ranks: Vec<Vec<usize>> = (1..=7).map(|r| vec![r; 13]).collect();
        let svg = emit_rank_boxes("fixed-0.4", &measures, &ranks).unwrap();
        assert_eq!(svg.matches("class=\"box\"").count(), 7);
        // identical ranks everywhere: zero-height boxes
        assert!(svg.contains("height=\"0.00\""));
    }

    #[test]
    fn single_election_degenerates_to_points() {
        let svg = emit_rank_boxes("t", &[Measure::Comm, Measure::Mv], &[vec![1], vec![2]]).unwrap();
        assert_eq!(svg.matches("class=\"box\"").count(), 2);
    }
}
