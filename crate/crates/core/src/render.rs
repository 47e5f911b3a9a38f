//! Deterministic SVG figures and graph interchange formats.
//!
//! Every function here is a pure function of its inputs: no clocks, no
//! ambient randomness, fixed number formatting. Repeated calls produce
//! byte-identical output.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::{AlignmentMatrix, IndexReport};
use crate::analytics::MeanMatrix;
use crate::network::{CommunityPartition, Edge, Node, PolicyNetwork, Provenance};
use crate::taxonomy::{parse_component, ComponentId, ComponentKind};

/// Iterations of the force-directed layout.
pub const LAYOUT_ITERATIONS: usize = 500;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("cannot render an empty grid")]
    EmptyGrid,
    #[error("grid is ragged: row {row} has {got} values, expected {expected}")]
    RaggedGrid { row: usize, got: usize, expected: usize },
    #[error("value at {0} is not a finite number")]
    NonFinite(String),
    #[error("bar values must be non-negative (`{0}`)")]
    NegativeBar(String),
    #[error("invalid colour `{0}` (expected #RRGGBB)")]
    BadColor(String),
    #[error("invalid node-link document: {0}")]
    NodeLink(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn parse(hex: &str) -> Result<Rgb, RenderError> {
        let bad = || RenderError::BadColor(hex.to_string());
        let digits = hex.strip_prefix('#').ok_or_else(bad)?;
        if digits.len() != 6 || !digits.is_ascii() {
            return Err(bad());
        }
        let channel = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).map_err(|_| bad());
        Ok(Rgb(channel(0)?, channel(2)?, channel(4)?))
    }

    pub fn hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

/// Two-stop colour ramp, linear per sRGB channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    pub low: Rgb,
    pub high: Rgb,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            low: Rgb(0xF7, 0xFB, 0xFF),
            high: Rgb(0x08, 0x30, 0x6B),
        }
    }
}

impl Palette {
    /// Colour at `fraction` in [0, 1] (clamped). The endpoints return the
    /// palette colours exactly.
    pub fn at(&self, fraction: f64) -> Rgb {
        let t = fraction.clamp(0.0, 1.0);
        let mix = |a: u8, b: u8| (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8;
        Rgb(
            mix(self.low.0, self.high.0),
            mix(self.low.1, self.high.1),
            mix(self.low.2, self.high.2),
        )
    }
}

/// How grid values map onto the palette.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapScale {
    /// Alignment scores: fraction `s / 3`.
    Score,
    /// Arbitrary reals: `(v - min) / (max - min)` over the grid.
    Relative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    pub title: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub scale: HeatmapScale,
}

fn component_labels(ids: &[ComponentId]) -> Vec<String> {
    ids.iter().map(|c| c.display_name().to_string()).collect()
}

impl HeatmapGrid {
    pub fn from_matrix(title: impl Into<String>, m: &AlignmentMatrix) -> Self {
        HeatmapGrid {
            title: title.into(),
            row_labels: component_labels(&m.rows),
            col_labels: component_labels(&m.cols),
            values: m.values(),
            scale: HeatmapScale::Score,
        }
    }

    pub fn from_mean_matrix(title: impl Into<String>, m: &MeanMatrix) -> Self {
        HeatmapGrid {
            title: title.into(),
            row_labels: component_labels(&m.rows),
            col_labels: component_labels(&m.cols),
            values: m.values.clone(),
            scale: HeatmapScale::Score,
        }
    }

    /// Country-by-index comparison table. Mean alignment is divided by 3 so
    /// every column lies in [0, 1].
    pub fn from_index_reports(title: impl Into<String>, reports: &[IndexReport]) -> Self {
        HeatmapGrid {
            title: title.into(),
            row_labels: reports.iter().map(|r| r.country.clone()).collect(),
            col_labels: [
                "objective coverage",
                "implementation specificity",
                "strategic alignment",
                "alignment coverage",
                "mean alignment / 3",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            values: reports
                .iter()
                .map(|r| {
                    vec![
                        r.objective_coverage,
                        r.implementation_specificity,
                        r.strategic_alignment,
                        r.alignment_coverage,
                        r.mean_alignment / 3.0,
                    ]
                })
                .collect(),
            scale: HeatmapScale::Relative,
        }
    }

    fn check(&self) -> Result<(), RenderError> {
        if self.values.is_empty() || self.values[0].is_empty() {
            return Err(RenderError::EmptyGrid);
        }
        let expected = self.col_labels.len();
        for (row, values) in self.values.iter().enumerate() {
            if values.len() != expected {
                return Err(RenderError::RaggedGrid {
                    row,
                    got: values.len(),
                    expected,
                });
            }
            if let Some(j) = values.iter().position(|v| !v.is_finite()) {
                return Err(RenderError::NonFinite(format!("({row}, {j})")));
            }
        }
        if self.row_labels.len() != self.values.len() {
            return Err(RenderError::RaggedGrid {
                row: self.row_labels.len(),
                got: self.values.len(),
                expected: self.row_labels.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn svg_open(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="Helvetica, Arial, sans-serif">"#
    );
    let _ = writeln!(out, r##"<rect class="background" x="0" y="0" width="{width:.0}" height="{height:.0}" fill="#FFFFFF"/>"##);
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e9 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

/// Render a labelled grid as an SVG heatmap with a legend. Each cell carries
/// its value in a `<title>` tooltip.
pub fn render_heatmap(grid: &HeatmapGrid, palette: &Palette) -> Result<String, RenderError> {
    grid.check()?;
    const CELL_W: f64 = 36.0;
    const CELL_H: f64 = 26.0;
    const LEFT: f64 = 250.0;
    const TOP: f64 = 200.0;
    let rows = grid.values.len();
    let cols = grid.col_labels.len();
    let (min, max) = grid
        .values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let fraction = |v: f64| match grid.scale {
        HeatmapScale::Score => v / 3.0,
        HeatmapScale::Relative if max > min => (v - min) / (max - min),
        HeatmapScale::Relative => 0.0,
    };
    let legend_steps: Vec<f64> = match grid.scale {
        HeatmapScale::Score => vec![0.0, 1.0, 2.0, 3.0],
        HeatmapScale::Relative => (0..5).map(|i| min + (max - min) * f64::from(i) / 4.0).collect(),
    };
    let width = LEFT + CELL_W * cols as f64 + 170.0;
    let height = TOP + CELL_H * rows as f64 + 90.0;

    let mut out = String::new();
    svg_open(&mut out, width.max(520.0), height);
    let _ = writeln!(
        out,
        r#"<text class="title" x="12" y="24" font-size="16" font-weight="bold">{}</text>"#,
        escape(&grid.title)
    );
    for (j, label) in grid.col_labels.iter().enumerate() {
        let x = LEFT + CELL_W * (j as f64 + 0.5);
        let y = TOP - 8.0;
        let _ = writeln!(
            out,
            r#"<text class="col-label" x="{x:.2}" y="{y:.2}" font-size="11" transform="rotate(-60 {x:.2} {y:.2})">{}</text>"#,
            escape(label)
        );
    }
    for (i, label) in grid.row_labels.iter().enumerate() {
        let y = TOP + CELL_H * (i as f64 + 0.5) + 4.0;
        let _ = writeln!(
            out,
            r#"<text class="row-label" x="{:.2}" y="{y:.2}" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            escape(label)
        );
    }
    for (i, row) in grid.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let x = LEFT + CELL_W * j as f64;
            let y = TOP + CELL_H * i as f64;
            let _ = writeln!(
                out,
                r##"<rect class="cell" x="{x:.2}" y="{y:.2}" width="{CELL_W:.2}" height="{CELL_H:.2}" fill="{}" stroke="#FFFFFF" stroke-width="1"><title>{} / {}: {}</title></rect>"##,
                palette.at(fraction(v)).hex(),
                escape(&grid.row_labels[i]),
                escape(&grid.col_labels[j]),
                fmt_value(v)
            );
        }
    }
    let legend_y = TOP + CELL_H * rows as f64 + 30.0;
    let _ = writeln!(out, r#"<g class="legend">"#);
    for (k, &v) in legend_steps.iter().enumerate() {
        let x = LEFT + 70.0 * k as f64;
        let _ = writeln!(
            out,
            r##"<rect class="legend-swatch" x="{x:.2}" y="{legend_y:.2}" width="24.00" height="16.00" fill="{}" stroke="#999999"/>"##,
            palette.at(fraction(v)).hex()
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            x + 28.0,
            legend_y + 12.0,
            fmt_value(v)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Seed for the pseudo-random initial layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LayoutSeed(pub u64);

impl Default for LayoutSeed {
    fn default() -> Self {
        LayoutSeed(DEFAULT_SEED)
    }
}

/// Fill colour per component kind.
pub fn kind_color(kind: ComponentKind) -> &'static str {
    match kind {
        ComponentKind::Objective => "#D62728",
        ComponentKind::Foresight => "#1F77B4",
        ComponentKind::Instrument => "#2CA02C",
    }
}

const LAYOUT_SIZE: f64 = 700.0;

/// Fruchterman-Reingold layout with a fixed iteration budget and linear
/// cooling. Coordinates lie in `[0, 700]^2`.
pub fn layout(network: &PolicyNetwork, seed: LayoutSeed) -> Vec<(f64, f64)> {
    let n = network.nodes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            (x * LAYOUT_SIZE, y * LAYOUT_SIZE)
        })
        .collect();
    if n < 2 {
        return pos.into_iter().map(|_| (LAYOUT_SIZE / 2.0, LAYOUT_SIZE / 2.0)).collect();
    }
    let k = (LAYOUT_SIZE * LAYOUT_SIZE / n as f64).sqrt();
    let max_w = network.max_weight().max(1e-12);
    let t0 = LAYOUT_SIZE / 10.0;
    for iter in 0..LAYOUT_ITERATIONS {
        let temp = t0 * (1.0 - iter as f64 / LAYOUT_ITERATIONS as f64);
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = (dx * dx + dy * dy).sqrt().max(0.01);
                let f = k * k / d;
                let (ux, uy) = (dx / d, dy / d);
                disp[i].0 += ux * f;
                disp[i].1 += uy * f;
                disp[j].0 -= ux * f;
                disp[j].1 -= uy * f;
            }
        }
        for e in &network.edges {
            let (i, j) = (e.source, e.target);
            let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
            let d = (dx * dx + dy * dy).sqrt().max(0.01);
            let f = d * d / k * (e.weight / max_w);
            let (ux, uy) = (dx / d, dy / d);
            disp[i].0 -= ux * f;
            disp[i].1 -= uy * f;
            disp[j].0 += ux * f;
            disp[j].1 += uy * f;
        }
        for (p, (dx, dy)) in pos.iter_mut().zip(disp) {
            // mild pull to the centre keeps disconnected parts on canvas
            let (cx, cy) = (LAYOUT_SIZE / 2.0 - p.0, LAYOUT_SIZE / 2.0 - p.1);
            let (dx, dy) = (dx + 0.01 * cx * k / 10.0, dy + 0.01 * cy * k / 10.0);
            let len = (dx * dx + dy * dy).sqrt();
            if len > 0.0 {
                let step = len.min(temp);
                p.0 = (p.0 + dx / len * step).clamp(0.0, LAYOUT_SIZE);
                p.1 = (p.1 + dy / len * step).clamp(0.0, LAYOUT_SIZE);
            }
        }
    }
    fit(&mut pos);
    pos
}

/// Scale and centre coordinates to span the layout frame, same factor on
/// both axes.
fn fit(pos: &mut [(f64, f64)]) {
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for &(x, y) in pos.iter() {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    if span <= 0.0 {
        return;
    }
    let scale = LAYOUT_SIZE / span;
    let offset = ((LAYOUT_SIZE - (hi.0 - lo.0) * scale) / 2.0, (LAYOUT_SIZE - (hi.1 - lo.1) * scale) / 2.0);
    for p in pos.iter_mut() {
        *p = ((p.0 - lo.0) * scale + offset.0, (p.1 - lo.1) * scale + offset.1);
    }
}

/// Draw the network: radius proportional to node size, fill by kind, stroke
/// width proportional to edge weight. Edges lighter than `min_weight` are
/// omitted.
pub fn render_network(network: &PolicyNetwork, seed: LayoutSeed, min_weight: Option<f64>) -> String {
    const MARGIN: f64 = 110.0;
    const TOP: f64 = 90.0;
    const MAX_RADIUS: f64 = 22.0;
    const MAX_STROKE: f64 = 6.0;
    let width = LAYOUT_SIZE + 2.0 * MARGIN;
    let height = LAYOUT_SIZE + TOP + MARGIN;
    let pos = layout(network, seed);
    let max_size = network.nodes.iter().map(|n| n.size).fold(0.0, f64::max);
    let max_w = network.max_weight();

    let mut out = String::new();
    svg_open(&mut out, width, height);
    let _ = writeln!(out, r#"<g class="legend">"#);
    for (k, kind) in ComponentKind::ALL.iter().enumerate() {
        let x = 20.0 + 170.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect class="legend-swatch" x="{:.2}" y="22.00" width="16.00" height="16.00" fill="{}"/>"#,
            x + 8.0,
            kind_color(*kind)
        );
        let label = match kind {
            ComponentKind::Objective => "strategic objective",
            ComponentKind::Foresight => "foresight method",
            ComponentKind::Instrument => "instrument",
        };
        let _ = writeln!(out, r#"<text x="{:.2}" y="34.00" font-size="12">{label}</text>"#, x + 22.0);
    }
    let _ = writeln!(out, "</g>");
    let place = |i: usize| (pos[i].0 + MARGIN, pos[i].1 + TOP);
    for e in &network.edges {
        if min_weight.is_some_and(|m| e.weight < m) {
            continue;
        }
        let (x1, y1) = place(e.source);
        let (x2, y2) = place(e.target);
        let stroke = MAX_STROKE * e.weight / max_w;
        let _ = writeln!(
            out,
            r##"<line class="edge" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#888888" stroke-opacity="0.6" stroke-width="{stroke:.2}"><title>{} - {}: {}</title></line>"##,
            network.nodes[e.source].component,
            network.nodes[e.target].component,
            fmt_value(e.weight)
        );
    }
    for (i, node) in network.nodes.iter().enumerate() {
        let (x, y) = place(i);
        let r = if max_size > 0.0 { MAX_RADIUS * node.size / max_size } else { 0.0 };
        let _ = writeln!(
            out,
            r##"<circle class="node" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{}" stroke="#333333" stroke-width="0.5"><title>{} ({}): size {}</title></circle>"##,
            kind_color(node.component.kind()),
            node.component.display_name(),
            node.component,
            fmt_value(node.size)
        );
        let _ = writeln!(
            out,
            r#"<text class="node-label" x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            x,
            y + r + 11.0,
            escape(node.component.display_name())
        );
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Vertical,
    Horizontal,
}

/// Bar chart scaled so the largest value fills the plot extent.
pub fn render_bars(title: &str, series: &[(String, f64)], orientation: Orientation) -> Result<String, RenderError> {
    for (label, v) in series {
        if !v.is_finite() {
            return Err(RenderError::NonFinite(label.clone()));
        }
        if *v < 0.0 {
            return Err(RenderError::NegativeBar(label.clone()));
        }
    }
    const EXTENT: f64 = 300.0;
    const BAR: f64 = 22.0;
    const GAP: f64 = 8.0;
    const LABEL: f64 = 240.0;
    let max = series.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let length = |v: f64| if max > 0.0 { EXTENT * v / max } else { 0.0 };
    let count = series.len() as f64;
    let span = count * (BAR + GAP);

    let mut out = String::new();
    match orientation {
        Orientation::Vertical => {
            let (left, top) = (60.0, 50.0);
            let base = top + EXTENT;
            svg_open(&mut out, (left + span + 40.0).max(400.0), base + 140.0);
            let _ = writeln!(out, r#"<text class="title" x="12" y="24" font-size="16" font-weight="bold">{}</text>"#, escape(title));
            let _ = writeln!(
                out,
                r##"<line class="axis" x1="{left:.2}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="#333333"/>"##,
                left + span
            );
            for (i, (label, v)) in series.iter().enumerate() {
                let h = length(*v);
                let x = left + GAP / 2.0 + (BAR + GAP) * i as f64;
                let _ = writeln!(
                    out,
                    r##"<rect class="bar" x="{x:.2}" y="{:.2}" width="{BAR:.2}" height="{h:.2}" fill="#3A6FB0"><title>{}: {}</title></rect>"##,
                    base - h,
                    escape(label),
                    fmt_value(*v)
                );
                let _ = writeln!(
                    out,
                    r#"<text class="bar-value" x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle">{}</text>"#,
                    x + BAR / 2.0,
                    base - h - 4.0,
                    fmt_value(*v)
                );
                let lx = x + BAR / 2.0;
                let ly = base + 10.0;
                let _ = writeln!(
                    out,
                    r#"<text class="bar-label" x="{lx:.2}" y="{ly:.2}" font-size="10" transform="rotate(60 {lx:.2} {ly:.2})">{}</text>"#,
                    escape(label)
                );
            }
        }
        Orientation::Horizontal => {
            let (left, top) = (LABEL, 50.0);
            svg_open(&mut out, left + EXTENT + 80.0, (top + span + 30.0).max(120.0));
            let _ = writeln!(out, r#"<text class="title" x="12" y="24" font-size="16" font-weight="bold">{}</text>"#, escape(title));
            let _ = writeln!(
                out,
                r##"<line class="axis" x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{:.2}" stroke="#333333"/>"##,
                top + span
            );
            for (i, (label, v)) in series.iter().enumerate() {
                let w = length(*v);
                let y = top + GAP / 2.0 + (BAR + GAP) * i as f64;
                let _ = writeln!(
                    out,
                    r##"<rect class="bar" x="{left:.2}" y="{y:.2}" width="{w:.2}" height="{BAR:.2}" fill="#3A6FB0"><title>{}: {}</title></rect>"##,
                    escape(label),
                    fmt_value(*v)
                );
                let _ = writeln!(
                    out,
                    r#"<text class="bar-value" x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
                    left + w + 4.0,
                    y + BAR / 2.0 + 4.0,
                    fmt_value(*v)
                );
                let _ = writeln!(
                    out,
                    r#"<text class="bar-label" x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                    left - 6.0,
                    y + BAR / 2.0 + 4.0,
                    escape(label)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    GraphMl,
    Dot,
    NodeLinkJson,
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Dot => "dot",
            GraphFormat::NodeLinkJson => "json",
        }
    }
}

/// Serialize the network; node attributes are code, kind, size and (when a
/// partition is supplied) community; edges carry weight.
pub fn export_graph(network: &PolicyNetwork, communities: Option<&CommunityPartition>, format: GraphFormat) -> String {
    let community = |i: usize| communities.map(|p| p.assignment[i]);
    match format {
        GraphFormat::GraphMl => graphml(network, &community),
        GraphFormat::Dot => dot(network, &community),
        GraphFormat::NodeLinkJson => {
            let doc = NodeLinkDoc {
                directed: false,
                multigraph: false,
                graph: NodeLinkGraph {
                    provenance: network.provenance,
                },
                nodes: network
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(i, n)| NodeLinkNode {
                        id: n.component.code().to_string(),
                        kind: n.component.kind(),
                        size: n.size,
                        community: community(i),
                    })
                    .collect(),
                links: network
                    .edges
                    .iter()
                    .map(|e| NodeLinkEdge {
                        source: network.nodes[e.source].component.code().to_string(),
                        target: network.nodes[e.target].component.code().to_string(),
                        weight: e.weight,
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("node-link serializes");
            s.push('\n');
            s
        }
    }
}

fn graphml(network: &PolicyNetwork, community: &dyn Fn(usize) -> Option<usize>) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(concat!(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" ",
        "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" ",
        "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns ",
        "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
    ));
    out.push_str("  <key id=\"code\" for=\"node\" attr.name=\"code\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n");
    let with_community = community(0).is_some();
    if with_community {
        out.push_str("  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n");
    }
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for (i, n) in network.nodes.iter().enumerate() {
        let _ = writeln!(out, "    <node id=\"n{i}\">");
        let _ = writeln!(out, "      <data key=\"code\">{}</data>", escape(n.component.code()));
        let _ = writeln!(out, "      <data key=\"kind\">{}</data>", n.component.kind());
        let _ = writeln!(out, "      <data key=\"size\">{}</data>", n.size);
        if let Some(c) = community(i) {
            let _ = writeln!(out, "      <data key=\"community\">{c}</data>");
        }
        out.push_str("    </node>\n");
    }
    for (k, e) in network.edges.iter().enumerate() {
        let _ = writeln!(out, "    <edge id=\"e{k}\" source=\"n{}\" target=\"n{}\">", e.source, e.target);
        let _ = writeln!(out, "      <data key=\"weight\">{}</data>", e.weight);
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot(network: &PolicyNetwork, community: &dyn Fn(usize) -> Option<usize>) -> String {
    let mut out = String::from("graph policy_network {\n");
    for (i, n) in network.nodes.iter().enumerate() {
        let _ = write!(
            out,
            "  n{i} [code=\"{}\", kind=\"{}\", size={}",
            n.component.code(),
            n.component.kind(),
            n.size
        );
        if let Some(c) = community(i) {
            let _ = write!(out, ", community={c}");
        }
        out.push_str("];\n");
    }
    for e in &network.edges {
        let _ = writeln!(out, "  n{} -- n{} [weight={}];", e.source, e.target, e.weight);
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeLinkDoc {
    directed: bool,
    multigraph: bool,
    graph: NodeLinkGraph,
    nodes: Vec<NodeLinkNode>,
    links: Vec<NodeLinkEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeLinkGraph {
    provenance: Provenance,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeLinkNode {
    id: String,
    kind: ComponentKind,
    size: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    community: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeLinkEdge {
    source: String,
    target: String,
    weight: f64,
}

/// Load a node-link JSON document written by [`export_graph`]. Returns the
/// network and the community assignment if every node carries one.
pub fn import_node_link(json: &str) -> Result<(PolicyNetwork, Option<Vec<usize>>), RenderError> {
    let err = |m: String| RenderError::NodeLink(m);
    let doc: NodeLinkDoc = serde_json::from_str(json).map_err(|e| err(e.to_string()))?;
    if doc.directed || doc.multigraph {
        return Err(err("only undirected simple graphs are supported".into()));
    }
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for n in &doc.nodes {
        let component = parse_component(&n.id).map_err(|e| err(e.to_string()))?;
        if component.kind() != n.kind {
            return Err(err(format!("node {} declared as {}", n.id, n.kind)));
        }
        nodes.push(Node {
            component,
            size: n.size,
        });
    }
    let index = |code: &str| {
        doc.nodes
            .iter()
            .position(|n| n.id == code)
            .ok_or_else(|| err(format!("link references unknown node {code}")))
    };
    let mut edges = Vec::with_capacity(doc.links.len());
    for l in &doc.links {
        let (a, b) = (index(&l.source)?, index(&l.target)?);
        edges.push(Edge {
            source: a.min(b),
            target: a.max(b),
            weight: l.weight,
        });
    }
    let network = PolicyNetwork {
        nodes,
        edges,
        provenance: doc.graph.provenance,
    };
    network.check().map_err(err)?;
    let communities: Option<Vec<usize>> = doc.nodes.iter().map(|n| n.community).collect();
    Ok((network, communities))
}
