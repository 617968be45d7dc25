//! Deterministic SVG charts of spectral sequence pages in Adams coordinates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Bidegree;
use crate::picard::{PicEntryKind, PicPage};
use crate::specseq::{shift, PageRecord, SpectralSequence, Window};

const CELL: i32 = 36;
const MARGIN: i32 = 48;
const LEGEND_HEIGHT: i32 = 64;
const RADIUS: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Glyph {
    /// One `k`-summand.
    Circle,
    /// A finite group on the `t = 0` row.
    Square,
    /// Units and their quotients.
    Diamond,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartEntry {
    pub stem: i32,
    pub s: i32,
    pub glyph: Glyph,
    pub count: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartArrow {
    pub from: (i32, i32),
    pub to: (i32, i32),
    pub r: u32,
}

/// Everything needed to draw one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub title: String,
    pub stems: (i32, i32),
    pub filtrations: (i32, i32),
    pub entries: Vec<ChartEntry>,
    pub arrows: Vec<ChartArrow>,
}

impl ChartSpec {
    /// Page `E_r` of a spectral sequence; arrows are the nonzero `d_r` blocks.
    pub fn from_sequence(ss: &SpectralSequence, r: u32) -> Self {
        let w = ss.window();
        let mut entries = Vec::new();
        for (b, e) in ss.certified(r) {
            if e.dim() > 0 {
                let (stem, s) = b.adams();
                let label = e
                    .labels()
                    .into_iter()
                    .map(|m| ss.ring().format_monomial(m))
                    .collect::<Vec<_>>()
                    .join(", ");
                entries.push(ChartEntry {
                    stem,
                    s,
                    glyph: Glyph::Circle,
                    count: e.dim(),
                    label,
                });
            }
        }
        let mut arrows = Vec::new();
        if let Some(page) = ss.page(r) {
            for (&b, m) in &page.differentials {
                let target = b + shift(r);
                if m.is_zero() || !w.contains(b) || !w.contains(target) {
                    continue;
                }
                arrows.push(ChartArrow {
                    from: b.adams(),
                    to: target.adams(),
                    r,
                });
            }
        }
        ChartSpec {
            title: format!(
                "{} over {}: {} E{}",
                ss.group(),
                ss.ring().ground(),
                ss.variant(),
                r
            ),
            stems: (w.t.0 - w.s.1, w.t.1 - w.s.0),
            filtrations: w.s,
            entries: sorted(entries),
            arrows,
        }
    }

    /// A page loaded from a record; `window` bounds the grid.
    pub fn from_record(record: &PageRecord, window: Window, title: &str) -> Self {
        let entries = record
            .entries
            .iter()
            .map(|e| {
                let (stem, s) = Bidegree::new(e.s, e.t).adams();
                ChartEntry {
                    stem,
                    s,
                    glyph: Glyph::Circle,
                    count: e.basis.len(),
                    label: e.basis.join(", "),
                }
            })
            .collect();
        let arrows = record
            .differentials
            .iter()
            .filter(|d| window.contains(Bidegree::new(d.target[0], d.target[1])))
            .map(|d| ChartArrow {
                from: Bidegree::new(d.source[0], d.source[1]).adams(),
                to: Bidegree::new(d.target[0], d.target[1]).adams(),
                r: record.r,
            })
            .collect();
        ChartSpec {
            title: title.to_string(),
            stems: (window.t.0 - window.s.1, window.t.1 - window.s.0),
            filtrations: window.s,
            entries: sorted(entries),
            arrows,
        }
    }

    /// A Picard page; `(s, t)` is drawn at stem `t - s`.
    pub fn from_pic(page: &PicPage, title: &str) -> Self {
        let mut entries = Vec::new();
        for (&(s, t), e) in &page.entries {
            let units = matches!(e.kind, PicEntryKind::Units { .. } | PicEntryKind::UnitsQuotient { .. });
            if e.is_zero() && !units {
                continue;
            }
            let (glyph, count, label) = match &e.kind {
                PicEntryKind::VectorSpace { dim, .. } => (Glyph::Circle, *dim, e.labels.join(", ")),
                PicEntryKind::Finite { group } if t == 0 => (Glyph::Square, 1, group.to_string()),
                PicEntryKind::Finite { group } => (Glyph::Circle, 1, group.to_string()),
                PicEntryKind::Units { group } => (Glyph::Diamond, 1, format!("k^× = {group}")),
                PicEntryKind::UnitsQuotient { group, exponent } => {
                    (Glyph::Diamond, 1, format!("k^×/(k^×)^{exponent} = {group}"))
                }
            };
            let (stem, s) = Bidegree::new(s, t).adams();
            entries.push(ChartEntry {
                stem,
                s,
                glyph,
                count,
                label,
            });
        }
        let w = page.window;
        ChartSpec {
            title: title.to_string(),
            stems: (w.t.0.max(0) - w.s.1, w.t.1 - w.s.0.max(0)),
            filtrations: (w.s.0.max(0), w.s.1),
            entries: sorted(entries),
            arrows: Vec::new(),
        }
    }
}

fn sorted(mut entries: Vec<ChartEntry>) -> Vec<ChartEntry> {
    entries.sort_by_key(|e| (e.stem, e.s));
    entries
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the chart. Output depends only on the spec.
pub fn emit_svg(spec: &ChartSpec) -> String {
    let (x0, x1) = spec.stems;
    let (y0, y1) = spec.filtrations;
    let width = (x1 - x0 + 1) * CELL + 2 * MARGIN;
    let grid_height = (y1 - y0 + 1) * CELL;
    let height = grid_height + 2 * MARGIN + LEGEND_HEIGHT;
    let px = |stem: i32| MARGIN + (stem - x0) * CELL + CELL / 2;
    let py = |s: i32| MARGIN + (y1 - s) * CELL + CELL / 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(&spec.title));
    let _ = writeln!(
        out,
        r#"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="black"/></marker></defs>"#
    );
    let _ = writeln!(out, r##"<g id="grid" stroke="#ddd" stroke-width="1">"##);
    for stem in x0..=x1 {
        let x = px(stem);
        let _ = writeln!(out, r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, MARGIN, MARGIN + grid_height);
    }
    for s in y0..=y1 {
        let y = py(s);
        let _ = writeln!(out, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#, MARGIN, width - MARGIN);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="axes" fill="#555" text-anchor="middle">"##);
    for stem in x0..=x1 {
        let _ = writeln!(out, r#"<text x="{}" y="{}">{stem}</text>"#, px(stem), MARGIN + grid_height + 14);
    }
    for s in y0..=y1 {
        let _ = writeln!(out, r#"<text x="{}" y="{}">{s}</text>"#, MARGIN - 14, py(s) + 4);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="classes">"#);
    for e in &spec.entries {
        let (cx, cy) = (px(e.stem), py(e.s));
        let _ = writeln!(out, r#"<g><title>{}</title>"#, escape(&e.label));
        match e.glyph {
            Glyph::Circle => {
                let n = e.count as i32;
                for i in 0..n {
                    let x = cx + (2 * i - (n - 1)) * (RADIUS + 1);
                    let _ = writeln!(out, r#"<circle cx="{x}" cy="{cy}" r="{RADIUS}" fill="black"/>"#);
                }
            }
            Glyph::Square => {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="black"/>"#,
                    cx - RADIUS,
                    cy - RADIUS,
                    2 * RADIUS,
                    2 * RADIUS
                );
            }
            Glyph::Diamond => {
                let d = RADIUS + 1;
                let _ = writeln!(
                    out,
                    r#"<polygon points="{},{cy} {cx},{} {},{cy} {cx},{}" fill="black"/>"#,
                    cx - d,
                    cy - d,
                    cx + d,
                    cy + d
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="differentials" stroke="black" stroke-width="1.2">"#);
    for a in &spec.arrows {
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" marker-end="url(#head)"><title>d{}</title></line>"#,
            px(a.from.0),
            py(a.from.1),
            px(a.to.0),
            py(a.to.1),
            a.r
        );
    }
    let _ = writeln!(out, "</g>");
    let ly = MARGIN + grid_height + 32;
    let _ = writeln!(out, r#"<g id="legend">"#);
    let _ = writeln!(out, r#"<circle cx="{}" cy="{ly}" r="{RADIUS}" fill="black"/>"#, MARGIN);
    let _ = writeln!(out, r#"<text x="{}" y="{}">one k-summand</text>"#, MARGIN + 10, ly + 4);
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="black"/>"#,
        MARGIN + 120 - RADIUS,
        ly - RADIUS,
        2 * RADIUS,
        2 * RADIUS
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}">finite group</text>"#, MARGIN + 130, ly + 4);
    let _ = writeln!(
        out,
        r#"<polygon points="{},{ly} {},{} {},{ly} {},{}" fill="black"/>"#,
        MARGIN + 235,
        MARGIN + 240,
        ly - 5,
        MARGIN + 245,
        MARGIN + 240,
        ly + 5
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}">units</text>"#, MARGIN + 250, ly + 4);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">x = t - s, y = s; arrows are nonzero differentials</text>"#,
        MARGIN,
        ly + 22
    );
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}
