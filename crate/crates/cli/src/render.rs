//! Plain SVG 1.1 output. Coordinates are only used for display, so they go
//! through `f64`.

use std::collections::BTreeMap;
use std::fmt::Write;

use sgewalk::geometry::Embedding;
use sgewalk::sge::{verify_simultaneous, DrawingViolation, Edge, GraphCollection};
use sgewalk::walk::DirectionalWalk;
use sgewalk::Result;

pub enum Overlay {
    None,
    Walk(DirectionalWalk),
    Collection(GraphCollection),
}

pub struct Drawing {
    pub svg: String,
    /// Number of single-graph violations drawn in red.
    pub highlighted: usize,
}

const SIZE: f64 = 800.0;
const PAD: f64 = 60.0;
const HIGHLIGHT: &str = "#d62728";

struct Viewport {
    min: (f64, f64),
    scale: f64,
    offset: (f64, f64),
}

impl Viewport {
    fn fit(points: &BTreeMap<String, (f64, f64)>) -> Self {
        let xs = points.values().map(|p| p.0);
        let ys = points.values().map(|p| p.1);
        let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
        if !x0.is_finite() {
            return Viewport { min: (0.0, 0.0), scale: 1.0, offset: (SIZE / 2.0, SIZE / 2.0) };
        }
        let (w, h) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
        let scale = ((SIZE - 2.0 * PAD) / w).min((SIZE - 2.0 * PAD) / h);
        // centre the drawing in the unused direction
        let offset = (PAD + (SIZE - 2.0 * PAD - w * scale) / 2.0, PAD + (SIZE - 2.0 * PAD - h * scale) / 2.0);
        Viewport { min: (x0, y1), scale, offset }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        (self.offset.0 + (p.0 - self.min.0) * self.scale, self.offset.1 + (self.min.1 - p.1) * self.scale)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;").replace('\'', "&apos;")
}

fn color(i: usize) -> String {
    format!("hsl({:.0}, 65%, 42%)", (i as f64 * 137.508) % 360.0)
}

fn line(svg: &mut String, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64, extra: &str) {
    let _ = writeln!(
        svg,
        r#"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="{width}"{extra}/>"#,
        a.0, a.1, b.0, b.1
    );
}

pub fn render_svg(emb: &Embedding, overlay: &Overlay) -> Result<Drawing> {
    let approx: BTreeMap<String, (f64, f64)> = emb.iter().map(|(n, p)| (n.clone(), p.to_f64())).collect();
    let view = Viewport::fit(&approx);
    let at = |name: &str| -> Result<(f64, f64)> {
        emb.get(name)?;
        Ok(view.map(approx[name]))
    };
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let mut highlighted = 0;
    let mut flagged_vertices: Vec<String> = Vec::new();

    match overlay {
        Overlay::None => {}
        Overlay::Walk(w) => {
            let pts: Vec<(f64, f64)> = w.sequence().iter().map(|n| at(n)).collect::<Result<_>>()?;
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                svg,
                r##"  <polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2" stroke-opacity="0.7"/>"##,
                path.join(" ")
            );
            // stack the letters of repeated visits above each other
            let mut visits: BTreeMap<&str, usize> = BTreeMap::new();
            for (k, d) in w.turns().iter().enumerate() {
                let name = w.sequence()[k + 1].as_str();
                let stack = visits.entry(name).or_default();
                let (x, y) = pts[k + 1];
                let _ = writeln!(
                    svg,
                    r##"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11" fill="#1f77b4">{}:{}</text>"##,
                    x + 8.0,
                    y + 14.0 + 12.0 * *stack as f64,
                    k + 1,
                    d.letter()
                );
                *stack += 1;
            }
        }
        Overlay::Collection(coll) => {
            let report = verify_simultaneous(coll, emb)?;
            let mut bad_edges: BTreeMap<&str, Vec<&Edge>> = BTreeMap::new();
            for g in &report.graphs {
                for v in &g.violations {
                    highlighted += 1;
                    let edges = bad_edges.entry(g.graph.as_str()).or_default();
                    match v {
                        DrawingViolation::EdgeCrossing { first, second, .. } => edges.extend([first, second]),
                        DrawingViolation::VertexOnEdge { vertex, edge } => {
                            edges.push(edge);
                            flagged_vertices.push(vertex.clone());
                        }
                        DrawingViolation::Coincident { first, second } => {
                            flagged_vertices.extend([first.clone(), second.clone()])
                        }
                    }
                }
            }
            for (i, g) in coll.graphs().iter().enumerate() {
                let stroke = color(i);
                for (a, b) in &g.edges {
                    line(&mut svg, at(a)?, at(b)?, &stroke, 1.5, "");
                }
                let _ = writeln!(
                    svg,
                    r#"  <text x="10" y="{}" font-family="sans-serif" font-size="12" fill="{stroke}">{}</text>"#,
                    18 + 14 * i,
                    escape(&g.name)
                );
            }
            for edges in bad_edges.values() {
                for (a, b) in edges {
                    line(&mut svg, at(a)?, at(b)?, HIGHLIGHT, 4.0, r#" stroke-opacity="0.6" stroke-dasharray="6 3""#);
                }
            }
        }
    }

    for (name, p) in &approx {
        let (x, y) = view.map(*p);
        let ring = flagged_vertices.contains(name);
        let _ = writeln!(
            svg,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="{}" fill="{}"/>"#,
            if ring { 6 } else { 3 },
            if ring { HIGHLIGHT } else { "black" }
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 5.0,
            y - 5.0,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(Drawing { svg, highlighted })
}
