//! SVG drawings of a complex in development: pieces side by side, glued
//! arcs colored by class, with geodesic legs and marked points on top.

use std::fmt::Write as _;

use crate::geometry::Point2;
use crate::metric::{GeodesicPath, Location};
use crate::model::ComplexSpec;

const WIDTH: f64 = 960.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub title: String,
    pub paths: Vec<GeodesicPath<f64>>,
    pub points: Vec<(String, Location<f64>)>,
}

struct Layout {
    offsets: Vec<Point2<f64>>,
    scale: f64,
    height: f64,
}

impl Layout {
    fn new(spec: &ComplexSpec<f64>) -> Self {
        let boxes: Vec<(Point2<f64>, Point2<f64>)> = spec
            .pieces
            .iter()
            .map(|p| {
                let lo = p.vertices.iter().fold(Point2::new(f64::INFINITY, f64::INFINITY), |a, v| {
                    Point2::new(a.x.min(v.x), a.y.min(v.y))
                });
                let hi = p.vertices.iter().fold(Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, v| {
                    Point2::new(a.x.max(v.x), a.y.max(v.y))
                });
                (lo, hi)
            })
            .collect();
        let tallest = boxes.iter().map(|(lo, hi)| hi.y - lo.y).fold(0.0, f64::max);
        let widest = boxes.iter().map(|(lo, hi)| hi.x - lo.x).fold(0.0, f64::max);
        let gap = 0.25 * tallest.max(widest).max(1e-9);
        let mut offsets = Vec::new();
        let mut x = 0.0;
        for (lo, hi) in &boxes {
            offsets.push(Point2::new(x - lo.x, -lo.y));
            x += hi.x - lo.x + gap;
        }
        let total = (x - gap).max(1e-9);
        let scale = (WIDTH - 2.0 * MARGIN) / total;
        Self { offsets, scale, height: tallest * scale + 2.0 * MARGIN + 24.0 }
    }

    fn map(&self, piece: usize, p: Point2<f64>) -> (f64, f64) {
        let q = p + self.offsets[piece];
        (MARGIN + q.x * self.scale, self.height - MARGIN - q.y * self.scale)
    }
}

fn polyline(layout: &Layout, piece: usize, pts: &[Point2<f64>]) -> String {
    pts.iter()
        .map(|p| {
            let (x, y) = layout.map(piece, *p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the complex with an overlay as a standalone SVG 1.1 document.
pub fn render(spec: &ComplexSpec<f64>, overlay: &Overlay) -> String {
    let layout = Layout::new(spec);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.0} {:.0}">"#,
        layout.height, layout.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !overlay.title.is_empty() {
        let _ = writeln!(out, r#"<text x="{MARGIN}" y="18" font-family="monospace" font-size="13">{}</text>"#, escape(&overlay.title));
    }

    for (k, piece) in spec.pieces.iter().enumerate() {
        let pts = polyline(&layout, k, &piece.vertices);
        if piece.is_polygon() {
            let _ = writeln!(out, r##"<polygon points="{pts}" fill="#f2f2f2" stroke="#444" stroke-width="1"/>"##);
        } else {
            let _ = writeln!(out, r##"<polyline points="{pts}" fill="none" stroke="#444" stroke-width="2"/>"##);
        }
        let c = piece.vertices.iter().fold(Point2::new(0.0, 0.0), |a, v| a + *v) * (1.0 / piece.vertices.len() as f64);
        let (x, y) = layout.map(k, c);
        let _ = writeln!(
            out,
            r##"<text x="{x:.2}" y="{y:.2}" font-family="monospace" font-size="12" fill="#888" text-anchor="middle">{}</text>"##,
            escape(&piece.name)
        );
    }

    for (ci, class) in spec.gluings.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        for m in &class.members {
            let arc = &spec.arcs[m.arc];
            let piece = &spec.pieces[arc.piece];
            let start = spec.arc_start(m.arc);
            let len = spec.arc_length(m.arc);
            if len <= 0.0 {
                let (x, y) = layout.map(arc.piece, piece.point_at(start));
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#);
                continue;
            }
            let n = 64;
            let pts: Vec<Point2<f64>> =
                (0..=n).map(|i| piece.point_at(piece.wrap(start + len * i as f64 / n as f64))).collect();
            let dash = if m.reversed { r#" stroke-dasharray="6 3""# } else { "" };
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="3"{dash}><title>{}</title></polyline>"#,
                polyline(&layout, arc.piece, &pts),
                escape(&format!("{} {}", class.name, arc.name))
            );
        }
    }

    for path in &overlay.paths {
        for leg in &path.legs {
            let (x1, y1) = layout.map(leg.piece, leg.start);
            let (x2, y2) = layout.map(leg.piece, leg.end);
            let _ = writeln!(
                out,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#000" stroke-width="1.5"/>"##
            );
        }
    }

    for (name, loc) in &overlay.points {
        let (x, y) = layout.map(loc.piece, loc.point);
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#000"/>"##);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{}</text>"#,
            x + 5.0,
            y - 5.0,
            escape(name)
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}
