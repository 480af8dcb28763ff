//! SVG rendering of a folded ribbon.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RibbonError};
use crate::geom::Point2;
use crate::ribbon::RibbonGeometry;
use crate::validity::Layering;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub strand_stroke: f64,
    pub face_stroke: f64,
    /// Half the gap left in an under-strand, as a fraction of the ribbon width.
    pub gap_fraction: f64,
    pub face_opacity: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: 600.0,
            height: 600.0,
            margin: 20.0,
            strand_stroke: 2.0,
            face_stroke: 0.5,
            gap_fraction: 0.25,
            face_opacity: 0.35,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        let dims = [self.width, self.height, self.strand_stroke, self.face_stroke];
        if dims.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(RibbonError::BadRenderSpec("dimensions and strokes must be positive".into()));
        }
        if !(self.margin >= 0.0 && 2.0 * self.margin < self.width.min(self.height)) {
            return Err(RibbonError::BadRenderSpec("margin does not fit the canvas".into()));
        }
        if !(self.gap_fraction > 0.0 && self.gap_fraction < 0.5) {
            return Err(RibbonError::BadRenderSpec("gap fraction must lie in (0, 0.5)".into()));
        }
        if !(0.0..=1.0).contains(&self.face_opacity) {
            return Err(RibbonError::BadRenderSpec("opacity must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Faces from bottom to top: a topological order of the layering, taking
/// the lowest available index first and breaking cycles at the lowest
/// remaining index.
pub fn paint_order(m: usize, layering: &Layering) -> Vec<usize> {
    // below[b] lists faces lying under b
    let mut below = vec![Vec::new(); m];
    for c in layering.components() {
        let (a, b) = c.component.faces;
        let top = c.above;
        let bottom = if top == a { b } else { a };
        below[top].push(bottom);
    }
    let mut placed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    while order.len() < m {
        let next = (0..m)
            .find(|&f| !placed[f] && below[f].iter().all(|&g| placed[g]))
            .or_else(|| (0..m).find(|&f| !placed[f]))
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Renders faces, creases and the centerline with gaps at undercrossings.
pub fn render_svg(r: &RibbonGeometry, layering: &Layering, spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let k = r.diagram();
    let crossings = k.find_crossings().map_err(|e| RibbonError::BadRenderSpec(e.to_string()))?;

    let corners: Vec<Point2> = r.faces().iter().flat_map(|f| f.corners()).chain(k.vertices()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &corners {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (spec.width.min(spec.height) - 2.0 * spec.margin) / span;
    let map = |p: Point2| Point2::new(spec.margin + (p.x - x0) * scale, spec.height - spec.margin - (p.y - y0) * scale);
    let pt = |p: Point2| {
        let q = map(p);
        format!("{:.3},{:.3}", q.x, q.y)
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.3}" height="{:.3}" viewBox="0 0 {:.3} {:.3}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(out, r#"<g id="faces">"#);
    for f in paint_order(r.faces().len(), layering) {
        let face = r.face(f);
        let points: Vec<String> = face.corners().iter().map(|p| pt(*p)).collect();
        let _ = writeln!(
            out,
            r##"<polygon class="face" data-edge="{f}" points="{}" fill="#4a90d9" fill-opacity="{:.3}" stroke="#1d3f66" stroke-width="{:.3}"/>"##,
            points.join(" "),
            spec.face_opacity,
            spec.face_stroke
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="creases">"#);
    for c in r.creases() {
        let (a, b) = (map(c.left), map(c.right));
        let _ = writeln!(
            out,
            r##"<line class="crease" data-vertex="{}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#333333" stroke-width="{:.3}" stroke-dasharray="4 3"/>"##,
            c.vertex, a.x, a.y, b.x, b.y, spec.face_stroke
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="centerline">"#);
    let half_gap = spec.gap_fraction * r.width();
    for e in 0..k.num_edges() {
        let (p, q) = k.edge(e);
        let len = p.dist(q);
        let mut cuts: Vec<f64> =
            crossings.iter().filter(|c| c.under_edge == e).map(|c| (c.point - p).dot(q - p) / (len * len)).collect();
        cuts.sort_by(f64::total_cmp);
        let g = (half_gap / len).min(0.45 / (cuts.len() + 1) as f64);
        let mut start = 0.0;
        let mut pieces = Vec::new();
        for t in cuts {
            pieces.push((start, t - g));
            start = t + g;
        }
        pieces.push((start, 1.0));
        for (a, b) in pieces {
            let _ = writeln!(
                out,
                r##"<path class="strand" data-edge="{e}" d="M {} L {}" fill="none" stroke="#000000" stroke-width="{:.3}" stroke-linecap="round"/>"##,
                pt(p.lerp(q, a)),
                pt(p.lerp(q, b)),
                spec.strand_stroke
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
