//! Vector rendering of graphs and lossless rasterization.
//!
//! [`render`] turns a graph plus accepted layout into a shape list that
//! serializes to SVG; [`rasterize`] draws the same shapes into a PNG
//! without external font or SVG machinery, so identical inputs produce
//! byte-identical images. Node and weight labels use an embedded 5x7
//! bitmap font.

use std::fmt::Write as _;
use std::io::Cursor;

use thiserror::Error;

use crate::graph::Graph;
use crate::layout::Layout;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("raster width {0} below minimum 256")]
    WidthTooSmall(u32),
    #[error("png encoding failed: {0}")]
    Encode(String),
    #[error("layout has {positions} positions for {nodes} nodes")]
    LayoutMismatch { positions: usize, nodes: usize },
}

/// Where a text shape is measured from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// (x, y) is the center of the rendered string.
    Middle,
    /// (x, y) is the left edge, vertically centered.
    Start,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        width: f64,
        class: &'static str,
    },
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        stroke: f64,
        class: &'static str,
    },
    Polygon {
        points: Vec<(f64, f64)>,
        class: &'static str,
    },
    Text {
        x: f64,
        y: f64,
        size: f64,
        content: String,
        anchor: Anchor,
        class: &'static str,
    },
}

impl Shape {
    fn class(&self) -> &'static str {
        match self {
            Shape::Line { class, .. }
            | Shape::Circle { class, .. }
            | Shape::Polygon { class, .. }
            | Shape::Text { class, .. } => class,
        }
    }

    fn translated(&self, dx: f64, dy: f64) -> Shape {
        let mut out = self.clone();
        match &mut out {
            Shape::Line { x1, y1, x2, y2, .. } => {
                *x1 += dx;
                *y1 += dy;
                *x2 += dx;
                *y2 += dy;
            }
            Shape::Circle { cx, cy, .. } => {
                *cx += dx;
                *cy += dy;
            }
            Shape::Polygon { points, .. } => {
                for p in points {
                    p.0 += dx;
                    p.1 += dy;
                }
            }
            Shape::Text { x, y, .. } => {
                *x += dx;
                *y += dy;
            }
        }
        out
    }
}

/// A renderable document: fixed logical canvas plus an ordered shape list.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    pub shapes: Vec<Shape>,
}

impl SvgDocument {
    /// Number of shapes carrying a given class; the structural audit hook.
    pub fn count_class(&self, class: &str) -> usize {
        self.shapes.iter().filter(|s| s.class() == class).count()
    }

    /// Serializes to an SVG string.
    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(
            out,
            r#"<rect width="{:.0}" height="{:.0}" fill="white"/>"#,
            self.width, self.height
        );
        for shape in &self.shapes {
            match shape {
                Shape::Line {
                    x1,
                    y1,
                    x2,
                    y2,
                    width,
                    class,
                } => {
                    let _ = writeln!(
                        out,
                        r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="{width:.2}"/>"#
                    );
                }
                Shape::Circle {
                    cx,
                    cy,
                    r,
                    stroke,
                    class,
                } => {
                    let _ = writeln!(
                        out,
                        r#"<circle class="{class}" cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="white" stroke="black" stroke-width="{stroke:.2}"/>"#
                    );
                }
                Shape::Polygon { points, class } => {
                    let pts = points
                        .iter()
                        .map(|(x, y)| format!("{x:.2},{y:.2}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let _ = writeln!(out, r#"<polygon class="{class}" points="{pts}" fill="black"/>"#);
                }
                Shape::Text {
                    x,
                    y,
                    size,
                    content,
                    anchor,
                    class,
                } => {
                    let anchor_attr = match anchor {
                        Anchor::Middle => "middle",
                        Anchor::Start => "start",
                    };
                    let escaped = content
                        .replace('&', "&amp;")
                        .replace('<', "&lt;")
                        .replace('>', "&gt;");
                    let _ = writeln!(
                        out,
                        r#"<text class="{class}" x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="{size:.2}" text-anchor="{anchor_attr}" dominant-baseline="central">{escaped}</text>"#
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Renders a graph over its layout: `n` node glyphs with numeric labels,
/// `|E|` edge strokes, arrowheads iff directed, weight labels iff weighted.
pub fn render(graph: &Graph, layout: &Layout) -> Result<SvgDocument, RenderError> {
    if layout.positions.len() != graph.node_count() {
        return Err(RenderError::LayoutMismatch {
            positions: layout.positions.len(),
            nodes: graph.node_count(),
        });
    }
    let style = &layout.style;
    let canvas = style.canvas;
    let px = |(x, y): (f64, f64)| (x * canvas, y * canvas);
    let mut shapes = Vec::new();

    for e in graph.edges() {
        let (x1, y1) = px(layout.positions[e.a]);
        let (x2, y2) = px(layout.positions[e.b]);
        shapes.push(Shape::Line {
            x1,
            y1,
            x2,
            y2,
            width: style.edge_width,
            class: "edge",
        });
        let dx = x2 - x1;
        let dy = y2 - y1;
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (ux, uy) = (dx / len, dy / len);
        if graph.directed() {
            // Tip sits on the target circle boundary.
            let tip = (x2 - ux * style.node_radius, y2 - uy * style.node_radius);
            let base = (
                tip.0 - ux * style.arrow_size,
                tip.1 - uy * style.arrow_size,
            );
            let (pxv, pyv) = (-uy, ux);
            let half = style.arrow_size * 0.45;
            shapes.push(Shape::Polygon {
                points: vec![
                    tip,
                    (base.0 + pxv * half, base.1 + pyv * half),
                    (base.0 - pxv * half, base.1 - pyv * half),
                ],
                class: "arrow",
            });
        }
        if graph.weighted() {
            let mid = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let (pxv, pyv) = (-uy, ux);
            shapes.push(Shape::Text {
                x: mid.0 + pxv * style.weight_label_offset,
                y: mid.1 + pyv * style.weight_label_offset,
                size: style.font_size,
                content: e.weight.unwrap_or(1).to_string(),
                anchor: Anchor::Middle,
                class: "wlabel",
            });
        }
    }
    for (v, &pos) in layout.positions.iter().enumerate() {
        let (cx, cy) = px(pos);
        shapes.push(Shape::Circle {
            cx,
            cy,
            r: style.node_radius,
            stroke: style.edge_width,
            class: "node",
        });
        shapes.push(Shape::Text {
            x: cx,
            y: cy,
            size: style.font_size,
            content: v.to_string(),
            anchor: Anchor::Middle,
            class: "nlabel",
        });
    }
    Ok(SvgDocument {
        width: canvas,
        height: canvas,
        shapes,
    })
}

/// Stacks panels vertically: each panel's document followed by caption
/// lines. Used for few-shot exemplar composites.
pub fn compose_vertical(panels: &[(SvgDocument, Vec<String>)]) -> SvgDocument {
    let caption_size = 18.0;
    let line_height = caption_size * 1.5;
    let pad = 16.0;
    let width = panels
        .iter()
        .map(|(d, _)| d.width)
        .fold(256.0f64, f64::max);
    let mut shapes = Vec::new();
    let mut y = 0.0;
    for (doc, captions) in panels {
        for shape in &doc.shapes {
            shapes.push(shape.translated(0.0, y));
        }
        y += doc.height + pad;
        for line in captions {
            shapes.push(Shape::Text {
                x: pad,
                y: y + line_height / 2.0,
                size: caption_size,
                content: line.clone(),
                anchor: Anchor::Start,
                class: "caption",
            });
            y += line_height;
        }
        y += pad;
    }
    SvgDocument {
        width,
        height: y.max(1.0),
        shapes,
    }
}

/// Greedy word wrap for caption text.
pub fn wrap_text(text: &str, max_chars: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut current = String::new();
    for word in text.split_whitespace() {
        if !current.is_empty() && current.len() + 1 + word.len() > max_chars {
            lines.push(std::mem::take(&mut current));
        }
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(word);
    }
    if !current.is_empty() {
        lines.push(current);
    }
    lines
}

// ---------------------------------------------------------------------------
// Rasterization.
// ---------------------------------------------------------------------------

struct Canvas {
    width: u32,
    height: u32,
    // RGB8, row-major.
    data: Vec<u8>,
}

impl Canvas {
    fn new(width: u32, height: u32) -> Self {
        Canvas {
            width,
            height,
            data: vec![255; (width * height * 3) as usize],
        }
    }

    fn blend(&mut self, x: i64, y: i64, value: u8, coverage: f64) {
        if x < 0 || y < 0 || x >= i64::from(self.width) || y >= i64::from(self.height) {
            return;
        }
        let coverage = coverage.clamp(0.0, 1.0);
        let idx = ((y as u32 * self.width + x as u32) * 3) as usize;
        for c in 0..3 {
            let old = f64::from(self.data[idx + c]);
            let new = old + (f64::from(value) - old) * coverage;
            self.data[idx + c] = new.round() as u8;
        }
    }

    fn fill_line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, width: f64) {
        let half = width / 2.0;
        let min_x = (x1.min(x2) - half - 1.0).floor() as i64;
        let max_x = (x1.max(x2) + half + 1.0).ceil() as i64;
        let min_y = (y1.min(y2) - half - 1.0).floor() as i64;
        let max_y = (y1.max(y2) + half + 1.0).ceil() as i64;
        let vx = x2 - x1;
        let vy = y2 - y1;
        let len_sq = (vx * vx + vy * vy).max(1e-12);
        for y in min_y..=max_y {
            for x in min_x..=max_x {
                let px = x as f64 + 0.5;
                let py = y as f64 + 0.5;
                let t = ((px - x1) * vx + (py - y1) * vy) / len_sq;
                let t = t.clamp(0.0, 1.0);
                let dx = px - (x1 + vx * t);
                let dy = py - (y1 + vy * t);
                let dist = (dx * dx + dy * dy).sqrt();
                let coverage = (half - dist + 0.5).clamp(0.0, 1.0);
                if coverage > 0.0 {
                    self.blend(x, y, 0, coverage);
                }
            }
        }
    }

    fn fill_circle(&mut self, cx: f64, cy: f64, r: f64, stroke: f64) {
        let reach = r + stroke;
        let min_x = (cx - reach - 1.0).floor() as i64;
        let max_x = (cx + reach + 1.0).ceil() as i64;
        let min_y = (cy - reach - 1.0).floor() as i64;
        let max_y = (cy + reach + 1.0).ceil() as i64;
        let half = stroke / 2.0;
        for y in min_y..=max_y {
            for x in min_x..=max_x {
                let dx = x as f64 + 0.5 - cx;
                let dy = y as f64 + 0.5 - cy;
                let dist = (dx * dx + dy * dy).sqrt();
                // Opaque white interior, black ring, AA on both boundaries.
                let inside = (r - half - dist + 0.5).clamp(0.0, 1.0);
                if inside > 0.0 {
                    self.blend(x, y, 255, inside);
                }
                let ring = (half - (dist - r).abs() + 0.5).clamp(0.0, 1.0);
                if ring > 0.0 {
                    self.blend(x, y, 0, ring);
                }
            }
        }
    }

    fn fill_triangle(&mut self, pts: &[(f64, f64)]) {
        if pts.len() != 3 {
            return;
        }
        let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).floor() as i64;
        let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
        let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).floor() as i64;
        let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
        let area = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
            (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
        };
        let total = area(pts[0], pts[1], pts[2]);
        if total.abs() < 1e-12 {
            return;
        }
        for y in min_y..=max_y {
            for x in min_x..=max_x {
                let p = (x as f64 + 0.5, y as f64 + 0.5);
                let w0 = area(pts[1], pts[2], p) / total;
                let w1 = area(pts[2], pts[0], p) / total;
                let w2 = area(pts[0], pts[1], p) / total;
                if w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0 {
                    self.blend(x, y, 0, 1.0);
                }
            }
        }
    }

    fn fill_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) {
        let min_x = x0.floor() as i64;
        let max_x = x1.ceil() as i64;
        let min_y = y0.floor() as i64;
        let max_y = y1.ceil() as i64;
        for y in min_y..max_y {
            for x in min_x..max_x {
                let px = x as f64 + 0.5;
                let py = y as f64 + 0.5;
                let cov_x = (px + 0.5).min(x1) - (px - 0.5).max(x0);
                let cov_y = (py + 0.5).min(y1) - (py - 0.5).max(y0);
                let coverage = cov_x.clamp(0.0, 1.0) * cov_y.clamp(0.0, 1.0);
                if coverage > 0.0 {
                    self.blend(x, y, 0, coverage);
                }
            }
        }
    }

    fn draw_text(&mut self, x: f64, y: f64, size: f64, content: &str, anchor: Anchor) {
        let text = transliterate(content);
        let scale = size / 8.0;
        let advance = 6.0 * scale;
        let total_width = advance * text.len() as f64 - scale;
        let x0 = match anchor {
            Anchor::Middle => x - total_width / 2.0,
            Anchor::Start => x,
        };
        let y0 = y - 3.5 * scale;
        for (i, ch) in text.chars().enumerate() {
            let glyph = glyph_columns(ch);
            let gx = x0 + i as f64 * advance;
            for (col, bits) in glyph.iter().enumerate() {
                for row in 0..7 {
                    if bits & (1 << row) != 0 {
                        let rx = gx + col as f64 * scale;
                        let ry = y0 + f64::from(row) * scale;
                        self.fill_rect(rx, ry, rx + scale, ry + scale);
                    }
                }
            }
        }
    }
}

/// Replaces the few non-ASCII characters our templates emit with ASCII
/// equivalents the bitmap font can draw.
fn transliterate(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '→' => out.push_str("->"),
            '⇒' => out.push_str("=>"),
            c if c.is_ascii() => out.push(c),
            _ => out.push('?'),
        }
    }
    out
}

/// Rasterizes a document at the requested pixel width (aspect preserved)
/// and encodes it as PNG.
pub fn rasterize(doc: &SvgDocument, width: u32) -> Result<Vec<u8>, RenderError> {
    if width < 256 {
        return Err(RenderError::WidthTooSmall(width));
    }
    let scale = f64::from(width) / doc.width;
    let height = (doc.height * scale).round().max(1.0) as u32;
    let mut canvas = Canvas::new(width, height);
    for shape in &doc.shapes {
        match shape {
            Shape::Line {
                x1,
                y1,
                x2,
                y2,
                width: w,
                ..
            } => canvas.fill_line(x1 * scale, y1 * scale, x2 * scale, y2 * scale, w * scale),
            Shape::Circle { cx, cy, r, stroke, .. } => {
                canvas.fill_circle(cx * scale, cy * scale, r * scale, stroke * scale)
            }
            Shape::Polygon { points, .. } => {
                let pts: Vec<(f64, f64)> =
                    points.iter().map(|(x, y)| (x * scale, y * scale)).collect();
                canvas.fill_triangle(&pts);
            }
            Shape::Text {
                x,
                y,
                size,
                content,
                anchor,
                ..
            } => canvas.draw_text(x * scale, y * scale, size * scale, content, *anchor),
        }
    }
    let img = image::RgbImage::from_raw(canvas.width, canvas.height, canvas.data)
        .ok_or_else(|| RenderError::Encode("buffer size mismatch".into()))?;
    let mut bytes = Vec::new();
    img.write_to(&mut Cursor::new(&mut bytes), image::ImageFormat::Png)
        .map_err(|e| RenderError::Encode(e.to_string()))?;
    Ok(bytes)
}

/// 5x7 column bitmaps for printable ASCII, bit 0 = top row.
fn glyph_columns(ch: char) -> [u8; 5] {
    let idx = (ch as usize).saturating_sub(32);
    if ch < ' ' || idx >= FONT_5X7.len() {
        return FONT_5X7[31]; // '?'
    }
    FONT_5X7[idx]
}

#[rustfmt::skip]
const FONT_5X7: [[u8; 5]; 95] = [
    [0x00,0x00,0x00,0x00,0x00], // space
    [0x00,0x00,0x5F,0x00,0x00], // !
    [0x00,0x07,0x00,0x07,0x00], // "
    [0x14,0x7F,0x14,0x7F,0x14], // #
    [0x24,0x2A,0x7F,0x2A,0x12], // $
    [0x23,0x13,0x08,0x64,0x62], // %
    [0x36,0x49,0x55,0x22,0x50], // &
    [0x00,0x05,0x03,0x00,0x00], // '
    [0x00,0x1C,0x22,0x41,0x00], // (
    [0x00,0x41,0x22,0x1C,0x00], // )
    [0x08,0x2A,0x1C,0x2A,0x08], // *
    [0x08,0x08,0x3E,0x08,0x08], // +
    [0x00,0x50,0x30,0x00,0x00], // ,
    [0x08,0x08,0x08,0x08,0x08], // -
    [0x00,0x60,0x60,0x00,0x00], // .
    [0x20,0x10,0x08,0x04,0x02], // /
    [0x3E,0x51,0x49,0x45,0x3E], // 0
    [0x00,0x42,0x7F,0x40,0x00], // 1
    [0x42,0x61,0x51,0x49,0x46], // 2
    [0x21,0x41,0x45,0x4B,0x31], // 3
    [0x18,0x14,0x12,0x7F,0x10], // 4
    [0x27,0x45,0x45,0x45,0x39], // 5
    [0x3C,0x4A,0x49,0x49,0x30], // 6
    [0x01,0x71,0x09,0x05,0x03], // 7
    [0x36,0x49,0x49,0x49,0x36], // 8
    [0x06,0x49,0x49,0x29,0x1E], // 9
    [0x00,0x36,0x36,0x00,0x00], // :
    [0x00,0x56,0x36,0x00,0x00], // ;
    [0x00,0x08,0x14,0x22,0x41], // <
    [0x14,0x14,0x14,0x14,0x14], // =
    [0x41,0x22,0x14,0x08,0x00], // >
    [0x02,0x01,0x51,0x09,0x06], // ?
    [0x32,0x49,0x79,0x41,0x3E], // @
    [0x7E,0x11,0x11,0x11,0x7E], // A
    [0x7F,0x49,0x49,0x49,0x36], // B
    [0x3E,0x41,0x41,0x41,0x22], // C
    [0x7F,0x41,0x41,0x22,0x1C], // D
    [0x7F,0x49,0x49,0x49,0x41], // E
    [0x7F,0x09,0x09,0x01,0x01], // F
    [0x3E,0x41,0x41,0x51,0x32], // G
    [0x7F,0x08,0x08,0x08,0x7F], // H
    [0x00,0x41,0x7F,0x41,0x00], // I
    [0x20,0x40,0x41,0x3F,0x01], // J
    [0x7F,0x08,0x14,0x22,0x41], // K
    [0x7F,0x40,0x40,0x40,0x40], // L
    [0x7F,0x02,0x04,0x02,0x7F], // M
    [0x7F,0x04,0x08,0x10,0x7F], // N
    [0x3E,0x41,0x41,0x41,0x3E], // O
    [0x7F,0x09,0x09,0x09,0x06], // P
    [0x3E,0x41,0x51,0x21,0x5E], // Q
    [0x7F,0x09,0x19,0x29,0x46], // R
    [0x46,0x49,0x49,0x49,0x31], // S
    [0x01,0x01,0x7F,0x01,0x01], // T
    [0x3F,0x40,0x40,0x40,0x3F], // U
    [0x1F,0x20,0x40,0x20,0x1F], // V
    [0x7F,0x20,0x18,0x20,0x7F], // W
    [0x63,0x14,0x08,0x14,0x63], // X
    [0x03,0x04,0x78,0x04,0x03], // Y
    [0x61,0x51,0x49,0x45,0x43], // Z
    [0x00,0x00,0x7F,0x41,0x41], // [
    [0x02,0x04,0x08,0x10,0x20], // backslash
    [0x41,0x41,0x7F,0x00,0x00], // ]
    [0x04,0x02,0x01,0x02,0x04], // ^
    [0x40,0x40,0x40,0x40,0x40], // _
    [0x00,0x01,0x02,0x04,0x00], // `
    [0x20,0x54,0x54,0x54,0x78], // a
    [0x7F,0x48,0x44,0x44,0x38], // b
    [0x38,0x44,0x44,0x44,0x20], // c
    [0x38,0x44,0x44,0x48,0x7F], // d
    [0x38,0x54,0x54,0x54,0x18], // e
    [0x08,0x7E,0x09,0x01,0x02], // f
    [0x08,0x14,0x54,0x54,0x3C], // g
    [0x7F,0x08,0x04,0x04,0x78], // h
    [0x00,0x44,0x7D,0x40,0x00], // i
    [0x20,0x40,0x44,0x3D,0x00], // j
    [0x00,0x7F,0x10,0x28,0x44], // k
    [0x00,0x41,0x7F,0x40,0x00], // l
    [0x7C,0x04,0x18,0x04,0x78], // m
    [0x7C,0x08,0x04,0x04,0x78], // n
    [0x38,0x44,0x44,0x44,0x38], // o
    [0x7C,0x14,0x14,0x14,0x08], // p
    [0x08,0x14,0x14,0x18,0x7C], // q
    [0x7C,0x08,0x04,0x04,0x08], // r
    [0x48,0x54,0x54,0x54,0x20], // s
    [0x04,0x3F,0x44,0x40,0x20], // t
    [0x3C,0x40,0x40,0x20,0x7C], // u
    [0x1C,0x20,0x40,0x20,0x1C], // v
    [0x3C,0x40,0x30,0x40,0x3C], // w
    [0x44,0x28,0x10,0x28,0x44], // x
    [0x0C,0x50,0x50,0x50,0x3C], // y
    [0x44,0x64,0x54,0x4C,0x44], // z
    [0x00,0x08,0x36,0x41,0x00], // {
    [0x00,0x00,0x7F,0x00,0x00], // |
    [0x00,0x41,0x36,0x08,0x00], // }
    [0x08,0x08,0x2A,0x1C,0x08], // ~
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::layout;

    #[test]
    fn k2_counts() {
        let g = Graph::new(false, false, 2, [(0, 1, None)]).unwrap();
        let doc = render(&g, &layout(&g, 1).unwrap()).unwrap();
        assert_eq!(doc.count_class("node"), 2);
        assert_eq!(doc.count_class("edge"), 1);
        assert_eq!(doc.count_class("arrow"), 0);
        assert_eq!(doc.count_class("wlabel"), 0);
    }

    #[test]
    fn directed_weighted_edge_has_arrow_and_label() {
        let g = Graph::new(true, true, 2, [(0, 1, Some(5))]).unwrap();
        let doc = render(&g, &layout(&g, 1).unwrap()).unwrap();
        assert_eq!(doc.count_class("arrow"), 1);
        assert_eq!(doc.count_class("wlabel"), 1);
        assert!(doc.to_svg().contains(">5</text>"));
    }

    #[test]
    fn raster_dimensions_follow_width() {
        let g = Graph::new(false, false, 2, [(0, 1, None)]).unwrap();
        let doc = render(&g, &layout(&g, 1).unwrap()).unwrap();
        for width in [256u32, 1024] {
            let png = rasterize(&doc, width).unwrap();
            let img = image::load_from_memory(&png).unwrap();
            assert_eq!(img.width(), width);
            assert_eq!(img.height(), width);
        }
    }

    #[test]
    fn raster_below_min_width_rejected() {
        let g = Graph::new(false, false, 2, [(0, 1, None)]).unwrap();
        let doc = render(&g, &layout(&g, 1).unwrap()).unwrap();
        assert!(matches!(rasterize(&doc, 128), Err(RenderError::WidthTooSmall(128))));
    }

    #[test]
    fn raster_is_byte_deterministic() {
        let g = Graph::new(true, true, 3, [(0, 1, Some(2)), (1, 2, Some(7))]).unwrap();
        let doc = render(&g, &layout(&g, 9).unwrap()).unwrap();
        assert_eq!(rasterize(&doc, 512).unwrap(), rasterize(&doc, 512).unwrap());
    }

    #[test]
    fn compose_stacks_panels() {
        let g = Graph::new(false, false, 2, [(0, 1, None)]).unwrap();
        let doc = render(&g, &layout(&g, 1).unwrap()).unwrap();
        let composite = compose_vertical(&[
            (doc.clone(), vec!["Q: a".into(), "A: b".into()]),
            (doc, vec!["Q: c".into()]),
        ]);
        assert_eq!(composite.count_class("node"), 4);
        assert_eq!(composite.count_class("caption"), 3);
        assert!(composite.height > 2.0 * 1024.0);
    }

    #[test]
    fn wrap_respects_budget() {
        let lines = wrap_text("one two three four five six seven", 10);
        assert!(lines.iter().all(|l| l.len() <= 10));
        assert_eq!(lines.join(" "), "one two three four five six seven");
    }
}
