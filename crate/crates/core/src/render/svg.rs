// SPDX-License-Identifier: Apache-2.0

//! Minimal SVG writer with a fixed number format and bounding-box tracking.

use std::fmt::Write;

use crate::model::{Color, PaperPoint};

/// RGB of color indices 0..=15; other indices draw black.
pub const PALETTE: [&str; 16] = [
    "#000000", "#ff0000", "#c8a000", "#00a000", "#00a0a0", "#0000ff", "#c000c0", "#000000",
    "#808080", "#c0c0c0", "#800000", "#808000", "#008000", "#008080", "#000080", "#800080",
];

pub fn rgb(c: Color) -> &'static str {
    PALETTE.get(c.0 as usize).copied().unwrap_or("#000000")
}

/// Paper mm rounded to micrometers, shortest form, no negative zero.
pub fn num(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    fn empty() -> Self {
        Self { min_x: f64::INFINITY, min_y: f64::INFINITY, max_x: f64::NEG_INFINITY, max_y: f64::NEG_INFINITY }
    }

    fn add(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    pub fn is_empty(&self) -> bool {
        self.min_x > self.max_x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

/// Text placement. `size` is the cap height in paper mm.
#[derive(Debug, Clone, Copy)]
pub struct TextStyle {
    pub size: f64,
    pub widening: f64,
    pub slant: bool,
    pub anchor: Anchor,
    /// Rotated 90° counterclockwise about the insertion point.
    pub vertical: bool,
}

pub struct Svg {
    body: String,
    bbox: BBox,
    open_groups: usize,
}

impl Svg {
    pub fn new() -> Self {
        Self { body: String::new(), bbox: BBox::empty(), open_groups: 0 }
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn begin_group(&mut self, id: &str) {
        let _ = writeln!(self.body, "<g id=\"{}\">", escape(id));
        self.open_groups += 1;
    }

    pub fn end_group(&mut self) {
        self.body.push_str("</g>\n");
        self.open_groups -= 1;
    }

    fn stroke(color: Color, width: f64) -> String {
        format!("stroke=\"{}\" stroke-width=\"{}\" fill=\"none\"", rgb(color), num(width))
    }

    pub fn line(&mut self, a: PaperPoint, b: PaperPoint, class: &str, color: Color, width: f64) {
        self.bbox.add(a.x, a.y);
        self.bbox.add(b.x, b.y);
        let _ = writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {}/>",
            num(a.x),
            num(a.y),
            num(b.x),
            num(b.y),
            Self::stroke(color, width)
        );
    }

    pub fn polyline(&mut self, pts: &[PaperPoint], class: &str, color: Color, width: f64, dash: Option<&str>) {
        if pts.len() < 2 {
            return;
        }
        let mut coords = String::new();
        for (i, p) in pts.iter().enumerate() {
            self.bbox.add(p.x, p.y);
            if i > 0 {
                coords.push(' ');
            }
            let _ = write!(coords, "{},{}", num(p.x), num(p.y));
        }
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        let _ = writeln!(
            self.body,
            "<polyline class=\"{class}\" points=\"{coords}\" {}{dash}/>",
            Self::stroke(color, width)
        );
    }

    #[allow(clippy::too_many_arguments)]
    pub fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, class: &str, color: Color, width: f64) {
        let (lx, hx) = (x0.min(x1), x0.max(x1));
        let (ly, hy) = (y0.min(y1), y0.max(y1));
        self.bbox.add(lx, ly);
        self.bbox.add(hx, hy);
        let _ = writeln!(
            self.body,
            "<rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {}/>",
            num(lx),
            num(ly),
            num(hx - lx),
            num(hy - ly),
            Self::stroke(color, width)
        );
    }

    #[allow(clippy::too_many_arguments)]
    pub fn ellipse(&mut self, c: PaperPoint, rx: f64, ry: f64, class: &str, color: Color, width: f64, filled: bool) {
        let half = width / 2.0;
        self.bbox.add(c.x - rx - half, c.y - ry - half);
        self.bbox.add(c.x + rx + half, c.y + ry + half);
        let fill = if filled { rgb(color) } else { "none" };
        let _ = writeln!(
            self.body,
            "<ellipse class=\"{class}\" cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" stroke=\"{}\" stroke-width=\"{}\" fill=\"{fill}\"/>",
            num(c.x),
            num(c.y),
            num(rx),
            num(ry),
            rgb(color),
            num(width)
        );
    }

    /// Approximate advance width of `text`.
    pub fn text_width(text: &str, style: &TextStyle) -> f64 {
        text.chars().count() as f64 * style.size * 0.7 * style.widening
    }

    pub fn text(&mut self, at: PaperPoint, text: &str, class: &str, color: Color, style: TextStyle) {
        let w = Self::text_width(text, &style);
        let (before, after) = match style.anchor {
            Anchor::Start => (0.0, w),
            Anchor::Middle => (w / 2.0, w / 2.0),
            Anchor::End => (w, 0.0),
        };
        if style.vertical {
            self.bbox.add(at.x - style.size, at.y + before);
            self.bbox.add(at.x + style.size * 0.3, at.y - after);
        } else {
            self.bbox.add(at.x - before, at.y - style.size);
            self.bbox.add(at.x + after, at.y + style.size * 0.3);
        }
        let anchor = match style.anchor {
            Anchor::Start => "start",
            Anchor::Middle => "middle",
            Anchor::End => "end",
        };
        let mut attrs = format!(
            "class=\"{class}\" x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{anchor}\" fill=\"{}\"",
            num(at.x),
            num(at.y),
            num(style.size),
            rgb(color)
        );
        if style.slant {
            attrs.push_str(" font-style=\"italic\"");
        }
        let mut transforms = Vec::new();
        if style.vertical {
            transforms.push(format!("rotate(-90 {} {})", num(at.x), num(at.y)));
        }
        if style.widening != 1.0 {
            attrs.push_str(&format!(" textLength=\"{}\"", num(w)));
        }
        if !transforms.is_empty() {
            attrs.push_str(&format!(" transform=\"{}\"", transforms.join(" ")));
        }
        let _ = writeln!(self.body, "<text {attrs}>{}</text>", escape(text));
    }

    /// Wraps the body into a document whose viewBox is the bounding box
    /// plus `margin` on every side.
    pub fn finish(mut self, margin: f64) -> String {
        while self.open_groups > 0 {
            self.end_group();
        }
        let b = if self.bbox.is_empty() { BBox { min_x: 0.0, min_y: 0.0, max_x: 0.0, max_y: 0.0 } } else { self.bbox };
        let (x, y) = (b.min_x - margin, b.min_y - margin);
        let (w, h) = (b.max_x - b.min_x + 2.0 * margin, b.max_y - b.min_y + 2.0 * margin);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"{x} {y} {w} {h}\" font-family=\"sans-serif\">\n{}</svg>\n",
            self.body,
            w = num(w),
            h = num(h),
            x = num(x),
            y = num(y),
        )
    }
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(5.0), "5");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(-12.3456), "-12.346");
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & \"c\">"), "a&lt;b &amp; &quot;c&quot;&gt;");
    }

    #[test]
    fn palette_fallback() {
        assert_eq!(rgb(Color(1)), "#ff0000");
        assert_eq!(rgb(Color(200)), "#000000");
    }
}
