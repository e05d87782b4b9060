// SPDX-License-Identifier: Apache-2.0

//! Drawing generation.
//!
//! Geometry lives in natural millimeters; the drawing maps it to paper
//! millimeters with separate horizontal and vertical scales. Annotation
//! sizes (fonts, offsets, ticks) are already paper millimeters.

mod draw;
pub mod svg;

use serde::Serialize;

use crate::linkage;
use crate::model::{NaturalPoint, PaperPoint, Profile, ScalePair, SectionSettings, SectionKind, UtilitySection};

pub use draw::{render_svg, RenderError};

/// Maps a natural point to the sheet. `anchor` is the paper position of the
/// natural origin; paper Y grows downward.
pub fn to_paper(pt: NaturalPoint, scales: ScalePair, anchor: PaperPoint) -> PaperPoint {
    PaperPoint::new(
        anchor.x + pt.x / scales.scale_h as f64,
        anchor.y - pt.y / scales.scale_v as f64,
    )
}

pub fn to_natural(pt: PaperPoint, scales: ScalePair, anchor: PaperPoint) -> NaturalPoint {
    NaturalPoint::new(
        (pt.x - anchor.x) * scales.scale_h as f64,
        (anchor.y - pt.y) * scales.scale_v as f64,
    )
}

/// Placement of the drawing on the sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frame {
    pub scales: ScalePair,
    /// Paper position of the natural origin.
    pub anchor: PaperPoint,
    /// Paper Y of the table's top edge.
    pub table_top: f64,
    /// Natural X drawn at the right edge of the table header.
    pub x_start: f64,
    /// Natural X where the table ends.
    pub x_end: f64,
    /// Natural elevation drawn at the table top.
    pub datum: f64,
}

impl Frame {
    /// The drawing starts at the leftmost object and sits on a whole-meter
    /// datum one meter below the lowest geometry.
    pub fn of(p: &Profile) -> Self {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for (_, s) in p.surfaces.iter() {
            xs.extend(s.points.iter().map(|q| q.x));
            ys.extend(s.points.iter().map(|q| q.y));
        }
        for q in p.pipes.values() {
            let d = p.pipe_types.get(&q.type_ref).map_or(0.0, |t| t.outer_diameter);
            xs.extend(q.axis.iter().map(|a| a.x));
            ys.extend(q.axis.iter().map(|a| a.y - d / 2.0));
        }
        for (&id, w) in &p.wells {
            xs.extend([w.axis_x - w.width / 2.0, w.axis_x + w.width / 2.0]);
            if let Ok(e) = linkage::well_extents(p, id) {
                ys.push(e.bottom);
            }
        }
        for t in p.turn_points.values() {
            xs.push(t.x);
        }
        for o in p.above_ground.values() {
            let half = o.width.unwrap_or(0.0) / 2.0;
            xs.extend([o.axis_x - half, o.axis_x + half]);
        }
        for s in p.sections.values() {
            xs.push(s.center.x);
            let r = s.kind.pipe().map_or(0.0, |d| d.diameter / 2.0);
            ys.push(s.center.y - r);
        }
        for (&id, c) in &p.casings {
            xs.extend([c.center_x - c.length / 2.0, c.center_x + c.length / 2.0]);
            if let Ok(g) = linkage::casing_geometry(p, id) {
                ys.push(g.center.y - g.diameter / 2.0);
            }
        }
        let fin = |v: &Vec<f64>, f: fn(f64, f64) -> f64| v.iter().copied().filter(|x| x.is_finite()).reduce(f);
        let x_start = fin(&xs, f64::min).unwrap_or(0.0);
        let x_end = fin(&xs, f64::max)
            .unwrap_or(x_start)
            .max(x_start + p.settings.table.min_headerless_length);
        let low = fin(&ys, f64::min).unwrap_or(p.settings.build.conditional_pipe_bottom_level);
        let datum = (low / 1000.0).floor() * 1000.0 - 1000.0;

        let scales = p.settings.build.scales;
        let corner = p.settings.table.top_right_of_header;
        let anchor = PaperPoint::new(
            corner.x - x_start / scales.scale_h as f64,
            corner.y + datum / scales.scale_v as f64,
        );
        Self { scales, anchor, table_top: corner.y, x_start, x_end, datum }
    }

    pub fn paper(&self, pt: NaturalPoint) -> PaperPoint {
        to_paper(pt, self.scales, self.anchor)
    }

    pub fn px(&self, x: f64) -> f64 {
        self.anchor.x + x / self.scales.scale_h as f64
    }

    pub fn py(&self, y: f64) -> f64 {
        self.anchor.y - y / self.scales.scale_v as f64
    }
}

/// Paper-space ellipse of a section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionEllipse {
    pub center: NaturalPoint,
    pub semi_h: f64,
    pub semi_v: f64,
    /// Line width; grows by the amount the minor axis was raised so the
    /// drawn ring still covers the true extent.
    pub stroke: f64,
    pub filled: bool,
}

/// Base line width of section ellipses, paper mm.
pub const SECTION_STROKE: f64 = 0.25;

/// Semi-axes of an ellipse for a natural diameter, with the minor axis
/// raised to at least `r_min` times the major one.
pub fn clamp_ellipse(diameter: f64, scales: ScalePair, r_min: f64) -> (f64, f64, f64) {
    let h = diameter / (2.0 * scales.scale_h as f64);
    let v = diameter / (2.0 * scales.scale_v as f64);
    let major = h.max(v);
    let floor = r_min * major;
    let (h2, v2) = (h.max(floor), v.max(floor));
    let raised = (h2 - h).max(v2 - v);
    (h2, v2, SECTION_STROKE + raised)
}

/// Ellipse of a section. Cables and ducts have no natural diameter and are
/// drawn with the configured paper diameter; cables are filled.
pub fn section_ellipse(
    section: &UtilitySection,
    scales: ScalePair,
    r_min: f64,
    settings: &SectionSettings,
) -> SectionEllipse {
    match &section.kind {
        SectionKind::Pipe(d) => {
            let (semi_h, semi_v, stroke) = clamp_ellipse(d.diameter, scales, r_min);
            SectionEllipse { center: section.center, semi_h, semi_v, stroke, filled: false }
        }
        SectionKind::Cable | SectionKind::TelephoneDuct => {
            let r = settings.cable_drawn_diameter / 2.0;
            SectionEllipse {
                center: section.center,
                semi_h: r,
                semi_v: r,
                stroke: SECTION_STROKE,
                filled: matches!(section.kind, SectionKind::Cable),
            }
        }
    }
}
