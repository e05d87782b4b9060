// SPDX-License-Identifier: Apache-2.0

//! Composition of the whole drawing, in fixed z-order.

use super::svg::{Anchor, Svg, TextStyle};
use super::{clamp_ellipse, section_ellipse, Frame};
use crate::datatable::{build_table, dimension_texts, format_meters, ROW_LABELS};
use crate::linkage;
use crate::model::{
    validate, AboveGroundKind, Color, FontSetting, LineKind, NaturalPoint, PaperPoint,
    PipelineKind, Profile, SectionKind, ShelfDir, SurfaceRole, Violation, WellKind, DIAMETER_TOKEN,
};

const MAIN: f64 = 0.5;
const THIN: f64 = 0.25;
const MARGIN: f64 = 5.0;
/// Glyph substituted for the diameter token.
const DIAMETER_GLYPH: &str = "\u{2300}";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("profile is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

fn style(font: FontSetting, anchor: Anchor) -> TextStyle {
    TextStyle { size: font.height, widening: font.widening, slant: font.slant, anchor, vertical: false }
}

fn pp(x: f64, y: f64) -> PaperPoint {
    PaperPoint::new(x, y)
}

fn width_of(kind: LineKind) -> f64 {
    match kind {
        LineKind::SolidMain => MAIN,
        LineKind::SolidThin => THIN,
    }
}

/// Pieces of a polyline lying outside every open interval in `gaps`.
fn clip_outside(points: &[NaturalPoint], gaps: &[(f64, f64)]) -> Vec<Vec<NaturalPoint>> {
    let inside = |x: f64| gaps.iter().any(|&(lo, hi)| x > lo && x < hi);
    let mut out: Vec<Vec<NaturalPoint>> = Vec::new();
    let mut cur: Vec<NaturalPoint> = Vec::new();
    let flush = |cur: &mut Vec<NaturalPoint>, out: &mut Vec<Vec<NaturalPoint>>| {
        if cur.len() >= 2 {
            out.push(std::mem::take(cur));
        } else {
            cur.clear();
        }
    };
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pieces: Vec<(NaturalPoint, NaturalPoint, f64)> = if b.x > a.x {
            let mut xs = vec![a.x, b.x];
            for &(lo, hi) in gaps {
                xs.extend([lo, hi].into_iter().filter(|&e| e > a.x && e < b.x));
            }
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let at = |x: f64| {
                if x == a.x {
                    a
                } else if x == b.x {
                    b
                } else {
                    NaturalPoint::new(x, a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y))
                }
            };
            xs.windows(2).map(|s| (at(s[0]), at(s[1]), (s[0] + s[1]) / 2.0)).collect()
        } else {
            vec![(a, b, a.x)]
        };
        for (p0, p1, mid) in pieces {
            if inside(mid) {
                flush(&mut cur, &mut out);
                continue;
            }
            if cur.last() != Some(&p0) {
                flush(&mut cur, &mut out);
                cur.push(p0);
            }
            cur.push(p1);
        }
    }
    flush(&mut cur, &mut out);
    out
}

struct Ctx<'a> {
    p: &'a Profile,
    f: Frame,
    svg: Svg,
}

impl Ctx<'_> {
    fn paper(&self, pt: NaturalPoint) -> PaperPoint {
        self.f.paper(pt)
    }

    fn poly(&mut self, pts: &[NaturalPoint], class: &str, color: Color, width: f64, dash: Option<&str>) {
        let paper: Vec<PaperPoint> = pts.iter().map(|&q| self.f.paper(q)).collect();
        self.svg.polyline(&paper, class, color, width, dash);
    }

    fn aux_scale(&mut self) {
        let a = &self.p.settings.aux_scale;
        if !a.enabled || !(a.division > 0.0) {
            return;
        }
        let top_nat = self
            .p
            .surfaces
            .iter()
            .flat_map(|(_, s)| s.points.iter().map(|q| q.y))
            .fold(self.p.settings.build.conditional_ground_level, f64::max);
        let x = self.table_left() - 3.0;
        let n = ((top_nat - self.f.datum) / a.division).ceil().max(1.0) as i64;
        let (color, font) = (a.color, a.font);
        self.svg.begin_group("aux-scale");
        let y_top = self.f.py(self.f.datum + n as f64 * a.division);
        self.svg.line(pp(x, self.f.table_top), pp(x, y_top), "aux-scale", color, THIN);
        for i in 0..=n {
            let y_nat = self.f.datum + i as f64 * a.division;
            let y = self.f.py(y_nat);
            self.svg.line(pp(x - 1.0, y), pp(x, y), "aux-tick", color, THIN);
            self.svg.text(pp(x - 1.5, y + font.height / 2.0), &format_meters(y_nat), "aux-label", color, style(font, Anchor::End));
        }
        self.svg.end_group();
    }

    fn surface(&mut self, role: SurfaceRole) {
        let Some(line) = self.p.surfaces.get(role) else { return };
        let (id, dash) = match role {
            SurfaceRole::Groundwater => ("groundwater", Some("4 1 0.5 1")),
            SurfaceRole::Natural => ("natural-ground", Some("3 1.5")),
            SurfaceRole::Project => ("project-ground", None),
        };
        let color = line.color;
        self.svg.begin_group(id);
        if role == SurfaceRole::Project {
            let cuts = linkage::embed_cut_intervals(self.p);
            let gaps: Vec<(f64, f64)> = cuts.iter().map(|c| (c.lo, c.hi)).collect();
            for piece in clip_outside(&line.points, &gaps) {
                self.poly(&piece, id, color, THIN, None);
            }
            self.above_ground();
        } else {
            let pts = line.points.clone();
            self.poly(&pts, id, color, THIN, dash);
        }
        self.svg.end_group();
    }

    fn above_ground(&mut self) {
        let font = self.p.settings.build.font;
        for o in self.p.above_ground.values() {
            let g = linkage::ground_at(self.p, o.axis_x);
            let half = o.width.unwrap_or(0.0) / 2.0;
            let (x0, x1) = (self.f.px(o.axis_x - half), self.f.px(o.axis_x + half));
            let y = self.f.py(g);
            let c = o.color;
            match o.kind {
                AboveGroundKind::Road => {
                    for dy in [0.0, -0.8] {
                        self.svg.line(pp(x0, y + dy), pp(x1, y + dy), "road", c, THIN);
                    }
                    for x in [x0, x1] {
                        self.svg.line(pp(x, y + 0.6), pp(x, y - 1.4), "road", c, THIN);
                    }
                }
                AboveGroundKind::Railway => {
                    self.svg.rect(x0, y, x1, y - 1.0, "railway", c, THIN);
                    let n = (x1 - x0).floor().clamp(1.0, 200.0) as usize;
                    for i in 0..n {
                        let xa = x0 + i as f64 * (x1 - x0) / n as f64;
                        self.svg.line(pp(xa, y), pp((xa + 1.0).min(x1), y - 1.0), "railway", c, THIN);
                    }
                }
                AboveGroundKind::Trestle1 | AboveGroundKind::Trestle2 => {
                    let top = self.f.py(g + o.height.unwrap_or(0.0));
                    for x in [x0, x1] {
                        self.svg.line(pp(x, y), pp(x, top), "trestle", c, MAIN);
                    }
                    self.svg.line(pp(x0, top), pp(x1, top), "trestle", c, MAIN);
                    if o.kind == AboveGroundKind::Trestle2 {
                        self.svg.line(pp(x0, top + 0.8), pp(x1, top + 0.8), "trestle", c, MAIN);
                    }
                }
            }
            if !o.label.is_empty() {
                let at = pp(self.f.px(o.axis_x), self.f.table_top - 1.0);
                self.svg.text(at, &o.label, "above-ground-label", c, style(font, Anchor::Middle));
            }
        }
    }

    fn sections(&mut self) {
        let s = &self.p.settings;
        let (scales, r_min, st) = (s.build.scales, s.build.min_ellipse_ratio, s.sections.clone());
        let font = s.build.font;
        self.svg.begin_group("sections");
        for sec in self.p.sections.values() {
            let e = section_ellipse(sec, scales, r_min, &st);
            let c = self.paper(e.center);
            let class = match sec.kind {
                SectionKind::Pipe(_) => "section-pipe",
                SectionKind::Cable => "section-cable",
                SectionKind::TelephoneDuct => "section-duct",
            };
            self.svg.ellipse(c, e.semi_h, e.semi_v, class, sec.color, e.stroke, e.filled);
            let symbol = match sec.kind {
                SectionKind::Pipe(_) => st.pipe_symbol_length,
                SectionKind::Cable => st.cable_symbol_length,
                SectionKind::TelephoneDuct => st.duct_symbol_length,
            };
            let top = c.y - e.semi_v;
            self.svg.line(pp(c.x, top), pp(c.x, top - symbol), "section-symbol", sec.color, THIN);
            if matches!(sec.kind, SectionKind::TelephoneDuct) {
                let r = st.duct_dot_diameter / 2.0;
                self.svg.ellipse(c, r, r, "duct-dot", sec.color, 0.0, true);
            }
            if let SectionKind::Pipe(d) = &sec.kind {
                if let Some(casing) = d.casing {
                    let (h, v, w) = clamp_ellipse(casing.diameter, scales, r_min);
                    self.svg.ellipse(c, h, v, "section-casing", sec.color, w, false);
                }
                if let Some(label) = &d.label {
                    let at = pp(c.x + e.semi_h + 1.0, top - 1.0);
                    self.svg.text(at, &label.replace(DIAMETER_TOKEN, DIAMETER_GLYPH), "section-label", sec.color, style(font, Anchor::Start));
                }
            }
        }
        self.svg.end_group();
    }

    fn pipes(&mut self) {
        let sewer = self.p.settings.build.pipeline_kind == PipelineKind::Sewer;
        self.svg.begin_group("pipes");
        for (&id, q) in &self.p.pipes {
            let d = self.p.pipe_types.get(&q.type_ref).map_or(0.0, |t| t.outer_diameter);
            let (lo, hi) = crate::model::chain_span(&q.axis).unwrap_or((0.0, 0.0));
            let walls: Vec<(f64, f64)> = self
                .p
                .wells
                .values()
                .filter(|w| w.axis_x >= lo && w.axis_x <= hi)
                .map(|w| (w.axis_x - w.width / 2.0, w.axis_x + w.width / 2.0))
                .collect();
            let gaps: &[(f64, f64)] = if sewer { &walls } else { &[] };
            for piece in clip_outside(&q.axis, gaps) {
                for off in [d / 2.0, -d / 2.0] {
                    let shifted: Vec<NaturalPoint> = piece.iter().map(|a| NaturalPoint::new(a.x, a.y + off)).collect();
                    self.poly(&shifted, "pipe", q.color, MAIN, None);
                }
            }
            if sewer {
                for &(w0, w1) in &walls {
                    let x = (w0 + w1) / 2.0;
                    if let Ok(b) = linkage::pipe_bottom_at(self.p, id, x) {
                        let y = self.f.py(b);
                        self.svg.line(pp(self.f.px(w0), y), pp(self.f.px(w1), y), "invert", q.color, MAIN);
                    }
                }
            }
        }
        self.svg.end_group();
    }

    fn wells(&mut self) {
        let font = self.p.settings.build.font;
        self.svg.begin_group("wells");
        for (&id, w) in &self.p.wells {
            let Ok(e) = linkage::well_extents(self.p, id) else { continue };
            let (x0, x1) = (self.f.px(w.axis_x - w.width / 2.0), self.f.px(w.axis_x + w.width / 2.0));
            let (yt, yb) = (self.f.py(e.top), self.f.py(e.bottom));
            let lw = width_of(w.line_kind);
            let class = match w.kind {
                WellKind::Manhole => "well",
                WellKind::RainInlet => "rain-inlet",
            };
            self.svg.rect(x0, yt, x1, yb, class, w.color, lw);
            if w.kind == WellKind::RainInlet {
                self.svg.line(pp(x0, yt + 0.5), pp(x1, yt + 0.5), "rain-inlet-grate", w.color, lw);
            }
            let at = pp(self.f.px(w.axis_x), yt - w.depth_label_offset);
            self.svg.text(at, &format_meters(e.depth), "well-depth", w.color, style(font, Anchor::Middle));
        }
        self.svg.end_group();
    }

    fn casings(&mut self) {
        self.svg.begin_group("casings");
        for (&id, c) in &self.p.casings {
            let Ok(g) = linkage::casing_geometry(self.p, id) else { continue };
            let (x0, x1) = (self.f.px(c.center_x - c.length / 2.0), self.f.px(c.center_x + c.length / 2.0));
            let (y0, y1) = (self.f.py(g.center.y + g.diameter / 2.0), self.f.py(g.center.y - g.diameter / 2.0));
            self.svg.rect(x0, y0, x1, y1, "casing", c.color, MAIN);
        }
        self.svg.end_group();
    }

    fn texts(&mut self) {
        self.svg.begin_group("texts");
        for t in self.p.texts.values() {
            let o = self.paper(t.origin);
            for (i, line) in t.lines.iter().enumerate() {
                let at = pp(o.x, o.y + i as f64 * t.line_step);
                self.svg.text(at, &line.replace(DIAMETER_TOKEN, DIAMETER_GLYPH), "note", t.color, style(t.font, Anchor::Start));
            }
        }
        for l in self.p.leaders.values() {
            let (Some(t), Ok(a)) = (self.p.texts.get(&l.text), linkage::leader_anchor(self.p, l.target)) else {
                continue;
            };
            let from = self.paper(t.origin);
            let base = self.paper(a);
            let tip = pp(base.x + l.offset.dx, base.y - l.offset.dy);
            self.svg.line(from, tip, "leader", t.color, THIN);
        }
        self.svg.end_group();
    }

    fn dimensions(&mut self) {
        let ds = self.p.settings.dimensions.clone();
        self.svg.begin_group("dimensions");
        for d in self.p.dimensions.values() {
            let Ok(texts) = dimension_texts(self.p, d) else { continue };
            let Ok(axes) = d.refs.iter().map(|&r| self.p.axis_of(r)).collect::<Result<Vec<f64>, _>>() else {
                continue;
            };
            let y = self.f.table_top - d.dim_line_offset;
            let xs: Vec<f64> = axes.iter().map(|&x| self.f.px(x)).collect();
            let (Some(&first), Some(&last)) = (xs.first(), xs.last()) else { continue };
            self.svg.line(pp(first, y), pp(last, y), "dim-line", ds.color, THIN);
            let t = ds.tick_length / 2.0;
            for &x in &xs {
                self.svg.line(pp(x, y), pp(x, self.f.table_top), "dim-ext", ds.color, THIN);
                self.svg.line(pp(x - t, y + t), pp(x + t, y - t), "dim-tick", ds.color, MAIN);
            }
            for (i, text) in texts.iter().enumerate() {
                let off = d.text_offsets.get(i).copied().unwrap_or(0.0);
                let at = pp((xs[i] + xs[i + 1]) / 2.0, y - off);
                self.svg.text(at, text, "dim-text", ds.color, style(ds.font, Anchor::Middle));
            }
        }
        self.svg.end_group();
    }

    fn elevation_marks(&mut self) {
        let es = self.p.settings.elevation_marks.clone();
        let lw = width_of(es.line_kind);
        self.svg.begin_group("elevation-marks");
        for m in self.p.elevation_marks.values() {
            let Some(sec) = self.p.sections.get(&m.section) else { continue };
            let c = self.paper(sec.center);
            let tip = pp(c.x + m.arrow_shift, c.y);
            self.svg.line(c, tip, "mark-ext", es.color, lw);
            let leg = es.arrow_leg * std::f64::consts::FRAC_1_SQRT_2;
            self.svg.line(tip, pp(tip.x - leg, tip.y - leg), "mark-arrow", es.color, lw);
            self.svg.line(tip, pp(tip.x + leg, tip.y - leg), "mark-arrow", es.color, lw);
            let shelf_y = tip.y - m.shelf_lift;
            self.svg.line(tip, pp(tip.x, shelf_y), "mark-stem", es.color, lw);
            let text = format_meters(sec.center.y);
            let st = style(es.font, Anchor::Start);
            let len = Svg::text_width(&text, &st) + 1.0;
            let (x_end, text_x) = match m.shelf_dir {
                ShelfDir::Right => (tip.x + len, tip.x + 0.5),
                ShelfDir::Left => (tip.x - len, tip.x - len + 0.5),
            };
            self.svg.line(pp(tip.x, shelf_y), pp(x_end, shelf_y), "mark-shelf", es.color, lw);
            self.svg.text(pp(text_x, shelf_y - 0.5), &text, "mark-text", es.color, st);
        }
        self.svg.end_group();
    }

    fn table_left(&self) -> f64 {
        let t = &self.p.settings.table;
        let right = t.top_right_of_header.x;
        if t.has_header {
            right - t.header_width
        } else {
            right
        }
    }

    fn table(&mut self) {
        let t = self.p.settings.table.clone();
        let color = Color(7);
        let (top, rh) = (self.f.table_top, t.row_height);
        let rows = ROW_LABELS.len();
        let bottom = top + rows as f64 * rh;
        let left = self.table_left();
        let right = self.f.px(self.f.x_end).max(t.top_right_of_header.x);
        let body_left = t.top_right_of_header.x;
        let row_top = |i: usize| top + i as f64 * rh;
        let mid = |i: usize| row_top(i) + rh / 2.0 + t.font.height * 0.35;
        let font = t.font;
        self.svg.begin_group("table");
        for i in 0..=rows {
            self.svg.line(pp(left, row_top(i)), pp(right, row_top(i)), "table-grid", color, if i == 0 || i == rows { MAIN } else { THIN });
        }
        for x in [left, right] {
            self.svg.line(pp(x, top), pp(x, bottom), "table-grid", color, MAIN);
        }
        if t.has_header {
            self.svg.line(pp(body_left, top), pp(body_left, bottom), "table-grid", color, MAIN);
            for (i, label) in ROW_LABELS.iter().enumerate() {
                let size = font.height.min(rh * 0.5);
                let st = TextStyle { size, ..style(font, Anchor::Start) };
                self.svg.text(pp(left + 1.0, mid(i)), label, "row-label", color, st);
            }
        }
        let table = build_table(self.p);
        let centered = style(font, Anchor::Middle);
        let vertical = TextStyle { vertical: true, anchor: Anchor::Middle, size: font.height.min(rh * 0.6), ..centered };

        // Base row: a single value across the table.
        if !table.base.is_empty() {
            self.svg.text(pp((body_left + right) / 2.0, mid(0)), &table.base, "cell-base", color, centered);
        }
        for s in &table.pipe_designation {
            let (a, b) = (self.f.px(s.x_from), self.f.px(s.x_to));
            for x in [a, b] {
                self.svg.line(pp(x, row_top(1)), pp(x, row_top(2)), "table-tick", color, THIN);
            }
            self.svg.text(pp((a + b) / 2.0, mid(1)), &s.text, "cell-designation", color, centered);
        }
        for (row, values) in [(2, &table.project_elev), (3, &table.natural_elev), (4, &table.pipe_bottom)] {
            for v in values {
                let x = self.f.px(v.x);
                self.svg.line(pp(x, row_top(row)), pp(x, row_top(row) + 0.8), "table-tick", color, THIN);
                self.svg.text(pp(x + vertical.size * 0.35, row_top(row) + rh / 2.0), &v.text, "cell-elev", color, vertical);
            }
        }
        for ls in &table.length_slope {
            let (a, b) = (self.f.px(ls.x_from), self.f.px(ls.x_to));
            let (y0, y1) = (row_top(5), row_top(6));
            for x in [a, b] {
                self.svg.line(pp(x, y0), pp(x, y1), "table-tick", color, THIN);
            }
            let (ya, yb) = if ls.slope > 0.0 { (y0, y1) } else if ls.slope < 0.0 { (y1, y0) } else { ((y0 + y1) / 2.0, (y0 + y1) / 2.0) };
            self.svg.line(pp(a, ya), pp(b, yb), "slope-line", color, THIN);
            let small = TextStyle { size: font.height.min(rh * 0.4), ..centered };
            let cx = (a + b) / 2.0;
            self.svg.text(pp(cx, y0 + small.size + 0.2), &ls.slope_display, "cell-slope", color, small);
            self.svg.text(pp(cx, y1 - 0.4), &ls.length_m, "cell-length", color, small);
        }
        for d in &table.distance {
            let (a, b) = (self.f.px(d.x_from), self.f.px(d.x_to));
            for x in [a, b] {
                self.svg.line(pp(x, row_top(6)), pp(x, row_top(7)), "table-tick", color, THIN);
            }
            self.svg.text(pp((a + b) / 2.0, mid(6)), &d.value_m, "cell-distance", color, centered);
        }
        for s in &table.designations {
            self.svg.text(pp(self.f.px(s.x), mid(7)), &s.text, "cell-station", color, centered);
        }
        self.svg.end_group();
    }

    fn scale_designation(&mut self) {
        let b = &self.p.settings.build;
        let t = &self.p.settings.table;
        let x = if t.has_header {
            t.top_right_of_header.x - t.header_width / 2.0
        } else {
            t.top_right_of_header.x - 15.0
        };
        let y = self.f.py(b.conditional_ground_level);
        let text = format!("1:{} / 1:{}", b.scales.scale_h, b.scales.scale_v);
        let font = b.font;
        self.svg.begin_group("scale-designation");
        self.svg.text(pp(x, y), &text, "scale-designation", Color(7), style(font, Anchor::Middle));
        self.svg.end_group();
    }
}

/// Renders a valid profile as an SVG document. Equal profiles give equal
/// bytes.
pub fn render_svg(profile: &Profile) -> Result<Vec<u8>, RenderError> {
    let violations = validate(profile);
    if !violations.is_empty() {
        return Err(RenderError::Invalid(violations));
    }
    let mut cx = Ctx { p: profile, f: Frame::of(profile), svg: Svg::new() };
    cx.aux_scale();
    cx.surface(SurfaceRole::Groundwater);
    cx.surface(SurfaceRole::Natural);
    cx.surface(SurfaceRole::Project);
    cx.sections();
    cx.pipes();
    cx.wells();
    cx.casings();
    cx.texts();
    cx.dimensions();
    cx.elevation_marks();
    cx.table();
    cx.scale_designation();
    Ok(cx.svg.finish(MARGIN).into_bytes())
}
