// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use super::geometry::{check_chain, coord_ok, ChainDefect, NaturalPoint};
use super::refs::{ObjectId, ObjectRef};
use super::settings::FontSetting;
use super::{ObjectKind, Profile};

/// A broken invariant. `object` is `None` for settings-level rules.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub object: Option<ObjectRef>,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    DanglingRef(ObjectRef),
    TooFewPoints,
    NonFinite(&'static str),
    NonMonotoneX { index: usize },
    DuplicatePoint { index: usize },
    NotPositive(&'static str),
    Negative(&'static str),
    KindFields,
    WallTooThick,
    CasingTooSmall,
    CasingLink,
    EmptyText,
    EmptyName,
    TooFewRefs,
    CoincidentAxes,
    UnsortedRefs,
    TextOffsetCount,
    ScaleRange,
    EllipseRatio,
    BadFont(&'static str),
    DuplicateId(ObjectId),
    NextIdTooSmall,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::DanglingRef(r) => write!(f, "dangling-ref({r})"),
            Rule::TooFewPoints => f.write_str("too-few-points"),
            Rule::NonFinite(field) => write!(f, "non-finite({field})"),
            Rule::NonMonotoneX { index } => write!(f, "non-monotone-x(at {index})"),
            Rule::DuplicatePoint { index } => write!(f, "duplicate-point(at {index})"),
            Rule::NotPositive(field) => write!(f, "not-positive({field})"),
            Rule::Negative(field) => write!(f, "negative({field})"),
            Rule::KindFields => f.write_str("kind-fields"),
            Rule::WallTooThick => f.write_str("wall-too-thick"),
            Rule::CasingTooSmall => f.write_str("casing-too-small"),
            Rule::CasingLink => f.write_str("casing-link"),
            Rule::EmptyText => f.write_str("empty-text"),
            Rule::EmptyName => f.write_str("empty-name"),
            Rule::TooFewRefs => f.write_str("too-few-refs"),
            Rule::CoincidentAxes => f.write_str("coincident-axes"),
            Rule::UnsortedRefs => f.write_str("unsorted-refs"),
            Rule::TextOffsetCount => f.write_str("text-offset-count"),
            Rule::ScaleRange => f.write_str("scale-range"),
            Rule::EllipseRatio => f.write_str("ellipse-ratio"),
            Rule::BadFont(field) => write!(f, "bad-font({field})"),
            Rule::DuplicateId(id) => write!(f, "duplicate-id({id})"),
            Rule::NextIdTooSmall => f.write_str("next-id-too-small"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.object {
            Some(obj) => write!(f, "{} on {obj}", self.rule),
            None => write!(f, "{} in settings", self.rule),
        }
    }
}

struct Checker<'a> {
    profile: &'a Profile,
    out: Vec<Violation>,
    current: Option<ObjectRef>,
}

impl Checker<'_> {
    fn push(&mut self, rule: Rule) {
        self.out.push(Violation { object: self.current, rule });
    }

    fn finite(&mut self, v: f64, field: &'static str) -> bool {
        let ok = v.is_finite();
        if !ok {
            self.push(Rule::NonFinite(field));
        }
        ok
    }

    fn coord(&mut self, v: f64, field: &'static str) {
        if !coord_ok(v) {
            self.push(Rule::NonFinite(field));
        }
    }

    fn point(&mut self, p: NaturalPoint, field: &'static str) {
        if !p.is_valid() {
            self.push(Rule::NonFinite(field));
        }
    }

    fn positive(&mut self, v: f64, field: &'static str) {
        if self.finite(v, field) && v <= 0.0 {
            self.push(Rule::NotPositive(field));
        }
    }

    fn non_negative(&mut self, v: f64, field: &'static str) {
        if self.finite(v, field) && v < 0.0 {
            self.push(Rule::Negative(field));
        }
    }

    fn font(&mut self, font: &FontSetting, field: &'static str) {
        if !font.is_valid() {
            self.push(Rule::BadFont(field));
        }
    }

    fn resolves(&mut self, r: ObjectRef) {
        if !self.profile.contains(r) {
            self.push(Rule::DanglingRef(r));
        }
    }

    fn chain(&mut self, points: &[NaturalPoint]) {
        for d in check_chain(points) {
            self.push(match d {
                ChainDefect::TooFewPoints => Rule::TooFewPoints,
                ChainDefect::NonFinite { .. } => Rule::NonFinite("points"),
                ChainDefect::NonMonotoneX { index } => Rule::NonMonotoneX { index },
                ChainDefect::DuplicatePoint { index } => Rule::DuplicatePoint { index },
            });
        }
    }

    fn pipe_section(&mut self, diameter: f64, wall: f64) {
        self.positive(wall, "wall");
        if diameter.is_finite() && wall.is_finite() && wall > 0.0 && diameter <= 2.0 * wall {
            self.push(Rule::WallTooThick);
        }
    }
}

/// Checks every type invariant and referential integrity. An empty result
/// means the profile is valid.
pub fn validate(profile: &Profile) -> Vec<Violation> {
    let mut c = Checker { profile, out: Vec::new(), current: None };
    check_settings(&mut c);
    check_defaults(&mut c);

    for (role, line) in profile.surfaces.iter() {
        c.current = Some(ObjectRef::Surface(role));
        c.chain(&line.points);
    }

    for (&id, o) in &profile.above_ground {
        c.current = Some(ObjectRef::AboveGround(id));
        c.coord(o.axis_x, "axis_x");
        match o.width {
            Some(w) => c.positive(w, "width"),
            None => c.push(Rule::KindFields),
        }
        match (o.kind.has_height(), o.height) {
            (true, Some(h)) => c.positive(h, "height"),
            (false, None) => {}
            _ => c.push(Rule::KindFields),
        }
    }

    for (&id, s) in &profile.sections {
        c.current = Some(ObjectRef::Section(id));
        c.point(s.center, "center");
        if let Some(pipe) = s.kind.pipe() {
            c.positive(pipe.diameter, "diameter");
            c.pipe_section(pipe.diameter, pipe.wall);
            if let Some(cas) = &pipe.casing {
                c.positive(cas.diameter, "casing.diameter");
                c.positive(cas.length, "casing.length");
                c.pipe_section(cas.diameter, cas.wall);
                if cas.diameter.is_finite() && cas.diameter <= pipe.diameter {
                    c.push(Rule::CasingTooSmall);
                }
            }
        }
    }

    for (&id, t) in &profile.turn_points {
        c.current = Some(ObjectRef::TurnPoint(id));
        c.coord(t.x, "x");
    }

    for (&id, w) in &profile.wells {
        c.current = Some(ObjectRef::Well(id));
        c.coord(w.axis_x, "axis_x");
        c.positive(w.width, "width");
        c.non_negative(w.overshoot_below_pipe, "overshoot_below_pipe");
        c.finite(w.depth_label_offset, "depth_label_offset");
    }

    for (&id, k) in &profile.casings {
        c.current = Some(ObjectRef::Casing(id));
        c.coord(k.center_x, "center_x");
        if !k.link.is_valid() {
            c.push(Rule::CasingLink);
        }
        c.positive(k.wall, "wall");
        c.positive(k.length, "length");
    }

    for (&id, t) in &profile.pipe_types {
        c.current = Some(ObjectRef::PipeType(id));
        c.positive(t.outer_diameter, "outer_diameter");
        if t.name.trim().is_empty() {
            c.push(Rule::EmptyName);
        }
        if let Some(m) = t.spec.unit_mass {
            c.non_negative(m, "unit_mass");
        }
    }

    for (&id, p) in &profile.pipes {
        c.current = Some(ObjectRef::Pipe(id));
        c.resolves(ObjectRef::PipeType(p.type_ref));
        c.chain(&p.axis);
    }

    for (&id, t) in &profile.texts {
        c.current = Some(ObjectRef::Text(id));
        if t.lines.is_empty() {
            c.push(Rule::EmptyText);
        }
        c.positive(t.line_step, "line_step");
        c.font(&t.font, "font");
        c.point(t.origin, "origin");
    }

    for (&id, l) in &profile.leaders {
        c.current = Some(ObjectRef::Leader(id));
        c.resolves(ObjectRef::Text(l.text));
        c.resolves(l.target.into());
        if !l.offset.is_finite() {
            c.push(Rule::NonFinite("offset"));
        }
    }

    for (&id, d) in &profile.dimensions {
        c.current = Some(ObjectRef::Dimension(id));
        if d.refs.len() < 2 {
            c.push(Rule::TooFewRefs);
        }
        let mut axes = Vec::with_capacity(d.refs.len());
        for &r in &d.refs {
            match profile.axis_of(r) {
                Ok(x) => axes.push(x),
                Err(_) => c.push(Rule::DanglingRef(r.into())),
            }
        }
        if axes.len() == d.refs.len() {
            if axes.windows(2).any(|w| w[0] > w[1]) {
                c.push(Rule::UnsortedRefs);
            }
            let mut sorted = axes.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                c.push(Rule::CoincidentAxes);
            }
        }
        if d.text_offsets.len() + 1 != d.refs.len() {
            c.push(Rule::TextOffsetCount);
        }
        c.finite(d.dim_line_offset, "dim_line_offset");
        if d.text_offsets.iter().any(|v| !v.is_finite()) {
            c.push(Rule::NonFinite("text_offsets"));
        }
    }

    for (&id, m) in &profile.elevation_marks {
        c.current = Some(ObjectRef::ElevationMark(id));
        c.resolves(ObjectRef::Section(m.section));
        c.finite(m.arrow_shift, "arrow_shift");
        c.finite(m.shelf_lift, "shelf_lift");
    }

    c.current = None;
    check_ids(&mut c);
    c.out
}

fn check_settings(c: &mut Checker<'_>) {
    let s = &c.profile.settings;
    let t = &s.table;
    if !(t.top_right_of_header.x.is_finite() && t.top_right_of_header.y.is_finite()) {
        c.push(Rule::NonFinite("table.top_right_of_header"));
    }
    c.non_negative(t.min_headerless_length, "table.min_headerless_length");
    c.font(&t.font, "table.font");
    c.positive(t.row_height, "table.row_height");
    c.positive(t.header_width, "table.header_width");

    c.positive(s.aux_scale.division, "aux_scale.division");
    c.font(&s.aux_scale.font, "aux_scale.font");

    let b = &s.build;
    if !b.scales.is_valid() {
        c.push(Rule::ScaleRange);
    }
    if !(b.min_ellipse_ratio > 0.0 && b.min_ellipse_ratio <= 1.0) {
        c.push(Rule::EllipseRatio);
    }
    c.coord(b.conditional_ground_level, "build.conditional_ground_level");
    c.coord(b.conditional_pipe_bottom_level, "build.conditional_pipe_bottom_level");
    c.font(&b.font, "build.font");

    let sec = &s.sections;
    c.positive(sec.cable_drawn_diameter, "sections.cable_drawn_diameter");
    c.positive(sec.pipe_symbol_length, "sections.pipe_symbol_length");
    c.positive(sec.cable_symbol_length, "sections.cable_symbol_length");
    c.positive(sec.duct_symbol_length, "sections.duct_symbol_length");
    c.positive(sec.arrow_leg, "sections.arrow_leg");
    c.positive(sec.arrow_span, "sections.arrow_span");
    c.positive(sec.duct_dot_diameter, "sections.duct_dot_diameter");

    c.positive(s.conditional_pipe_diameter, "conditional_pipe_diameter");
    c.positive(s.dimensions.tick_length, "dimensions.tick_length");
    c.font(&s.dimensions.font, "dimensions.font");
    c.positive(s.elevation_marks.arrow_leg, "elevation_marks.arrow_leg");
    c.font(&s.elevation_marks.font, "elevation_marks.font");
}

fn check_defaults(c: &mut Checker<'_>) {
    let d = &c.profile.defaults;
    c.positive(d.above_ground.width, "defaults.above_ground.width");
    c.positive(d.above_ground.height, "defaults.above_ground.height");

    c.positive(d.section.diameter, "defaults.section.diameter");
    c.pipe_section(d.section.diameter, d.section.wall);
    if let Some(cas) = &d.section.casing {
        c.positive(cas.length, "defaults.section.casing.length");
        c.pipe_section(cas.diameter, cas.wall);
        if !(cas.diameter > d.section.diameter) {
            c.push(Rule::CasingTooSmall);
        }
    }

    c.positive(d.well.width, "defaults.well.width");
    c.non_negative(d.well.overshoot_below_pipe, "defaults.well.overshoot_below_pipe");
    c.finite(d.well.depth_label_offset, "defaults.well.depth_label_offset");

    if !d.casing.link.is_valid() {
        c.push(Rule::CasingLink);
    }
    c.positive(d.casing.wall, "defaults.casing.wall");
    c.positive(d.casing.length, "defaults.casing.length");

    if let Some(t) = d.pipe.last_type {
        c.resolves(ObjectRef::PipeType(t));
    }

    c.font(&d.text.font, "defaults.text.font");
    c.positive(d.text.line_step, "defaults.text.line_step");
    c.finite(d.dimension.line_offset, "defaults.dimension.line_offset");
    c.finite(d.dimension.text_offset, "defaults.dimension.text_offset");
    c.finite(d.elevation_mark.arrow_shift, "defaults.elevation_mark.arrow_shift");
    c.finite(d.elevation_mark.shelf_lift, "defaults.elevation_mark.shelf_lift");
}

fn check_ids(c: &mut Checker<'_>) {
    let mut seen: BTreeMap<ObjectId, ObjectKind> = BTreeMap::new();
    let mut max = 0;
    for r in c.profile.object_refs() {
        let id = r.id().expect("list objects carry ids");
        max = max.max(id.0);
        if seen.insert(id, r.kind()).is_some() {
            c.out.push(Violation { object: Some(r), rule: Rule::DuplicateId(id) });
        }
    }
    if c.profile.next_id <= max || c.profile.next_id == 0 {
        c.push(Rule::NextIdTooSmall);
    }
}
