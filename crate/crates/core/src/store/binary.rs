// SPDX-License-Identifier: Apache-2.0

//! The PNS1 prototype encoding. The byte layout is described in
//! `docs/prototype-format.md`.

use std::collections::BTreeMap;

use super::StoreError;
use crate::model::*;

pub const MAGIC: &[u8; 4] = b"PNS1";
pub const VERSION: u8 = 1;

/// Marks a coordinate that is not a whole millimeter; an f64 follows.
const COORD_ESCAPE: i32 = i32::MIN;

mod tag {
    /// Closes the file; a file without it is truncated.
    pub const END: u8 = 0;
    pub const SETTINGS: u8 = 1;
    pub const DEFAULTS: u8 = 2;
    pub const SURFACES: u8 = 3;
    pub const ABOVE_GROUND: u8 = 4;
    pub const SECTIONS: u8 = 5;
    pub const TURN_POINTS: u8 = 6;
    pub const WELLS: u8 = 7;
    pub const CASINGS: u8 = 8;
    pub const PIPE_TYPES: u8 = 9;
    pub const PIPES: u8 = 10;
    pub const TEXTS: u8 = 11;
    pub const LEADERS: u8 = 12;
    pub const DIMENSIONS: u8 = 13;
    pub const ELEVATION_MARKS: u8 = 14;
}

#[derive(Default)]
struct W {
    buf: Vec<u8>,
}

impl W {
    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    fn varint(&mut self, mut v: u64) {
        loop {
            let byte = (v & 0x7f) as u8;
            v >>= 7;
            if v == 0 {
                self.buf.push(byte);
                return;
            }
            self.buf.push(byte | 0x80);
        }
    }

    fn len(&mut self, n: usize) {
        self.varint(n as u64);
    }

    fn bool(&mut self, v: bool) {
        self.u8(v as u8);
    }

    /// Thousandths as a zigzag varint shifted left by one, or the escape
    /// value 1 followed by a raw f64.
    fn real(&mut self, v: f64) {
        let k = v * 1000.0;
        let exact = k.fract() == 0.0
            && k.abs() < (1u64 << 52) as f64
            && k / 1000.0 == v
            && !(v == 0.0 && v.is_sign_negative());
        if exact {
            let k = k as i64;
            let zz = ((k << 1) ^ (k >> 63)) as u64;
            self.varint(zz << 1);
        } else {
            self.varint(1);
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
    }

    fn coord(&mut self, v: f64) {
        let whole = v.fract() == 0.0
            && v > i32::MIN as f64
            && v <= i32::MAX as f64
            && !(v == 0.0 && v.is_sign_negative());
        if whole {
            self.buf.extend_from_slice(&(v as i32).to_le_bytes());
        } else {
            self.buf.extend_from_slice(&COORD_ESCAPE.to_le_bytes());
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
    }

    fn point(&mut self, p: NaturalPoint) {
        self.coord(p.x);
        self.coord(p.y);
    }

    fn points(&mut self, pts: &[NaturalPoint]) {
        self.len(pts.len());
        for &p in pts {
            self.point(p);
        }
    }

    fn str(&mut self, s: &str) {
        self.len(s.len());
        self.buf.extend_from_slice(s.as_bytes());
    }

    fn id(&mut self, id: ObjectId) {
        self.varint(id.0 as u64);
    }

    fn color(&mut self, c: Color) {
        self.u8(c.0);
    }

    fn font(&mut self, f: FontSetting) {
        self.real(f.height);
        self.real(f.widening);
        self.bool(f.slant);
    }

    /// Presence bits, least significant first.
    fn flags(&mut self, bits: &[bool]) {
        let mut v: u64 = 0;
        for (i, &b) in bits.iter().enumerate() {
            v |= (b as u64) << i;
        }
        self.varint(v);
    }

    fn section(&mut self, tag: u8, body: W) {
        self.u8(tag);
        self.len(body.buf.len());
        self.buf.extend_from_slice(&body.buf);
    }
}

struct R<'a> {
    buf: &'a [u8],
    pos: usize,
    end: usize,
}

type Res<T> = Result<T, StoreError>;

impl<'a> R<'a> {
    fn truncated(&self) -> StoreError {
        StoreError::Truncated { offset: self.pos }
    }

    fn malformed(&self, what: impl Into<String>) -> StoreError {
        StoreError::Malformed { offset: self.pos, what: what.into() }
    }

    fn take(&mut self, n: usize) -> Res<&'a [u8]> {
        if self.end - self.pos < n {
            return Err(self.truncated());
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Res<u8> {
        Ok(self.take(1)?[0])
    }

    fn varint(&mut self) -> Res<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        for shift in (0..64).step_by(7) {
            let b = self.u8()?;
            v |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        self.pos = start;
        Err(self.malformed("varint too long"))
    }

    fn len(&mut self) -> Res<usize> {
        let n = self.varint()?;
        // Every counted item takes at least one byte.
        if n > (self.end - self.pos) as u64 {
            return Err(self.truncated());
        }
        Ok(n as usize)
    }

    fn u32(&mut self) -> Res<u32> {
        let v = self.varint()?;
        u32::try_from(v).map_err(|_| self.malformed("integer out of range"))
    }

    fn bool(&mut self) -> Res<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(self.malformed("bad boolean")),
        }
    }

    fn f64(&mut self) -> Res<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn real(&mut self) -> Res<f64> {
        let u = self.varint()?;
        if u & 1 == 0 {
            let zz = u >> 1;
            let k = ((zz >> 1) as i64) ^ -((zz & 1) as i64);
            Ok(k as f64 / 1000.0)
        } else if u == 1 {
            self.f64()
        } else {
            Err(self.malformed("bad real marker"))
        }
    }

    fn coord(&mut self) -> Res<f64> {
        let v = i32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes"));
        if v == COORD_ESCAPE {
            self.f64()
        } else {
            Ok(v as f64)
        }
    }

    fn point(&mut self) -> Res<NaturalPoint> {
        Ok(NaturalPoint::new(self.coord()?, self.coord()?))
    }

    fn points(&mut self) -> Res<Vec<NaturalPoint>> {
        let n = self.len()?;
        (0..n).map(|_| self.point()).collect()
    }

    fn str(&mut self) -> Res<String> {
        let n = self.len()?;
        let at = self.pos;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| StoreError::Malformed { offset: at, what: "invalid UTF-8".into() })
    }

    fn id(&mut self) -> Res<ObjectId> {
        Ok(ObjectId(self.u32()?))
    }

    fn color(&mut self) -> Res<Color> {
        Ok(Color(self.u8()?))
    }

    fn font(&mut self) -> Res<FontSetting> {
        Ok(FontSetting { height: self.real()?, widening: self.real()?, slant: self.bool()? })
    }

    fn flags(&mut self, n: usize) -> Res<Vec<bool>> {
        let v = self.varint()?;
        if n < 64 && v >> n != 0 {
            return Err(self.malformed("unknown presence bits"));
        }
        Ok((0..n).map(|i| v >> i & 1 == 1).collect())
    }

    fn enum_u8<T>(&mut self, table: &[T]) -> Res<T>
    where
        T: Copy,
    {
        let at = self.pos;
        let i = self.u8()? as usize;
        table
            .get(i)
            .copied()
            .ok_or(StoreError::Malformed { offset: at, what: format!("bad enum value {i}") })
    }

    fn done(&self) -> Res<()> {
        if self.pos != self.end {
            return Err(self.malformed("trailing bytes in section"));
        }
        Ok(())
    }
}

fn index_of<T: PartialEq>(table: &[T], v: &T) -> u8 {
    table.iter().position(|t| t == v).expect("enum table is complete") as u8
}

const LINE_KINDS: [LineKind; 2] = [LineKind::SolidMain, LineKind::SolidThin];
const SLOPE_UNITS: [SlopeUnit; 2] = [SlopeUnit::Permille, SlopeUnit::Percent];
const PIPELINE_KINDS: [PipelineKind; 2] = [PipelineKind::Water, PipelineKind::Sewer];
const AG_KINDS: [AboveGroundKind; 4] =
    [AboveGroundKind::Road, AboveGroundKind::Railway, AboveGroundKind::Trestle1, AboveGroundKind::Trestle2];
const SECTION_TAGS: [SectionTag; 3] = [SectionTag::Pipe, SectionTag::Cable, SectionTag::TelephoneDuct];
const WELL_KINDS: [WellKind; 2] = [WellKind::Manhole, WellKind::RainInlet];
const SHELF_DIRS: [ShelfDir; 2] = [ShelfDir::Left, ShelfDir::Right];
const ROLES: [SurfaceRole; 3] = SurfaceRole::ALL;

fn put_link(w: &mut W, l: CasingLink) {
    match l {
        CasingLink::Proportional(k) => {
            w.u8(0);
            w.real(k);
        }
        CasingLink::Offset(c) => {
            w.u8(1);
            w.real(c);
        }
    }
}

fn get_link(r: &mut R) -> Res<CasingLink> {
    match r.u8()? {
        0 => Ok(CasingLink::Proportional(r.real()?)),
        1 => Ok(CasingLink::Offset(r.real()?)),
        _ => Err(r.malformed("bad casing link")),
    }
}

fn put_section_casing(w: &mut W, c: SectionCasing) {
    w.real(c.diameter);
    w.real(c.wall);
    w.real(c.length);
}

fn get_section_casing(r: &mut R) -> Res<SectionCasing> {
    Ok(SectionCasing { diameter: r.real()?, wall: r.real()?, length: r.real()? })
}

fn put_axis(w: &mut W, a: AxisRef) {
    let (t, id) = match a {
        AxisRef::AboveGround(id) => (0, id),
        AxisRef::Section(id) => (1, id),
        AxisRef::TurnPoint(id) => (2, id),
        AxisRef::Well(id) => (3, id),
        AxisRef::Casing(id) => (4, id),
    };
    w.u8(t);
    w.id(id);
}

fn get_axis(r: &mut R) -> Res<AxisRef> {
    let t = r.u8()?;
    let id = r.id()?;
    Ok(match t {
        0 => AxisRef::AboveGround(id),
        1 => AxisRef::Section(id),
        2 => AxisRef::TurnPoint(id),
        3 => AxisRef::Well(id),
        4 => AxisRef::Casing(id),
        _ => return Err(r.malformed("bad axis kind")),
    })
}

fn put_settings(w: &mut W, s: &GeneralSettings) {
    let t = &s.table;
    w.real(t.top_right_of_header.x);
    w.real(t.top_right_of_header.y);
    w.bool(t.has_header);
    w.real(t.min_headerless_length);
    w.font(t.font);
    w.u8(index_of(&SLOPE_UNITS, &t.slope_unit));
    w.real(t.row_height);
    w.real(t.header_width);

    let a = &s.aux_scale;
    w.bool(a.enabled);
    w.real(a.division);
    w.color(a.color);
    w.font(a.font);

    let b = &s.build;
    w.varint(b.scales.scale_h as u64);
    w.varint(b.scales.scale_v as u64);
    w.u8(index_of(&PIPELINE_KINDS, &b.pipeline_kind));
    w.str(&b.base_soil);
    w.real(b.min_ellipse_ratio);
    w.real(b.conditional_ground_level);
    w.real(b.conditional_pipe_bottom_level);
    w.color(b.surface_colors.project);
    w.color(b.surface_colors.natural);
    w.color(b.surface_colors.groundwater);
    w.font(b.font);

    let c = &s.sections;
    for v in [
        c.cable_drawn_diameter,
        c.pipe_symbol_length,
        c.cable_symbol_length,
        c.duct_symbol_length,
        c.arrow_leg,
        c.arrow_span,
        c.duct_dot_diameter,
    ] {
        w.real(v);
    }
    w.color(s.turn_point_color);
    w.real(s.conditional_pipe_diameter);

    let d = &s.dimensions;
    w.bool(d.has_leader);
    w.bool(d.leader_to_shelf_end);
    w.real(d.tick_length);
    w.font(d.font);
    w.color(d.color);

    let e = &s.elevation_marks;
    w.u8(index_of(&LINE_KINDS, &e.line_kind));
    w.real(e.arrow_leg);
    w.font(e.font);
    w.color(e.color);
}

fn get_settings(r: &mut R) -> Res<GeneralSettings> {
    let table = TableSettings {
        top_right_of_header: PaperPoint::new(r.real()?, r.real()?),
        has_header: r.bool()?,
        min_headerless_length: r.real()?,
        font: r.font()?,
        slope_unit: r.enum_u8(&SLOPE_UNITS)?,
        row_height: r.real()?,
        header_width: r.real()?,
    };
    let aux_scale = AuxScaleSettings { enabled: r.bool()?, division: r.real()?, color: r.color()?, font: r.font()? };
    let build = BuildSettings {
        scales: ScalePair { scale_h: r.u32()?, scale_v: r.u32()? },
        pipeline_kind: r.enum_u8(&PIPELINE_KINDS)?,
        base_soil: r.str()?,
        min_ellipse_ratio: r.real()?,
        conditional_ground_level: r.real()?,
        conditional_pipe_bottom_level: r.real()?,
        surface_colors: SurfaceColors { project: r.color()?, natural: r.color()?, groundwater: r.color()? },
        font: r.font()?,
    };
    let sections = SectionSettings {
        cable_drawn_diameter: r.real()?,
        pipe_symbol_length: r.real()?,
        cable_symbol_length: r.real()?,
        duct_symbol_length: r.real()?,
        arrow_leg: r.real()?,
        arrow_span: r.real()?,
        duct_dot_diameter: r.real()?,
    };
    let turn_point_color = r.color()?;
    let conditional_pipe_diameter = r.real()?;
    let dimensions = DimensionSettings {
        has_leader: r.bool()?,
        leader_to_shelf_end: r.bool()?,
        tick_length: r.real()?,
        font: r.font()?,
        color: r.color()?,
    };
    let elevation_marks = ElevationMarkSettings {
        line_kind: r.enum_u8(&LINE_KINDS)?,
        arrow_leg: r.real()?,
        font: r.font()?,
        color: r.color()?,
    };
    Ok(GeneralSettings {
        table,
        aux_scale,
        build,
        sections,
        turn_point_color,
        conditional_pipe_diameter,
        dimensions,
        elevation_marks,
    })
}

fn put_defaults(w: &mut W, d: &DefaultSettings) {
    w.u8(index_of(&AG_KINDS, &d.above_ground.kind));
    w.color(d.above_ground.color);
    w.real(d.above_ground.width);
    w.real(d.above_ground.height);

    w.flags(&[d.section.casing.is_some()]);
    w.u8(index_of(&SECTION_TAGS, &d.section.kind));
    w.real(d.section.diameter);
    w.real(d.section.wall);
    if let Some(c) = d.section.casing {
        put_section_casing(w, c);
    }
    w.color(d.section.color);

    w.u8(index_of(&WELL_KINDS, &d.well.kind));
    w.real(d.well.width);
    w.real(d.well.overshoot_below_pipe);
    w.real(d.well.depth_label_offset);
    w.color(d.well.color);
    w.u8(index_of(&LINE_KINDS, &d.well.line_kind));

    put_link(w, d.casing.link);
    w.real(d.casing.wall);
    w.real(d.casing.length);
    w.color(d.casing.color);

    w.flags(&[d.pipe.last_type.is_some()]);
    w.color(d.pipe.color);
    if let Some(t) = d.pipe.last_type {
        w.id(t);
    }

    w.font(d.text.font);
    w.real(d.text.line_step);
    w.color(d.text.color);

    w.real(d.dimension.line_offset);
    w.real(d.dimension.text_offset);

    w.real(d.elevation_mark.arrow_shift);
    w.u8(index_of(&SHELF_DIRS, &d.elevation_mark.shelf_dir));
    w.real(d.elevation_mark.shelf_lift);
}

fn get_defaults(r: &mut R) -> Res<DefaultSettings> {
    let above_ground = AboveGroundDefaults {
        kind: r.enum_u8(&AG_KINDS)?,
        color: r.color()?,
        width: r.real()?,
        height: r.real()?,
    };
    let [has_casing] = r.flags(1)?[..] else { unreachable!() };
    let kind = r.enum_u8(&SECTION_TAGS)?;
    let diameter = r.real()?;
    let wall = r.real()?;
    let casing = if has_casing { Some(get_section_casing(r)?) } else { None };
    let section = SectionDefaults { kind, diameter, wall, casing, color: r.color()? };
    let well = WellDefaults {
        kind: r.enum_u8(&WELL_KINDS)?,
        width: r.real()?,
        overshoot_below_pipe: r.real()?,
        depth_label_offset: r.real()?,
        color: r.color()?,
        line_kind: r.enum_u8(&LINE_KINDS)?,
    };
    let casing = CasingDefaults { link: get_link(r)?, wall: r.real()?, length: r.real()?, color: r.color()? };
    let [has_last] = r.flags(1)?[..] else { unreachable!() };
    let color = r.color()?;
    let last_type = if has_last { Some(r.id()?) } else { None };
    let pipe = PipeDefaults { color, last_type };
    let text = TextDefaults { font: r.font()?, line_step: r.real()?, color: r.color()? };
    let dimension = DimensionDefaults { line_offset: r.real()?, text_offset: r.real()? };
    let elevation_mark = ElevationMarkDefaults {
        arrow_shift: r.real()?,
        shelf_dir: r.enum_u8(&SHELF_DIRS)?,
        shelf_lift: r.real()?,
    };
    Ok(DefaultSettings { above_ground, section, well, casing, pipe, text, dimension, elevation_mark })
}

fn put_surfaces(w: &mut W, s: &SurfaceSet) {
    w.flags(&ROLES.map(|role| s.get(role).is_some()));
    for (_, line) in s.iter() {
        w.color(line.color);
        w.points(&line.points);
    }
}

fn get_surfaces(r: &mut R) -> Res<SurfaceSet> {
    let present = r.flags(ROLES.len())?;
    let mut s = SurfaceSet::default();
    for (role, there) in ROLES.into_iter().zip(present) {
        if there {
            let color = r.color()?;
            *s.slot_mut(role) = Some(Polyline::new(r.points()?, color));
        }
    }
    Ok(s)
}

/// Writes a list as a count and records keyed by the gap to the previous id.
fn put_list<T>(w: &mut W, m: &BTreeMap<ObjectId, T>, mut f: impl FnMut(&mut W, &T)) {
    w.len(m.len());
    let mut prev = 0u32;
    for (id, v) in m {
        w.varint((id.0 - prev) as u64);
        prev = id.0;
        f(w, v);
    }
}

fn get_list<T>(r: &mut R, mut f: impl FnMut(&mut R) -> Res<T>) -> Res<BTreeMap<ObjectId, T>> {
    let n = r.len()?;
    let mut m = BTreeMap::new();
    let mut prev = 0u32;
    for i in 0..n {
        let gap = r.u32()?;
        if gap == 0 && i > 0 {
            return Err(r.malformed("duplicate id"));
        }
        prev = prev.checked_add(gap).ok_or_else(|| r.malformed("id overflow"))?;
        m.insert(ObjectId(prev), f(r)?);
    }
    Ok(m)
}

fn put_above_ground(w: &mut W, o: &AboveGroundObject) {
    w.flags(&[o.height.is_some(), o.width.is_some()]);
    w.u8(index_of(&AG_KINDS, &o.kind));
    w.coord(o.axis_x);
    w.str(&o.label);
    w.color(o.color);
    if let Some(h) = o.height {
        w.real(h);
    }
    if let Some(v) = o.width {
        w.real(v);
    }
}

fn get_above_ground(r: &mut R) -> Res<AboveGroundObject> {
    let f = r.flags(2)?;
    Ok(AboveGroundObject {
        kind: r.enum_u8(&AG_KINDS)?,
        axis_x: r.coord()?,
        label: r.str()?,
        color: r.color()?,
        height: if f[0] { Some(r.real()?) } else { None },
        width: if f[1] { Some(r.real()?) } else { None },
    })
}

fn put_section(w: &mut W, s: &UtilitySection) {
    w.u8(index_of(&SECTION_TAGS, &s.kind.tag()));
    w.point(s.center);
    w.color(s.color);
    if let SectionKind::Pipe(d) = &s.kind {
        w.flags(&[d.label.is_some(), d.casing.is_some()]);
        w.real(d.diameter);
        w.real(d.wall);
        if let Some(l) = &d.label {
            w.str(l);
        }
        if let Some(c) = d.casing {
            put_section_casing(w, c);
        }
    }
}

fn get_section(r: &mut R) -> Res<UtilitySection> {
    let tag = r.enum_u8(&SECTION_TAGS)?;
    let center = r.point()?;
    let color = r.color()?;
    let kind = match tag {
        SectionTag::Pipe => {
            let f = r.flags(2)?;
            let diameter = r.real()?;
            let wall = r.real()?;
            let label = if f[0] { Some(r.str()?) } else { None };
            let casing = if f[1] { Some(get_section_casing(r)?) } else { None };
            SectionKind::Pipe(PipeSectionData { diameter, wall, label, casing })
        }
        SectionTag::Cable => SectionKind::Cable,
        SectionTag::TelephoneDuct => SectionKind::TelephoneDuct,
    };
    Ok(UtilitySection { kind, center, color })
}

fn put_pipe_type(w: &mut W, t: &PipeType) {
    let s = &t.spec;
    let strs = [
        &s.position,
        &s.designation,
        &s.note,
        &s.type_mark_doc,
        &s.name_and_characteristic,
        &s.unit,
        &s.manufacturer,
        &s.product_code,
    ];
    let mut bits: Vec<bool> = strs.iter().map(|v| v.is_some()).collect();
    bits.push(s.unit_mass.is_some());
    w.flags(&bits);
    w.real(t.outer_diameter);
    w.str(&t.name);
    w.str(&t.material);
    w.str(&t.insulation);
    for v in strs.into_iter().flatten() {
        w.str(v);
    }
    if let Some(m) = s.unit_mass {
        w.real(m);
    }
}

fn get_pipe_type(r: &mut R) -> Res<PipeType> {
    let f = r.flags(9)?;
    let outer_diameter = r.real()?;
    let name = r.str()?;
    let material = r.str()?;
    let insulation = r.str()?;
    let opt = |i: usize, r: &mut R| -> Res<Option<String>> { if f[i] { r.str().map(Some) } else { Ok(None) } };
    let position = opt(0, r)?;
    let designation = opt(1, r)?;
    let note = opt(2, r)?;
    let type_mark_doc = opt(3, r)?;
    let name_and_characteristic = opt(4, r)?;
    let unit = opt(5, r)?;
    let manufacturer = opt(6, r)?;
    let product_code = opt(7, r)?;
    let unit_mass = if f[8] { Some(r.real()?) } else { None };
    Ok(PipeType {
        outer_diameter,
        name,
        material,
        insulation,
        spec: SpecProps {
            position,
            designation,
            unit_mass,
            note,
            type_mark_doc,
            name_and_characteristic,
            unit,
            manufacturer,
            product_code,
        },
    })
}

fn put_target(w: &mut W, t: LeaderTarget) {
    let (k, id) = match t {
        LeaderTarget::Section(id) => (0, id),
        LeaderTarget::Casing(id) => (1, id),
        LeaderTarget::Well(id) => (2, id),
    };
    w.u8(k);
    w.id(id);
}

fn get_target(r: &mut R) -> Res<LeaderTarget> {
    let k = r.u8()?;
    let id = r.id()?;
    Ok(match k {
        0 => LeaderTarget::Section(id),
        1 => LeaderTarget::Casing(id),
        2 => LeaderTarget::Well(id),
        _ => return Err(r.malformed("bad leader target")),
    })
}

/// Serializes without validating.
pub(super) fn encode_unchecked(p: &Profile) -> Vec<u8> {
    let mut out = W::default();
    out.buf.extend_from_slice(MAGIC);
    out.u8(VERSION);
    out.varint(p.next_id as u64);

    let mut body = W::default();
    put_settings(&mut body, &p.settings);
    out.section(tag::SETTINGS, body);
    let mut body = W::default();
    put_defaults(&mut body, &p.defaults);
    out.section(tag::DEFAULTS, body);

    if p.surfaces.iter().next().is_some() {
        let mut body = W::default();
        put_surfaces(&mut body, &p.surfaces);
        out.section(tag::SURFACES, body);
    }

    macro_rules! list {
        ($tag:expr, $map:expr, $put:expr) => {
            if !$map.is_empty() {
                let mut body = W::default();
                put_list(&mut body, &$map, $put);
                out.section($tag, body);
            }
        };
    }
    list!(tag::ABOVE_GROUND, p.above_ground, put_above_ground);
    list!(tag::SECTIONS, p.sections, put_section);
    list!(tag::TURN_POINTS, p.turn_points, |w: &mut W, t: &TurnPoint| {
        w.coord(t.x);
        w.str(&t.over_table_text);
        w.str(&t.designation);
    });
    list!(tag::WELLS, p.wells, |w: &mut W, v: &Well| {
        w.u8(index_of(&WELL_KINDS, &v.kind));
        w.coord(v.axis_x);
        w.real(v.width);
        w.real(v.overshoot_below_pipe);
        w.real(v.depth_label_offset);
        w.str(&v.designation);
        w.color(v.color);
        w.u8(index_of(&LINE_KINDS, &v.line_kind));
    });
    list!(tag::CASINGS, p.casings, |w: &mut W, c: &Casing| {
        w.coord(c.center_x);
        put_link(w, c.link);
        w.real(c.wall);
        w.real(c.length);
        w.color(c.color);
    });
    list!(tag::PIPE_TYPES, p.pipe_types, put_pipe_type);
    list!(tag::PIPES, p.pipes, |w: &mut W, q: &Pipe| {
        w.id(q.type_ref);
        w.color(q.color);
        w.points(&q.axis);
    });
    list!(tag::TEXTS, p.texts, |w: &mut W, t: &TextNote| {
        w.len(t.lines.len());
        for l in &t.lines {
            w.str(l);
        }
        w.font(t.font);
        w.real(t.line_step);
        w.color(t.color);
        w.point(t.origin);
    });
    list!(tag::LEADERS, p.leaders, |w: &mut W, l: &Leader| {
        w.id(l.text);
        put_target(w, l.target);
        w.real(l.offset.dx);
        w.real(l.offset.dy);
    });
    list!(tag::DIMENSIONS, p.dimensions, |w: &mut W, d: &ChainDimension| {
        w.len(d.refs.len());
        for &a in &d.refs {
            put_axis(w, a);
        }
        w.real(d.dim_line_offset);
        w.len(d.text_offsets.len());
        for &o in &d.text_offsets {
            w.real(o);
        }
    });
    list!(tag::ELEVATION_MARKS, p.elevation_marks, |w: &mut W, m: &ElevationMark| {
        w.id(m.section);
        w.real(m.arrow_shift);
        w.u8(index_of(&SHELF_DIRS, &m.shelf_dir));
        w.real(m.shelf_lift);
    });
    out.u8(tag::END);
    out.buf
}

/// Parses without validating.
pub(super) fn decode_unchecked(bytes: &[u8]) -> Result<Profile, StoreError> {
    if bytes.len() < MAGIC.len() {
        return Err(if MAGIC.starts_with(bytes) { StoreError::Truncated { offset: bytes.len() } } else { StoreError::BadMagic });
    }
    if &bytes[..4] != MAGIC {
        return Err(StoreError::BadMagic);
    }
    let mut r = R { buf: bytes, pos: 4, end: bytes.len() };
    let version = r.u8()?;
    if version != VERSION {
        return Err(StoreError::UnsupportedVersion(version));
    }
    let mut p = Profile::new();
    p.next_id = r.u32()?;

    let mut seen = std::collections::BTreeSet::new();
    loop {
        let tag_at = r.pos;
        let tag = r.u8()?;
        if tag == tag::END {
            break;
        }
        let len = r.varint()?;
        if len > (r.end - r.pos) as u64 {
            return Err(StoreError::Truncated { offset: r.end });
        }
        let mut s = R { buf: bytes, pos: r.pos, end: r.pos + len as usize };
        r.pos = s.end;
        if !(tag::SETTINGS..=tag::ELEVATION_MARKS).contains(&tag) {
            // A section from a later revision of the format.
            continue;
        }
        if !seen.insert(tag) {
            return Err(StoreError::Malformed { offset: tag_at, what: format!("repeated section {tag}") });
        }
        match tag {
            tag::SETTINGS => p.settings = get_settings(&mut s)?,
            tag::DEFAULTS => p.defaults = get_defaults(&mut s)?,
            tag::SURFACES => p.surfaces = get_surfaces(&mut s)?,
            tag::ABOVE_GROUND => p.above_ground = get_list(&mut s, get_above_ground)?,
            tag::SECTIONS => p.sections = get_list(&mut s, get_section)?,
            tag::TURN_POINTS => {
                p.turn_points = get_list(&mut s, |r| {
                    Ok(TurnPoint { x: r.coord()?, over_table_text: r.str()?, designation: r.str()? })
                })?
            }
            tag::WELLS => {
                p.wells = get_list(&mut s, |r| {
                    Ok(Well {
                        kind: r.enum_u8(&WELL_KINDS)?,
                        axis_x: r.coord()?,
                        width: r.real()?,
                        overshoot_below_pipe: r.real()?,
                        depth_label_offset: r.real()?,
                        designation: r.str()?,
                        color: r.color()?,
                        line_kind: r.enum_u8(&LINE_KINDS)?,
                    })
                })?
            }
            tag::CASINGS => {
                p.casings = get_list(&mut s, |r| {
                    Ok(Casing {
                        center_x: r.coord()?,
                        link: get_link(r)?,
                        wall: r.real()?,
                        length: r.real()?,
                        color: r.color()?,
                    })
                })?
            }
            tag::PIPE_TYPES => p.pipe_types = get_list(&mut s, get_pipe_type)?,
            tag::PIPES => {
                p.pipes = get_list(&mut s, |r| Ok(Pipe { type_ref: r.id()?, color: r.color()?, axis: r.points()? }))?
            }
            tag::TEXTS => {
                p.texts = get_list(&mut s, |r| {
                    let n = r.len()?;
                    let lines = (0..n).map(|_| r.str()).collect::<Res<Vec<_>>>()?;
                    Ok(TextNote { lines, font: r.font()?, line_step: r.real()?, color: r.color()?, origin: r.point()? })
                })?
            }
            tag::LEADERS => {
                p.leaders = get_list(&mut s, |r| {
                    Ok(Leader {
                        text: r.id()?,
                        target: get_target(r)?,
                        offset: PaperOffset { dx: r.real()?, dy: r.real()? },
                    })
                })?
            }
            tag::DIMENSIONS => {
                p.dimensions = get_list(&mut s, |r| {
                    let n = r.len()?;
                    let refs = (0..n).map(|_| get_axis(r)).collect::<Res<Vec<_>>>()?;
                    let dim_line_offset = r.real()?;
                    let m = r.len()?;
                    let text_offsets = (0..m).map(|_| r.real()).collect::<Res<Vec<_>>>()?;
                    Ok(ChainDimension { refs, dim_line_offset, text_offsets })
                })?
            }
            tag::ELEVATION_MARKS => {
                p.elevation_marks = get_list(&mut s, |r| {
                    Ok(ElevationMark {
                        section: r.id()?,
                        arrow_shift: r.real()?,
                        shelf_dir: r.enum_u8(&SHELF_DIRS)?,
                        shelf_lift: r.real()?,
                    })
                })?
            }
            _ => unreachable!("tag range checked above"),
        }
        s.done()?;
    }
    r.done()?;
    for required in [tag::SETTINGS, tag::DEFAULTS] {
        if !seen.contains(&required) {
            return Err(StoreError::Malformed { offset: r.pos, what: format!("missing section {required}") });
        }
    }
    Ok(p)
}
