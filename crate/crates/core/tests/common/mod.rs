// SPDX-License-Identifier: Apache-2.0

//! Seeded generators of valid profiles and edit sequences shared by the
//! integration targets.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use pipeprof::editops::*;
use pipeprof::model::*;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

/// A station; mostly whole mm, sometimes with a fraction or far off the grid.
pub fn coord_x(rng: &mut TestRng) -> f64 {
    match rng.gen_range(0..10) {
        0 => rng.gen_range(0.0..120_000.0),
        1 => rng.gen_range(0..120_000) as f64 + 0.5,
        _ => (rng.gen_range(0..240) * 500) as f64,
    }
}

pub fn elevation(rng: &mut TestRng) -> f64 {
    match rng.gen_range(0..10) {
        0 => rng.gen_range(94_000.0..101_000.0),
        _ => rng.gen_range(94_000..101_000) as f64,
    }
}

pub fn point(rng: &mut TestRng) -> NaturalPoint {
    NaturalPoint::new(coord_x(rng), elevation(rng))
}

/// Strictly x-increasing chain of `n` points starting at `x0`.
pub fn chain(rng: &mut TestRng, x0: f64, n: usize) -> Vec<NaturalPoint> {
    let mut x = x0;
    let mut y = elevation(rng);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(NaturalPoint::new(x, y));
        x += rng.gen_range(1..=40) as f64 * 500.0;
        y += rng.gen_range(-300..=300) as f64;
    }
    out
}

pub fn color(rng: &mut TestRng) -> Color {
    Color(rng.gen_range(1..=255))
}

fn words(rng: &mut TestRng) -> String {
    const W: [&str; 8] = ["К1-1", "%%c325x8", "Труба", "ПЭ100", "В1", "Дорога", "a<b&c", "кабель 10 кВ"];
    W.choose(rng).unwrap().to_string()
}

fn pick<T: Copy>(rng: &mut TestRng, items: impl IntoIterator<Item = T>) -> Option<T> {
    let v: Vec<T> = items.into_iter().collect();
    v.choose(rng).copied()
}

pub fn random_pipe_type(rng: &mut TestRng) -> PipeType {
    let d = [110.0, 160.0, 225.0, 325.0, 426.0, 530.0, 630.0, 820.0, 1020.0][rng.gen_range(0..9)];
    PipeType {
        outer_diameter: d,
        name: format!("Труба {d}"),
        material: ["сталь", "ПЭ", ""][rng.gen_range(0..3)].into(),
        insulation: ["", "ВУС"][rng.gen_range(0..2)].into(),
        spec: SpecProps {
            position: rng.gen_bool(0.5).then(|| rng.gen_range(1..9).to_string()),
            unit_mass: rng.gen_bool(0.3).then(|| rng.gen_range(10..200) as f64),
            ..Default::default()
        },
    }
}

fn axis_refs(p: &Profile) -> Vec<AxisRef> {
    let mut v: Vec<AxisRef> = Vec::new();
    v.extend(p.above_ground.keys().map(|&id| AxisRef::AboveGround(id)));
    v.extend(p.sections.keys().map(|&id| AxisRef::Section(id)));
    v.extend(p.turn_points.keys().map(|&id| AxisRef::TurnPoint(id)));
    v.extend(p.wells.keys().map(|&id| AxisRef::Well(id)));
    v.extend(p.casings.keys().map(|&id| AxisRef::Casing(id)));
    v
}

fn leader_targets(p: &Profile) -> Vec<LeaderTarget> {
    let mut v: Vec<LeaderTarget> = Vec::new();
    v.extend(p.sections.keys().map(|&id| LeaderTarget::Section(id)));
    v.extend(p.casings.keys().map(|&id| LeaderTarget::Casing(id)));
    v.extend(p.wells.keys().map(|&id| LeaderTarget::Well(id)));
    v
}

/// A draft for one new object; it may refer to objects already in `p`.
pub fn random_draft(rng: &mut TestRng, p: &Profile) -> NewObject {
    match rng.gen_range(0..13) {
        0 => {
            let kind = [AboveGroundKind::Road, AboveGroundKind::Railway, AboveGroundKind::Trestle1, AboveGroundKind::Trestle2]
                [rng.gen_range(0..4)];
            NewObject::AboveGround(AboveGroundDraft {
                axis_x: coord_x(rng),
                kind: Some(kind),
                label: rng.gen_bool(0.5).then(|| words(rng)),
                width: rng.gen_bool(0.5).then(|| rng.gen_range(2000..12000) as f64),
                height: kind.has_height().then(|| rng.gen_range(1000..6000) as f64),
                ..Default::default()
            })
        }
        1 => {
            let kind = [SectionTag::Pipe, SectionTag::Cable, SectionTag::TelephoneDuct][rng.gen_range(0..3)];
            NewObject::Section(SectionDraft {
                center: point(rng),
                kind: Some(kind),
                diameter: Some(rng.gen_range(50..1200) as f64),
                wall: Some(rng.gen_range(3..20) as f64),
                label: rng.gen_bool(0.3).then(|| words(rng)),
                has_casing: Some(rng.gen_bool(0.5)),
                color: rng.gen_bool(0.3).then(|| color(rng)),
                ..Default::default()
            })
        }
        2 => NewObject::TurnPoint(TurnPointDraft {
            x: coord_x(rng),
            over_table_text: rng.gen_bool(0.5).then(|| words(rng)),
            designation: rng.gen_bool(0.5).then(|| words(rng)),
        }),
        3 | 4 => NewObject::Well(WellDraft {
            axis_x: coord_x(rng),
            kind: Some(if rng.gen_bool(0.8) { WellKind::Manhole } else { WellKind::RainInlet }),
            overshoot_below_pipe: rng.gen_bool(0.5).then(|| rng.gen_range(0..800) as f64),
            designation: rng.gen_bool(0.5).then(|| words(rng)),
            ..Default::default()
        }),
        5 => NewObject::Casing(CasingDraft {
            center_x: coord_x(rng),
            link: Some(random_link(rng)),
            length: Some(rng.gen_range(1000..20000) as f64),
            ..Default::default()
        }),
        6 => NewObject::PipeType(random_pipe_type(rng)),
        7 | 8 => {
            let n = rng.gen_range(2..6);
            let x0 = coord_x(rng);
            NewObject::Pipe(PipeDraft {
                type_ref: pick(rng, p.pipe_types.keys().copied()),
                color: rng.gen_bool(0.3).then(|| color(rng)),
                axis: chain(rng, x0, n),
            })
        }
        9 => NewObject::Text(TextDraft {
            lines: (0..rng.gen_range(1..3)).map(|_| words(rng)).collect(),
            origin: point(rng),
            ..Default::default()
        }),
        10 => match (pick(rng, p.texts.keys().copied()), pick(rng, leader_targets(p))) {
            (Some(text), Some(target)) => NewObject::Leader(LeaderDraft {
                text,
                target,
                offset: rng.gen_bool(0.5).then(|| PaperOffset::new(rng.gen_range(-20..20) as f64, rng.gen_range(0..30) as f64)),
            }),
            _ => random_surface(rng),
        },
        11 => {
            let mut refs = axis_refs(p);
            refs.shuffle(rng);
            refs.truncate(rng.gen_range(2..4));
            refs.sort_by(|a, b| p.axis_of(*a).unwrap().total_cmp(&p.axis_of(*b).unwrap()));
            NewObject::Dimension(DimensionDraft { refs, dim_line_offset: None, text_offsets: None })
        }
        _ => match pick(rng, p.sections.keys().copied()) {
            Some(section) if rng.gen_bool(0.6) => NewObject::ElevationMark(ElevationMarkDraft {
                section,
                arrow_shift: None,
                shelf_dir: Some(if rng.gen_bool(0.5) { ShelfDir::Left } else { ShelfDir::Right }),
                shelf_lift: None,
            }),
            _ => random_surface(rng),
        },
    }
}

fn random_surface(rng: &mut TestRng) -> NewObject {
    let role = SurfaceRole::ALL[rng.gen_range(0..3)];
    let n = rng.gen_range(2..7);
    let x0 = coord_x(rng) - 20_000.0;
    NewObject::Surface(SurfaceDraft { role, points: chain(rng, x0, n), color: None })
}

pub fn random_link(rng: &mut TestRng) -> CasingLink {
    if rng.gen_bool(0.5) {
        CasingLink::Proportional(rng.gen_range(1.05..2.5))
    } else {
        CasingLink::Offset(rng.gen_range(1..800) as f64 * 0.5)
    }
}

/// A valid profile of at most `max_objects` objects, built through the
/// editing API so every step is checked.
pub fn random_profile(rng: &mut TestRng, max_objects: usize) -> Profile {
    let mut p = Profile::new();
    let target = rng.gen_range(0..=max_objects);
    let mut attempts = 0;
    while p.object_count() < target && attempts < 10 * max_objects + 10 {
        attempts += 1;
        let draft = random_draft(rng, &p);
        let _ = add_object(&mut p, draft);
    }
    while p.object_count() > max_objects {
        let victim = *p.object_refs().last().unwrap();
        delete_object(&mut p, victim).unwrap();
    }
    if rng.gen_bool(0.5) {
        let mut s = p.settings.clone();
        s.build.scales = ScalePair::new(rng.gen_range(500..=1500), rng.gen_range(100..=500)).unwrap();
        s.build.min_ellipse_ratio = rng.gen_range(0.05..=1.0);
        s.table.slope_unit = if rng.gen_bool(0.5) { SlopeUnit::Permille } else { SlopeUnit::Percent };
        update_settings(&mut p, s).unwrap();
    }
    p
}

/// Names of the operation variants, in the order [`random_op`] draws them.
pub const VERBS: [&str; 25] = [
    "add",
    "delete",
    "move",
    "copy",
    "set_properties",
    "patch_properties",
    "continue_pipe",
    "extend_surface",
    "split_pipe",
    "split_surface",
    "delete_pipe_joint",
    "delete_surface_vertex",
    "divide_pipe",
    "merge_pipes",
    "edit_text",
    "add_dimension_ref",
    "edit_ground",
    "edit_length",
    "edit_slope",
    "edit_distance",
    "move_profile",
    "update_settings",
    "update_defaults",
    "move_vertex",
    "cascade_delete",
];

fn side(rng: &mut TestRng) -> Side {
    if rng.gen_bool(0.5) {
        Side::Left
    } else {
        Side::Right
    }
}

fn end(rng: &mut TestRng) -> ChainEnd {
    if rng.gen_bool(0.5) {
        ChainEnd::Start
    } else {
        ChainEnd::End
    }
}

fn any_pipe(rng: &mut TestRng, p: &Profile) -> (ObjectId, usize) {
    match pick(rng, p.pipes.iter().map(|(&id, pipe)| (id, pipe.axis.len()))) {
        Some(v) => v,
        None => (ObjectId(rng.gen_range(1..50)), 2),
    }
}

fn any_ref(rng: &mut TestRng, p: &Profile) -> ObjectRef {
    pick(rng, p.object_refs()).unwrap_or(ObjectRef::Well(ObjectId(1)))
}

fn any_role(rng: &mut TestRng, p: &Profile) -> (SurfaceRole, usize) {
    let role = SurfaceRole::ALL[rng.gen_range(0..3)];
    (role, p.surfaces.get(role).map_or(0, |s| s.points.len()))
}

/// Points that continue a chain beyond `end`.
fn continuation(rng: &mut TestRng, points: &[NaturalPoint], end: ChainEnd) -> Vec<NaturalPoint> {
    let n = rng.gen_range(1..3);
    let (mut x, y, dir) = match (end, points) {
        (_, []) => (coord_x(rng), elevation(rng), 1.0),
        (ChainEnd::Start, [first, ..]) => (first.x, first.y, -1.0),
        (ChainEnd::End, [.., last]) => (last.x, last.y, 1.0),
    };
    let mut out: Vec<NaturalPoint> = (0..n)
        .map(|_| {
            x += dir * rng.gen_range(1..20) as f64 * 500.0;
            NaturalPoint::new(x, y + rng.gen_range(-200..200) as f64)
        })
        .collect();
    if matches!(end, ChainEnd::Start) {
        out.reverse();
    }
    out
}

/// One random operation against `p`; index into [`VERBS`] returned alongside.
pub fn random_op(rng: &mut TestRng, p: &Profile) -> (usize, Operation) {
    let verb = rng.gen_range(0..VERBS.len());
    let op = match verb {
        0 => Operation::Add { object: random_draft(rng, p) },
        1 | 24 => {
            // Prefer objects others depend on so cascades get exercised.
            let target = if verb == 24 {
                pick(rng, p.object_refs().into_iter().filter(|r| {
                    matches!(r, ObjectRef::Text(_) | ObjectRef::Section(_) | ObjectRef::Well(_) | ObjectRef::PipeType(_))
                }))
                .unwrap_or_else(|| any_ref(rng, p))
            } else {
                any_ref(rng, p)
            };
            Operation::Delete { target }
        }
        2 => Operation::Move {
            target: MoveTarget::Object(any_ref(rng, p)),
            delta: Vector::new(rng.gen_range(-5000..5000) as f64, rng.gen_range(-500..500) as f64),
        },
        3 => {
            let source = any_ref(rng, p);
            let anchor = match (source, pick(rng, p.sections.keys().copied())) {
                (ObjectRef::ElevationMark(_), Some(s)) => CopyAnchor::Section(s),
                _ => CopyAnchor::Point(point(rng)),
            };
            Operation::Copy { source, anchor }
        }
        4 => {
            let target = any_ref(rng, p);
            match pipeprof::editops::ObjectValue::of(p, target) {
                Some(mut value) => {
                    tweak(rng, &mut value);
                    Operation::SetProperties { target, value }
                }
                None => Operation::Delete { target },
            }
        }
        5 => {
            let target = any_ref(rng, p);
            let patch = match target {
                ObjectRef::Well(_) => json!({ "overshoot_below_pipe": rng.gen_range(0..900) }),
                ObjectRef::PipeType(_) => json!({ "outer_diameter": rng.gen_range(50..1400) }),
                ObjectRef::Text(_) => json!({ "line_step": rng.gen_range(2..10) }),
                ObjectRef::Casing(_) => json!({ "length": rng.gen_range(500..30000) }),
                _ => json!({ "color": rng.gen_range(1..=255) }),
            };
            Operation::PatchProperties { target, patch }
        }
        6 => {
            let (pipe, _) = any_pipe(rng, p);
            let e = end(rng);
            let pts = p.pipes.get(&pipe).map(|x| x.axis.clone()).unwrap_or_default();
            Operation::ContinuePipe { pipe, end: e, points: continuation(rng, &pts, e) }
        }
        7 => {
            let (role, _) = any_role(rng, p);
            let e = end(rng);
            let pts = p.surfaces.get(role).map(|s| s.points.clone()).unwrap_or_default();
            Operation::ExtendSurface { role, end: e, points: continuation(rng, &pts, e) }
        }
        8 => {
            let (pipe, _) = any_pipe(rng, p);
            let x = p.pipes.get(&pipe).map_or(0.0, |x| {
                let (a, b) = (x.axis[0].x, x.axis.last().unwrap().x);
                a + (b - a) * rng.gen_range(0.0..1.0)
            });
            Operation::SplitPipe { pipe, x: x.round() }
        }
        9 => {
            let (role, _) = any_role(rng, p);
            let x = p.surfaces.get(role).and_then(|s| s.span()).map_or(0.0, |(a, b)| a + (b - a) * rng.gen_range(0.0..1.0));
            Operation::SplitSurface { role, x: x.round() }
        }
        10 => {
            let (pipe, n) = any_pipe(rng, p);
            Operation::DeletePipeJoint { pipe, index: rng.gen_range(0..n.max(1)) }
        }
        11 => {
            let (role, n) = any_role(rng, p);
            Operation::DeleteSurfaceVertex { role, index: rng.gen_range(0..n.max(1)) }
        }
        12 => {
            let (pipe, n) = any_pipe(rng, p);
            Operation::DividePipe { pipe, index: rng.gen_range(0..n.max(1)) }
        }
        13 => {
            let (pipe, _) = any_pipe(rng, p);
            Operation::MergePipes {
                pipe,
                end: end(rng),
                resolved_type: pick(rng, p.pipe_types.keys().copied()),
                resolved_color: rng.gen_bool(0.5).then(|| color(rng)),
            }
        }
        14 => {
            let text = pick(rng, p.texts.keys().copied()).unwrap_or(ObjectId(1));
            let lines = (0..rng.gen_range(0..3)).map(|_| words(rng)).collect();
            Operation::EditText { text, lines }
        }
        15 => {
            let dimension = pick(rng, p.dimensions.keys().copied()).unwrap_or(ObjectId(1));
            let axis = pick(rng, axis_refs(p)).unwrap_or(AxisRef::Well(ObjectId(1)));
            Operation::AddDimensionRef { dimension, axis }
        }
        16 => {
            let role = [SurfaceRole::Project, SurfaceRole::Natural][rng.gen_range(0..2)];
            let choice = [GroundEdit::AddVertex, GroundEdit::MoveLeftEnd, GroundEdit::MoveRightEnd, GroundEdit::ShiftSegment]
                [rng.gen_range(0..4)];
            let station_x = pick(rng, p.wells.values().map(|w| w.axis_x)).unwrap_or_else(|| coord_x(rng));
            Operation::EditGround { role, station_x, new_elev: elevation(rng), choice }
        }
        17 => {
            let (pipe, n) = any_pipe(rng, p);
            Operation::EditLength {
                pipe,
                segment: rng.gen_range(0..n.max(2) - 1),
                new_len: rng.gen_range(1..60) as f64 * 500.0,
                choice: LengthEdit { side: side(rng), keep_slope: rng.gen_bool(0.5) },
            }
        }
        18 => {
            let (pipe, n) = any_pipe(rng, p);
            Operation::EditSlope {
                pipe,
                segment: rng.gen_range(0..n.max(2) - 1),
                new_slope: rng.gen_range(-20..40) as f64,
                choice: SlopeEdit { side: side(rng) },
            }
        }
        19 => {
            let mut site: Vec<(f64, ObjectRef)> = p.wells.iter().map(|(&id, w)| (w.axis_x, ObjectRef::Well(id))).collect();
            site.extend(p.turn_points.iter().map(|(&id, t)| (t.x, ObjectRef::TurnPoint(id))));
            site.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (left, right) = match site.len() {
                0 | 1 => (ObjectRef::Well(ObjectId(1)), ObjectRef::Well(ObjectId(2))),
                n => {
                    let i = rng.gen_range(0..n - 1);
                    (site[i].1, site[i + 1].1)
                }
            };
            Operation::EditDistance {
                left,
                right,
                new_dist: rng.gen_range(1..40) as f64 * 500.0,
                choice: DistanceEdit { side: side(rng) },
            }
        }
        20 => Operation::MoveProfile { delta: Vector::new(rng.gen_range(-20..20) as f64, rng.gen_range(-20..20) as f64) },
        21 => {
            let mut s = p.settings.clone();
            // Out-of-range scales must be refused.
            s.build.scales = ScalePair { scale_h: rng.gen_range(400..1600), scale_v: rng.gen_range(80..520) };
            s.build.min_ellipse_ratio = rng.gen_range(0.05..=1.0);
            s.table.has_header = rng.gen_bool(0.8);
            Operation::UpdateSettings { settings: Box::new(s) }
        }
        22 => {
            let mut d = p.defaults.clone();
            d.casing.link = random_link(rng);
            d.well.overshoot_below_pipe = rng.gen_range(0..900) as f64;
            Operation::UpdateDefaults { defaults: Box::new(d) }
        }
        _ => {
            let delta = Vector::new(rng.gen_range(-3000..3000) as f64, rng.gen_range(-300..300) as f64);
            let target = if rng.gen_bool(0.5) {
                let (pipe, n) = any_pipe(rng, p);
                MoveTarget::PipeVertex { pipe, index: rng.gen_range(0..n.max(1)) }
            } else {
                let (role, n) = any_role(rng, p);
                MoveTarget::SurfaceVertex { role, index: rng.gen_range(0..n.max(1)) }
            };
            Operation::Move { target, delta }
        }
    };
    (verb, op)
}

fn tweak(rng: &mut TestRng, value: &mut ObjectValue) {
    match value {
        ObjectValue::AboveGround(o) => o.label = words(rng),
        ObjectValue::Section(o) => o.center.y += rng.gen_range(-500..500) as f64,
        ObjectValue::TurnPoint(o) => o.designation = words(rng),
        ObjectValue::Well(o) => o.width = rng.gen_range(500..3000) as f64,
        ObjectValue::Casing(o) => o.link = random_link(rng),
        ObjectValue::PipeType(o) => o.outer_diameter = rng.gen_range(50..1400) as f64,
        ObjectValue::Pipe(o) => o.color = color(rng),
        ObjectValue::Text(o) => o.origin.x += rng.gen_range(-500..500) as f64,
        ObjectValue::Leader(o) => o.offset.dx += rng.gen_range(-5..5) as f64,
        ObjectValue::Dimension(o) => o.dim_line_offset = rng.gen_range(0..30) as f64,
        ObjectValue::ElevationMark(o) => o.shelf_lift = rng.gen_range(0..20) as f64,
        ObjectValue::Surface(o) => o.color = color(rng),
    }
}
