// SPDX-License-Identifier: Apache-2.0

//! Adding, deleting, moving, copying and re-parameterizing whole objects.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{dependents, pipe_dependents, transact, EditError, EditResult};
use crate::linkage;
use crate::model::{
    check_chain, AboveGroundKind, AboveGroundObject, AxisRef, Casing, CasingLink, ChainDefect,
    ChainDimension, Color, DefaultSettings, ElevationMark, FontSetting, GeneralSettings, Leader,
    LeaderTarget, LineKind, NaturalPoint, ObjectId, ObjectKind, ObjectRef, PaperOffset, Pipe,
    PipeSectionData, PipeType, Polyline, Profile, SectionCasing, SectionKind, SectionTag,
    ShelfDir, SurfaceRole, TextNote, TurnPoint, UtilitySection, Vector, Well, WellKind,
};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AboveGroundDraft {
    pub axis_x: f64,
    pub kind: Option<AboveGroundKind>,
    pub label: Option<String>,
    pub color: Option<Color>,
    pub width: Option<f64>,
    pub height: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SectionDraft {
    pub center: NaturalPoint,
    pub kind: Option<SectionTag>,
    pub color: Option<Color>,
    pub diameter: Option<f64>,
    pub wall: Option<f64>,
    pub label: Option<String>,
    /// Overrides the default casing when given.
    pub casing: Option<SectionCasing>,
    /// `Some(false)` suppresses the default casing.
    pub has_casing: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TurnPointDraft {
    pub x: f64,
    pub over_table_text: Option<String>,
    pub designation: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WellDraft {
    pub axis_x: f64,
    pub kind: Option<WellKind>,
    pub width: Option<f64>,
    pub overshoot_below_pipe: Option<f64>,
    pub depth_label_offset: Option<f64>,
    pub designation: Option<String>,
    pub color: Option<Color>,
    pub line_kind: Option<LineKind>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CasingDraft {
    pub center_x: f64,
    pub link: Option<CasingLink>,
    pub wall: Option<f64>,
    pub length: Option<f64>,
    pub color: Option<Color>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipeDraft {
    /// Falls back to the type of the last added pipe.
    pub type_ref: Option<ObjectId>,
    pub color: Option<Color>,
    pub axis: Vec<NaturalPoint>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextDraft {
    pub lines: Vec<String>,
    pub origin: NaturalPoint,
    pub font: Option<FontSetting>,
    pub line_step: Option<f64>,
    pub color: Option<Color>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderDraft {
    pub text: ObjectId,
    pub target: LeaderTarget,
    #[serde(default)]
    pub offset: Option<PaperOffset>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionDraft {
    pub refs: Vec<AxisRef>,
    #[serde(default)]
    pub dim_line_offset: Option<f64>,
    #[serde(default)]
    pub text_offsets: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElevationMarkDraft {
    pub section: ObjectId,
    #[serde(default)]
    pub arrow_shift: Option<f64>,
    #[serde(default)]
    pub shelf_dir: Option<ShelfDir>,
    #[serde(default)]
    pub shelf_lift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDraft {
    pub role: SurfaceRole,
    pub points: Vec<NaturalPoint>,
    #[serde(default)]
    pub color: Option<Color>,
}

/// A new object; unset fields come from [`DefaultSettings`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NewObject {
    AboveGround(AboveGroundDraft),
    Section(SectionDraft),
    TurnPoint(TurnPointDraft),
    Well(WellDraft),
    Casing(CasingDraft),
    PipeType(PipeType),
    Pipe(PipeDraft),
    Text(TextDraft),
    Leader(LeaderDraft),
    Dimension(DimensionDraft),
    ElevationMark(ElevationMarkDraft),
    Surface(SurfaceDraft),
}

pub fn add_object(profile: &mut Profile, draft: NewObject) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let d = p.defaults.clone();
        let created = match draft {
            NewObject::AboveGround(a) => {
                let kind = a.kind.unwrap_or(d.above_ground.kind);
                let id = p.allocate_id();
                p.above_ground.insert(
                    id,
                    AboveGroundObject {
                        kind,
                        axis_x: a.axis_x,
                        label: a.label.unwrap_or_default(),
                        color: a.color.unwrap_or(d.above_ground.color),
                        height: kind.has_height().then(|| a.height.unwrap_or(d.above_ground.height)),
                        width: Some(a.width.unwrap_or(d.above_ground.width)),
                    },
                );
                ObjectRef::AboveGround(id)
            }
            NewObject::Section(s) => {
                let kind = match s.kind.unwrap_or(d.section.kind) {
                    SectionTag::Pipe => SectionKind::Pipe(PipeSectionData {
                        diameter: s.diameter.unwrap_or(d.section.diameter),
                        wall: s.wall.unwrap_or(d.section.wall),
                        label: s.label,
                        casing: match (s.casing, s.has_casing) {
                            (Some(c), _) => Some(c),
                            (None, Some(false)) => None,
                            (None, _) => d.section.casing,
                        },
                    }),
                    SectionTag::Cable => SectionKind::Cable,
                    SectionTag::TelephoneDuct => SectionKind::TelephoneDuct,
                };
                let id = p.allocate_id();
                p.sections.insert(
                    id,
                    UtilitySection { kind, center: s.center, color: s.color.unwrap_or(d.section.color) },
                );
                ObjectRef::Section(id)
            }
            NewObject::TurnPoint(t) => {
                let n = p.turn_points.len() + 1;
                let designation = t.designation.unwrap_or_else(|| format!("УП{n}"));
                let id = p.allocate_id();
                p.turn_points.insert(
                    id,
                    TurnPoint {
                        x: t.x,
                        over_table_text: t.over_table_text.unwrap_or_else(|| designation.clone()),
                        designation,
                    },
                );
                ObjectRef::TurnPoint(id)
            }
            NewObject::Well(w) => {
                let n = p.wells.len() + 1;
                let id = p.allocate_id();
                p.wells.insert(
                    id,
                    Well {
                        kind: w.kind.unwrap_or(d.well.kind),
                        axis_x: w.axis_x,
                        width: w.width.unwrap_or(d.well.width),
                        overshoot_below_pipe: w.overshoot_below_pipe.unwrap_or(d.well.overshoot_below_pipe),
                        depth_label_offset: w.depth_label_offset.unwrap_or(d.well.depth_label_offset),
                        designation: w.designation.unwrap_or_else(|| n.to_string()),
                        color: w.color.unwrap_or(d.well.color),
                        line_kind: w.line_kind.unwrap_or(d.well.line_kind),
                    },
                );
                ObjectRef::Well(id)
            }
            NewObject::Casing(c) => {
                let id = p.allocate_id();
                p.casings.insert(
                    id,
                    Casing {
                        center_x: c.center_x,
                        link: c.link.unwrap_or(d.casing.link),
                        wall: c.wall.unwrap_or(d.casing.wall),
                        length: c.length.unwrap_or(d.casing.length),
                        color: c.color.unwrap_or(d.casing.color),
                    },
                );
                ObjectRef::Casing(id)
            }
            NewObject::PipeType(t) => {
                let id = p.allocate_id();
                p.pipe_types.insert(id, t);
                ObjectRef::PipeType(id)
            }
            NewObject::Pipe(q) => {
                let type_ref = q.type_ref.or(d.pipe.last_type).ok_or(EditError::NoPipeType)?;
                let color = q.color.unwrap_or(d.pipe.color);
                let id = p.allocate_id();
                p.pipes.insert(id, Pipe { type_ref, color, axis: q.axis });
                p.defaults.pipe.last_type = Some(type_ref);
                p.defaults.pipe.color = color;
                res.changed.extend(pipe_dependents(p, id));
                ObjectRef::Pipe(id)
            }
            NewObject::Text(t) => {
                let id = p.allocate_id();
                p.texts.insert(
                    id,
                    TextNote {
                        lines: t.lines,
                        font: t.font.unwrap_or(d.text.font),
                        line_step: t.line_step.unwrap_or(d.text.line_step),
                        color: t.color.unwrap_or(d.text.color),
                        origin: t.origin,
                    },
                );
                ObjectRef::Text(id)
            }
            NewObject::Leader(l) => {
                let id = p.allocate_id();
                p.leaders.insert(
                    id,
                    Leader { text: l.text, target: l.target, offset: l.offset.unwrap_or_default() },
                );
                ObjectRef::Leader(id)
            }
            NewObject::Dimension(dim) => {
                let gaps = dim.refs.len().saturating_sub(1);
                let id = p.allocate_id();
                p.dimensions.insert(
                    id,
                    ChainDimension {
                        refs: dim.refs,
                        dim_line_offset: dim.dim_line_offset.unwrap_or(d.dimension.line_offset),
                        text_offsets: dim
                            .text_offsets
                            .unwrap_or_else(|| vec![d.dimension.text_offset; gaps]),
                    },
                );
                ObjectRef::Dimension(id)
            }
            NewObject::ElevationMark(m) => {
                let id = p.allocate_id();
                p.elevation_marks.insert(
                    id,
                    ElevationMark {
                        section: m.section,
                        arrow_shift: m.arrow_shift.unwrap_or(d.elevation_mark.arrow_shift),
                        shelf_dir: m.shelf_dir.unwrap_or(d.elevation_mark.shelf_dir),
                        shelf_lift: m.shelf_lift.unwrap_or(d.elevation_mark.shelf_lift),
                    },
                );
                ObjectRef::ElevationMark(id)
            }
            NewObject::Surface(s) => {
                let slot = p.surfaces.slot_mut(s.role);
                if slot.is_some() {
                    return Err(EditError::SurfaceExists(s.role));
                }
                let colors = p.settings.build.surface_colors;
                let color = s.color.unwrap_or(match s.role {
                    SurfaceRole::Project => colors.project,
                    SurfaceRole::Natural => colors.natural,
                    SurfaceRole::Groundwater => colors.groundwater,
                });
                *slot = Some(Polyline::new(s.points, color));
                res.changed.extend(surface_dependents(p, s.role));
                ObjectRef::Surface(s.role)
            }
        };
        res.created.insert(created);
        Ok(())
    })
}

/// Deletes `victim` with its cascade. A pipe type still used by pipes
/// cannot be deleted.
pub fn delete_object(profile: &mut Profile, victim: ObjectRef) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        if !p.contains(victim) {
            return Err(EditError::Unresolved(victim));
        }
        if let ObjectRef::PipeType(t) = victim {
            if p.pipes.values().any(|q| q.type_ref == t) {
                return Err(EditError::TypeInUse(victim));
            }
        }
        match victim {
            ObjectRef::Pipe(id) => res.changed.extend(pipe_dependents(p, id)),
            ObjectRef::Surface(role) => res.changed.extend(surface_dependents(p, role)),
            _ => {}
        }
        let plan = linkage::cascade_of(p, victim)?;
        linkage::apply_cascade(p, victim, &plan);
        res.deleted.insert(victim);
        res.deleted.extend(plan.to_delete.iter().copied());
        res.changed.extend(plan.to_regenerate.iter().copied());
        // Dependents of a deleted pipe may have been removed with it.
        res.changed.retain(|&r| p.contains(r));
        Ok(())
    })
}

/// What a move acts on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveTarget {
    Object(ObjectRef),
    SurfaceVertex { role: SurfaceRole, index: usize },
    PipeVertex { pipe: ObjectId, index: usize },
}

/// Moves a target by `delta`. Geometry moves in natural mm. Leaders,
/// dimension lines and elevation marks are annotation and take `delta` in
/// paper mm: a leader tip moves by it, a dimension line rises by `dy`, an
/// elevation mark shifts its arrow by `dx` and lifts its shelf by `dy`.
pub fn move_object(profile: &mut Profile, target: MoveTarget, delta: Vector) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        match target {
            MoveTarget::Object(r) => {
                move_whole(p, r, delta)?;
                res.changed.insert(r);
                res.changed.extend(dependents(p, r));
            }
            MoveTarget::SurfaceVertex { role, index } => {
                let line = p.surfaces.slot_mut(role).as_mut().ok_or(EditError::SurfaceUnavailable(role))?;
                move_vertex(&mut line.points, index, delta)?;
                res.changed.insert(ObjectRef::Surface(role));
                res.changed.extend(surface_dependents(p, role));
            }
            MoveTarget::PipeVertex { pipe, index } => {
                res.changed.extend(pipe_dependents(p, pipe));
                let q = p.pipes.get_mut(&pipe).ok_or(EditError::Unresolved(ObjectRef::Pipe(pipe)))?;
                move_vertex(&mut q.axis, index, delta)?;
                res.changed.insert(ObjectRef::Pipe(pipe));
                res.changed.extend(pipe_dependents(p, pipe));
            }
        }
        Ok(())
    })
}

fn move_vertex(points: &mut [NaturalPoint], index: usize, delta: Vector) -> Result<(), EditError> {
    let pt = points.get_mut(index).ok_or(EditError::BadIndex(index))?;
    *pt = pt.translated(delta);
    ensure_monotone(points)
}

pub(crate) fn ensure_monotone(points: &[NaturalPoint]) -> Result<(), EditError> {
    if check_chain(points).iter().any(|d| matches!(d, ChainDefect::NonMonotoneX { .. })) {
        Err(EditError::NonMonotone)
    } else {
        Ok(())
    }
}

fn move_whole(p: &mut Profile, r: ObjectRef, v: Vector) -> Result<(), EditError> {
    let missing = EditError::Unresolved(r);
    match r {
        ObjectRef::AboveGround(id) => p.above_ground.get_mut(&id).ok_or(missing)?.axis_x += v.dx,
        ObjectRef::Section(id) => {
            let s = p.sections.get_mut(&id).ok_or(missing)?;
            s.center = s.center.translated(v);
        }
        ObjectRef::TurnPoint(id) => p.turn_points.get_mut(&id).ok_or(missing)?.x += v.dx,
        ObjectRef::Well(id) => p.wells.get_mut(&id).ok_or(missing)?.axis_x += v.dx,
        ObjectRef::Casing(id) => p.casings.get_mut(&id).ok_or(missing)?.center_x += v.dx,
        ObjectRef::Pipe(id) => {
            for pt in &mut p.pipes.get_mut(&id).ok_or(missing)?.axis {
                *pt = pt.translated(v);
            }
        }
        ObjectRef::Text(id) => {
            let t = p.texts.get_mut(&id).ok_or(missing)?;
            t.origin = t.origin.translated(v);
        }
        ObjectRef::Leader(id) => {
            let l = p.leaders.get_mut(&id).ok_or(missing)?;
            l.offset.dx += v.dx;
            l.offset.dy += v.dy;
        }
        ObjectRef::Dimension(id) => p.dimensions.get_mut(&id).ok_or(missing)?.dim_line_offset += v.dy,
        ObjectRef::ElevationMark(id) => {
            let m = p.elevation_marks.get_mut(&id).ok_or(missing)?;
            m.arrow_shift += v.dx;
            m.shelf_lift += v.dy;
        }
        ObjectRef::Surface(role) => {
            for pt in &mut p.surfaces.slot_mut(role).as_mut().ok_or(missing)?.points {
                *pt = pt.translated(v);
            }
        }
        ObjectRef::PipeType(_) => return Err(EditError::NotMovable(ObjectKind::PipeType)),
    }
    Ok(())
}

/// Where a copy goes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopyAnchor {
    /// New axis X, section center or text origin; only `x` is used for
    /// axis-only objects.
    Point(NaturalPoint),
    /// Section an elevation mark copy is bound to.
    Section(ObjectId),
}

/// Deep-copies `source` to `anchor` under a fresh id. Leaders and
/// dimensions attached to the source stay with the source.
pub fn copy_object(profile: &mut Profile, source: ObjectRef, anchor: CopyAnchor) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let missing = EditError::Unresolved(source);
        let kind = source.kind();
        let point = match anchor {
            CopyAnchor::Point(pt) => Some(pt),
            CopyAnchor::Section(_) => None,
        };
        let need_point = || point.ok_or(EditError::BadAnchor(kind));
        let created = match source {
            ObjectRef::AboveGround(id) => {
                let mut o = p.above_ground.get(&id).ok_or(missing)?.clone();
                o.axis_x = need_point()?.x;
                let new = p.allocate_id();
                p.above_ground.insert(new, o);
                ObjectRef::AboveGround(new)
            }
            ObjectRef::Section(id) => {
                let mut o = p.sections.get(&id).ok_or(missing)?.clone();
                o.center = need_point()?;
                let new = p.allocate_id();
                p.sections.insert(new, o);
                ObjectRef::Section(new)
            }
            ObjectRef::Well(id) => {
                let mut o = p.wells.get(&id).ok_or(missing)?.clone();
                o.axis_x = need_point()?.x;
                let new = p.allocate_id();
                p.wells.insert(new, o);
                ObjectRef::Well(new)
            }
            ObjectRef::Casing(id) => {
                let mut o = p.casings.get(&id).ok_or(missing)?.clone();
                o.center_x = need_point()?.x;
                let new = p.allocate_id();
                p.casings.insert(new, o);
                ObjectRef::Casing(new)
            }
            ObjectRef::Text(id) => {
                let mut o = p.texts.get(&id).ok_or(missing)?.clone();
                o.origin = need_point()?;
                let new = p.allocate_id();
                p.texts.insert(new, o);
                ObjectRef::Text(new)
            }
            ObjectRef::ElevationMark(id) => {
                let mut o = p.elevation_marks.get(&id).ok_or(missing)?.clone();
                let CopyAnchor::Section(s) = anchor else {
                    return Err(EditError::BadAnchor(kind));
                };
                o.section = s;
                let new = p.allocate_id();
                p.elevation_marks.insert(new, o);
                ObjectRef::ElevationMark(new)
            }
            _ => return Err(EditError::NotCopyable(kind)),
        };
        res.created.insert(created);
        Ok(())
    })
}

/// Full replacement value of one object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectValue {
    AboveGround(AboveGroundObject),
    Section(UtilitySection),
    TurnPoint(TurnPoint),
    Well(Well),
    Casing(Casing),
    PipeType(PipeType),
    Pipe(Pipe),
    Text(TextNote),
    Leader(Leader),
    Dimension(ChainDimension),
    ElevationMark(ElevationMark),
    Surface(Polyline),
}

impl ObjectValue {
    pub fn kind(&self) -> ObjectKind {
        match self {
            Self::AboveGround(_) => ObjectKind::AboveGround,
            Self::Section(_) => ObjectKind::Section,
            Self::TurnPoint(_) => ObjectKind::TurnPoint,
            Self::Well(_) => ObjectKind::Well,
            Self::Casing(_) => ObjectKind::Casing,
            Self::PipeType(_) => ObjectKind::PipeType,
            Self::Pipe(_) => ObjectKind::Pipe,
            Self::Text(_) => ObjectKind::Text,
            Self::Leader(_) => ObjectKind::Leader,
            Self::Dimension(_) => ObjectKind::Dimension,
            Self::ElevationMark(_) => ObjectKind::ElevationMark,
            Self::Surface(_) => ObjectKind::Surface,
        }
    }

    /// Current value of `r`.
    pub fn of(p: &Profile, r: ObjectRef) -> Option<Self> {
        Some(match r {
            ObjectRef::AboveGround(id) => Self::AboveGround(p.above_ground.get(&id)?.clone()),
            ObjectRef::Section(id) => Self::Section(p.sections.get(&id)?.clone()),
            ObjectRef::TurnPoint(id) => Self::TurnPoint(p.turn_points.get(&id)?.clone()),
            ObjectRef::Well(id) => Self::Well(p.wells.get(&id)?.clone()),
            ObjectRef::Casing(id) => Self::Casing(p.casings.get(&id)?.clone()),
            ObjectRef::PipeType(id) => Self::PipeType(p.pipe_types.get(&id)?.clone()),
            ObjectRef::Pipe(id) => Self::Pipe(p.pipes.get(&id)?.clone()),
            ObjectRef::Text(id) => Self::Text(p.texts.get(&id)?.clone()),
            ObjectRef::Leader(id) => Self::Leader(p.leaders.get(&id)?.clone()),
            ObjectRef::Dimension(id) => Self::Dimension(p.dimensions.get(&id)?.clone()),
            ObjectRef::ElevationMark(id) => Self::ElevationMark(p.elevation_marks.get(&id)?.clone()),
            ObjectRef::Surface(role) => Self::Surface(p.surfaces.get(role)?.clone()),
        })
    }
}

/// Replaces the parameters of `target`. Coordinate links fire on the next
/// derivation, so casings follow a changed pipe type at once.
pub fn set_properties(profile: &mut Profile, target: ObjectRef, value: ObjectValue) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        if !p.contains(target) {
            return Err(EditError::Unresolved(target));
        }
        if value.kind() != target.kind() {
            return Err(EditError::BadProperties(format!(
                "{} value given for {target}",
                value.kind()
            )));
        }
        let before = touched_by(p, target);
        write_value(p, target, value);
        res.changed.insert(target);
        res.changed.extend(before);
        res.changed.extend(touched_by(p, target));
        Ok(())
    })
}

/// Applies a JSON merge patch to the parameters of `target`.
pub fn patch_properties(profile: &mut Profile, target: ObjectRef, patch: &Value) -> Result<EditResult, EditError> {
    let current = ObjectValue::of(profile, target).ok_or(EditError::Unresolved(target))?;
    let mut json = serde_json::to_value(&current).map_err(|e| EditError::BadProperties(e.to_string()))?;
    let inner = json
        .as_object_mut()
        .and_then(|m| m.values_mut().next())
        .ok_or_else(|| EditError::BadProperties("unexpected value shape".into()))?;
    merge_patch(inner, patch);
    let value: ObjectValue = serde_json::from_value(json).map_err(|e| EditError::BadProperties(e.to_string()))?;
    set_properties(profile, target, value)
}

/// JSON merge patch: objects merge per key, `null` removes a key, anything
/// else replaces the target.
pub fn merge_patch(target: &mut Value, patch: &Value) {
    let Value::Object(fields) = patch else {
        *target = patch.clone();
        return;
    };
    if !target.is_object() {
        *target = Value::Object(Default::default());
    }
    let map = target.as_object_mut().expect("object ensured above");
    for (k, v) in fields {
        if v.is_null() {
            map.remove(k);
        } else {
            merge_patch(map.entry(k.clone()).or_insert(Value::Null), v);
        }
    }
}

fn write_value(p: &mut Profile, target: ObjectRef, value: ObjectValue) {
    match (target, value) {
        (ObjectRef::AboveGround(id), ObjectValue::AboveGround(v)) => drop(p.above_ground.insert(id, v)),
        (ObjectRef::Section(id), ObjectValue::Section(v)) => drop(p.sections.insert(id, v)),
        (ObjectRef::TurnPoint(id), ObjectValue::TurnPoint(v)) => drop(p.turn_points.insert(id, v)),
        (ObjectRef::Well(id), ObjectValue::Well(v)) => drop(p.wells.insert(id, v)),
        (ObjectRef::Casing(id), ObjectValue::Casing(v)) => drop(p.casings.insert(id, v)),
        (ObjectRef::PipeType(id), ObjectValue::PipeType(v)) => drop(p.pipe_types.insert(id, v)),
        (ObjectRef::Pipe(id), ObjectValue::Pipe(v)) => drop(p.pipes.insert(id, v)),
        (ObjectRef::Text(id), ObjectValue::Text(v)) => drop(p.texts.insert(id, v)),
        (ObjectRef::Leader(id), ObjectValue::Leader(v)) => drop(p.leaders.insert(id, v)),
        (ObjectRef::Dimension(id), ObjectValue::Dimension(v)) => drop(p.dimensions.insert(id, v)),
        (ObjectRef::ElevationMark(id), ObjectValue::ElevationMark(v)) => drop(p.elevation_marks.insert(id, v)),
        (ObjectRef::Surface(role), ObjectValue::Surface(v)) => *p.surfaces.slot_mut(role) = Some(v),
        _ => unreachable!("kinds checked by the caller"),
    }
}

/// Objects regenerated when the parameters of `r` change.
fn touched_by(p: &Profile, r: ObjectRef) -> Vec<ObjectRef> {
    let mut out = dependents(p, r);
    match r {
        ObjectRef::Pipe(id) => out.extend(pipe_dependents(p, id)),
        ObjectRef::PipeType(t) => {
            for (&id, q) in &p.pipes {
                if q.type_ref == t {
                    out.push(ObjectRef::Pipe(id));
                    out.extend(pipe_dependents(p, id));
                }
            }
        }
        ObjectRef::Surface(role) => out.extend(surface_dependents(p, role)),
        ObjectRef::Text(id) => out.extend(p.leaders_of(ObjectRef::Text(id)).into_iter().map(ObjectRef::Leader)),
        _ => {}
    }
    out
}

/// Objects drawn against a surface: wells and crossings hang off the
/// project ground line.
pub(crate) fn surface_dependents(p: &Profile, role: SurfaceRole) -> Vec<ObjectRef> {
    if role != SurfaceRole::Project {
        return Vec::new();
    }
    p.wells
        .keys()
        .map(|&id| ObjectRef::Well(id))
        .chain(p.above_ground.keys().map(|&id| ObjectRef::AboveGround(id)))
        .collect()
}

pub fn edit_text(profile: &mut Profile, text: ObjectId, lines: Vec<String>) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        if lines.is_empty() {
            return Err(EditError::EmptyText);
        }
        let t = p.texts.get_mut(&text).ok_or(EditError::Unresolved(ObjectRef::Text(text)))?;
        t.lines = lines;
        res.changed.insert(ObjectRef::Text(text));
        Ok(())
    })
}

/// Moves the whole drawing on the sheet. Natural-space data is relative to
/// the table anchor and stays as is. `delta` is in sheet mm, Y down.
pub fn move_profile(profile: &mut Profile, delta: Vector) -> Result<EditResult, EditError> {
    transact(profile, |p, _| {
        let a = &mut p.settings.table.top_right_of_header;
        a.x += delta.dx;
        a.y += delta.dy;
        Ok(())
    })
}

pub fn update_settings(profile: &mut Profile, settings: GeneralSettings) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        p.settings = settings;
        res.changed.extend(p.object_refs());
        res.changed.extend(p.surfaces.iter().map(|(r, _)| ObjectRef::Surface(r)).collect::<Vec<_>>());
        Ok(())
    })
}

pub fn update_defaults(profile: &mut Profile, defaults: DefaultSettings) -> Result<EditResult, EditError> {
    transact(profile, |p, _| {
        p.defaults = defaults;
        Ok(())
    })
}

/// Adds an extension line to an existing dimension; a new gap gets the
/// default text offset.
pub fn add_dimension_ref(profile: &mut Profile, dimension: ObjectId, axis: AxisRef) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let offset = p.defaults.dimension.text_offset;
        let d = p
            .dimensions
            .get_mut(&dimension)
            .ok_or(EditError::Unresolved(ObjectRef::Dimension(dimension)))?;
        d.refs.push(axis);
        d.text_offsets.push(offset);
        res.changed.insert(ObjectRef::Dimension(dimension));
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::{casing_geometry, well_extents};
    use crate::model::{validate, Rule};
    use serde_json::json;

    fn pipe_type(d: f64) -> PipeType {
        PipeType {
            outer_diameter: d,
            name: format!("Труба {d}"),
            material: String::new(),
            insulation: String::new(),
            spec: Default::default(),
        }
    }

    fn created(r: &EditResult) -> ObjectRef {
        *r.created.iter().next().unwrap()
    }

    fn with_pipe(d: f64) -> (Profile, ObjectId, ObjectId) {
        let mut p = Profile::new();
        let t = created(&add_object(&mut p, NewObject::PipeType(pipe_type(d))).unwrap()).id().unwrap();
        let q = created(
            &add_object(
                &mut p,
                NewObject::Pipe(PipeDraft {
                    type_ref: Some(t),
                    axis: vec![NaturalPoint::new(0.0, 97000.0), NaturalPoint::new(20000.0, 96800.0)],
                    ..Default::default()
                }),
            )
            .unwrap(),
        );
        (p, t, q.id().unwrap())
    }

    #[test]
    fn well_from_defaults() {
        let mut p = Profile::new();
        let r = add_object(&mut p, NewObject::Well(WellDraft { axis_x: 15000.0, ..Default::default() })).unwrap();
        let ObjectRef::Well(id) = created(&r) else { panic!() };
        let w = &p.wells[&id];
        let d = DefaultSettings::default().well;
        assert_eq!((w.kind, w.width, w.overshoot_below_pipe, w.color), (d.kind, d.width, d.overshoot_below_pipe, d.color));
        assert_eq!(w.designation, "1");
    }

    #[test]
    fn one_point_pipe_rejected() {
        let (mut p, _, _) = with_pipe(630.0);
        let before = p.clone();
        let err = add_object(
            &mut p,
            NewObject::Pipe(PipeDraft { axis: vec![NaturalPoint::new(0.0, 0.0)], ..Default::default() }),
        )
        .unwrap_err();
        let EditError::Invalid(v) = err else { panic!("{err:?}") };
        assert!(v.iter().any(|x| x.rule == Rule::TooFewPoints));
        assert_eq!(p, before);
    }

    #[test]
    fn pipe_without_any_type() {
        let mut p = Profile::new();
        let err = add_object(&mut p, NewObject::Pipe(PipeDraft::default())).unwrap_err();
        assert_eq!(err, EditError::NoPipeType);
    }

    #[test]
    fn pipe_updates_last_used() {
        let (p, t, _) = with_pipe(630.0);
        assert_eq!(p.defaults.pipe.last_type, Some(t));
    }

    #[test]
    fn casing_follows_pipe_type_change() {
        let (mut p, t, q) = with_pipe(630.0);
        let c = created(
            &add_object(
                &mut p,
                NewObject::Casing(CasingDraft {
                    center_x: 8000.0,
                    link: Some(CasingLink::Proportional(1.5)),
                    ..Default::default()
                }),
            )
            .unwrap(),
        );
        let cid = c.id().unwrap();
        assert_eq!(casing_geometry(&p, cid).unwrap().diameter, 945.0);

        let t2 = created(&add_object(&mut p, NewObject::PipeType(pipe_type(820.0))).unwrap()).id().unwrap();
        let r = patch_properties(&mut p, ObjectRef::Pipe(q), &json!({"type_ref": t2.0})).unwrap();
        assert!(r.changed.contains(&c));
        assert_eq!(casing_geometry(&p, cid).unwrap().diameter, 1230.0);
        assert_eq!(p.pipes[&q].type_ref, t2);
        assert_ne!(t, t2);
    }

    #[test]
    fn section_wall_too_thick() {
        let mut p = Profile::new();
        let s = created(
            &add_object(
                &mut p,
                NewObject::Section(SectionDraft { center: NaturalPoint::new(5000.0, 98000.0), ..Default::default() }),
            )
            .unwrap(),
        );
        let err = patch_properties(&mut p, s, &json!({"kind": {"pipe": {"wall": 100.0}}})).unwrap_err();
        let EditError::Invalid(v) = err else { panic!("{err:?}") };
        assert!(v.iter().any(|x| x.rule == Rule::WallTooThick));
    }

    #[test]
    fn line_kind_change_is_local() {
        let mut p = Profile::new();
        let w = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 0.0, ..Default::default() })).unwrap());
        let r = patch_properties(&mut p, w, &json!({"line_kind": "solid_thin"})).unwrap();
        assert_eq!(r.changed.iter().copied().collect::<Vec<_>>(), vec![w]);
        assert_eq!(p.wells[&w.id().unwrap()].line_kind, LineKind::SolidThin);
    }

    fn text_with_leaders(p: &mut Profile) -> (ObjectRef, ObjectRef, Vec<ObjectRef>) {
        let w = created(&add_object(p, NewObject::Well(WellDraft { axis_x: 15000.0, ..Default::default() })).unwrap());
        let t = created(
            &add_object(
                p,
                NewObject::Text(TextDraft {
                    lines: vec!["КК1".into()],
                    origin: NaturalPoint::new(16000.0, 101000.0),
                    ..Default::default()
                }),
            )
            .unwrap(),
        );
        let leaders = (0..2)
            .map(|i| {
                created(
                    &add_object(
                        p,
                        NewObject::Leader(LeaderDraft {
                            text: t.id().unwrap(),
                            target: LeaderTarget::Well(w.id().unwrap()),
                            offset: Some(PaperOffset { dx: i as f64, dy: 0.0 }),
                        }),
                    )
                    .unwrap(),
                )
            })
            .collect();
        (w, t, leaders)
    }

    #[test]
    fn delete_text_takes_leaders() {
        let mut p = Profile::new();
        let (_, t, leaders) = text_with_leaders(&mut p);
        let r = delete_object(&mut p, t).unwrap();
        let mut expect: Vec<ObjectRef> = leaders.clone();
        expect.push(t);
        expect.sort();
        assert_eq!(r.deleted.into_iter().collect::<Vec<_>>(), expect);
        assert!(p.leaders.is_empty());
    }

    #[test]
    fn delete_well_in_two_ref_dimension() {
        let mut p = Profile::new();
        let a = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 0.0, ..Default::default() })).unwrap());
        let b = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 15000.0, ..Default::default() })).unwrap());
        let d = created(
            &add_object(
                &mut p,
                NewObject::Dimension(DimensionDraft {
                    refs: vec![AxisRef::Well(b.id().unwrap()), AxisRef::Well(a.id().unwrap())],
                    dim_line_offset: None,
                    text_offsets: None,
                }),
            )
            .unwrap(),
        );
        // Refs were sorted on insertion.
        assert_eq!(p.dimensions[&d.id().unwrap()].refs[0], AxisRef::Well(a.id().unwrap()));
        let r = delete_object(&mut p, a).unwrap();
        assert!(r.deleted.contains(&d));
        assert!(p.dimensions.is_empty());
    }

    #[test]
    fn delete_groundwater_alone() {
        let mut p = Profile::new();
        add_object(
            &mut p,
            NewObject::Surface(SurfaceDraft {
                role: SurfaceRole::Groundwater,
                points: vec![NaturalPoint::new(0.0, 98000.0), NaturalPoint::new(9000.0, 97900.0)],
                color: None,
            }),
        )
        .unwrap();
        let r = delete_object(&mut p, ObjectRef::Surface(SurfaceRole::Groundwater)).unwrap();
        assert_eq!(r.deleted.len(), 1);
        assert!(r.changed.is_empty());
        assert!(p.surfaces.groundwater.is_none());
    }

    #[test]
    fn type_in_use_not_deleted() {
        let (mut p, t, q) = with_pipe(630.0);
        assert_eq!(delete_object(&mut p, ObjectRef::PipeType(t)), Err(EditError::TypeInUse(ObjectRef::PipeType(t))));
        delete_object(&mut p, ObjectRef::Pipe(q)).unwrap();
        delete_object(&mut p, ObjectRef::PipeType(t)).unwrap();
        assert_eq!(p.defaults.pipe.last_type, None);
    }

    #[test]
    fn moving_a_well_resorts_dimensions() {
        let mut p = Profile::new();
        let a = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 0.0, ..Default::default() })).unwrap());
        let b = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 15000.0, ..Default::default() })).unwrap());
        let c = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 30000.0, ..Default::default() })).unwrap());
        let axes: Vec<AxisRef> = [a, b, c].iter().map(|r| r.as_axis().unwrap()).collect();
        let d = created(
            &add_object(&mut p, NewObject::Dimension(DimensionDraft { refs: axes.clone(), dim_line_offset: None, text_offsets: None }))
                .unwrap(),
        );
        let r = move_object(&mut p, MoveTarget::Object(a), Vector { dx: 18000.0, dy: 0.0 }).unwrap();
        assert!(r.changed.contains(&d));
        assert_eq!(p.dimensions[&d.id().unwrap()].refs, vec![axes[1], axes[0], axes[2]]);
    }

    #[test]
    fn joint_past_neighbor_rejected() {
        let mut p = Profile::new();
        let t = created(&add_object(&mut p, NewObject::PipeType(pipe_type(500.0))).unwrap()).id();
        let q = created(
            &add_object(
                &mut p,
                NewObject::Pipe(PipeDraft {
                    type_ref: t,
                    axis: vec![
                        NaturalPoint::new(0.0, 97000.0),
                        NaturalPoint::new(10000.0, 96900.0),
                        NaturalPoint::new(20000.0, 96800.0),
                    ],
                    ..Default::default()
                }),
            )
            .unwrap(),
        );
        let target = MoveTarget::PipeVertex { pipe: q.id().unwrap(), index: 1 };
        assert_eq!(move_object(&mut p, target, Vector { dx: 10001.0, dy: 0.0 }), Err(EditError::NonMonotone));
    }

    #[test]
    fn moving_text_keeps_leader_tips() {
        let mut p = Profile::new();
        let (w, t, leaders) = text_with_leaders(&mut p);
        let tip = |p: &Profile, l: ObjectRef| {
            let leader = &p.leaders[&l.id().unwrap()];
            (linkage::leader_anchor(p, leader.target).unwrap(), leader.offset)
        };
        let before: Vec<_> = leaders.iter().map(|&l| tip(&p, l)).collect();
        let r = move_object(&mut p, MoveTarget::Object(t), Vector { dx: 5.0, dy: -3.0 }).unwrap();
        assert!(leaders.iter().all(|l| r.changed.contains(l)));
        let after: Vec<_> = leaders.iter().map(|&l| tip(&p, l)).collect();
        assert_eq!(before, after);
        assert_eq!(p.texts[&t.id().unwrap()].origin, NaturalPoint::new(16005.0, 100997.0));
        let _ = w;
    }

    #[test]
    fn copies() {
        let mut p = Profile::new();
        let (w, _, _) = text_with_leaders(&mut p);
        let r = copy_object(&mut p, w, CopyAnchor::Point(NaturalPoint::new(30000.0, 0.0))).unwrap();
        let ObjectRef::Well(copy) = created(&r) else { panic!() };
        assert_eq!(p.wells[&copy].axis_x, 30000.0);
        assert!(p.leaders_of(ObjectRef::Well(copy)).is_empty());
    }

    #[test]
    fn pipe_not_copyable() {
        let (mut p, _, q) = with_pipe(630.0);
        assert_eq!(
            copy_object(&mut p, ObjectRef::Pipe(q), CopyAnchor::Point(NaturalPoint::default())),
            Err(EditError::NotCopyable(ObjectKind::Pipe))
        );
    }

    #[test]
    fn mark_copied_to_other_section() {
        let mut p = Profile::new();
        let s1 = created(&add_object(&mut p, NewObject::Section(SectionDraft { center: NaturalPoint::new(1000.0, 98000.0), ..Default::default() })).unwrap());
        let s2 = created(&add_object(&mut p, NewObject::Section(SectionDraft { center: NaturalPoint::new(9000.0, 98000.0), ..Default::default() })).unwrap());
        let m = created(
            &add_object(
                &mut p,
                NewObject::ElevationMark(ElevationMarkDraft {
                    section: s1.id().unwrap(),
                    arrow_shift: None,
                    shelf_dir: None,
                    shelf_lift: None,
                }),
            )
            .unwrap(),
        );
        let r = copy_object(&mut p, m, CopyAnchor::Section(s2.id().unwrap())).unwrap();
        assert_eq!(p.elevation_marks[&created(&r).id().unwrap()].section, s2.id().unwrap());
        assert_eq!(
            copy_object(&mut p, m, CopyAnchor::Point(NaturalPoint::default())),
            Err(EditError::BadAnchor(ObjectKind::ElevationMark))
        );
    }

    #[test]
    fn text_editing() {
        let mut p = Profile::new();
        let (_, t, leaders) = text_with_leaders(&mut p);
        let id = t.id().unwrap();
        edit_text(&mut p, id, vec!["%%c630".into(), "Ст".into()]).unwrap();
        assert_eq!(p.texts[&id].lines, vec!["%%c630".to_string(), "Ст".to_string()]);
        assert_eq!(p.leaders.len(), leaders.len());
        assert_eq!(edit_text(&mut p, id, vec![]), Err(EditError::EmptyText));
    }

    #[test]
    fn profile_moves_only_anchor() {
        let (mut p, _, _) = with_pipe(630.0);
        let before = p.clone();
        move_profile(&mut p, Vector { dx: 0.0, dy: 0.0 }).unwrap();
        assert_eq!(p, before);
        move_profile(&mut p, Vector { dx: 100.0, dy: 50.0 }).unwrap();
        let mut expect = before.clone();
        expect.settings.table.top_right_of_header.x += 100.0;
        expect.settings.table.top_right_of_header.y += 50.0;
        assert_eq!(p, expect);
        move_profile(&mut p, Vector { dx: -100.0, dy: -50.0 }).unwrap();
        assert_eq!(p, before);
    }

    #[test]
    fn scale_out_of_range_rejected() {
        let mut p = Profile::new();
        let mut s = p.settings.clone();
        s.build.scales.scale_h = 1600;
        assert!(matches!(update_settings(&mut p, s), Err(EditError::Invalid(_))));
    }

    #[test]
    fn well_depth_follows_surface_edit() {
        let (mut p, _, _) = with_pipe(630.0);
        let w = created(&add_object(&mut p, NewObject::Well(WellDraft { axis_x: 10000.0, overshoot_below_pipe: Some(0.0), ..Default::default() })).unwrap());
        add_object(
            &mut p,
            NewObject::Surface(SurfaceDraft {
                role: SurfaceRole::Project,
                points: vec![NaturalPoint::new(0.0, 100000.0), NaturalPoint::new(20000.0, 100000.0)],
                color: None,
            }),
        )
        .unwrap();
        let r = move_object(&mut p, MoveTarget::SurfaceVertex { role: SurfaceRole::Project, index: 1 }, Vector { dx: 0.0, dy: 1000.0 }).unwrap();
        assert!(r.changed.contains(&w));
        let e = well_extents(&p, w.id().unwrap()).unwrap();
        assert_eq!(e.top, 100500.0);
        assert!(validate(&p).is_empty());
    }
}
