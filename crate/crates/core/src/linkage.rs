// SPDX-License-Identifier: Apache-2.0

//! Links between objects.
//!
//! Referential links (leaders, dimensions and elevation marks hang on other
//! objects) drive cascades on deletion. Coordinate links are evaluated on
//! demand: well depth follows the ground and the pipes under the well axis,
//! casing diameter follows the carrier pipe, above-ground objects cut into
//! the project ground line.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::model::{
    AxisRef, CasingLink, LeaderTarget, NaturalPoint, ObjectId, ObjectRef, Profile,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinkError {
    #[error("unresolved reference {0}")]
    Unresolved(ObjectRef),
    #[error("pipe diameter must be positive, got {0}")]
    NonPositiveDiameter(f64),
    #[error("x = {x} outside the span of pipe:{pipe}")]
    OutOfSpan { pipe: ObjectId, x: f64 },
}

/// Everything that has to change when one object is deleted.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CascadePlan {
    pub to_delete: BTreeSet<ObjectRef>,
    pub to_regenerate: BTreeSet<ObjectRef>,
    /// Extension lines to remove from dimensions that survive.
    pub dim_refs_to_drop: BTreeMap<ObjectId, Vec<AxisRef>>,
}

impl CascadePlan {
    pub fn is_empty(&self) -> bool {
        self.to_delete.is_empty() && self.to_regenerate.is_empty() && self.dim_refs_to_drop.is_empty()
    }
}

/// Dependents of `victim`: leaders on it, elevation marks on a section,
/// dimensions using its axis. A dimension left with fewer than two
/// extension lines is deleted, otherwise it loses the line and regenerates.
pub fn cascade_of(profile: &Profile, victim: ObjectRef) -> Result<CascadePlan, LinkError> {
    if !profile.contains(victim) {
        return Err(LinkError::Unresolved(victim));
    }
    let mut plan = CascadePlan::default();
    for (&id, leader) in &profile.leaders {
        let hit = match victim {
            ObjectRef::Text(t) => leader.text == t,
            other => ObjectRef::from(leader.target) == other,
        };
        if hit {
            plan.to_delete.insert(ObjectRef::Leader(id));
        }
    }
    if let ObjectRef::Section(s) = victim {
        plan.to_delete
            .extend(profile.marks_of(s).into_iter().map(ObjectRef::ElevationMark));
    }
    if let Some(axis) = victim.as_axis() {
        for (&id, dim) in &profile.dimensions {
            let hits = dim.refs.iter().filter(|&&r| r == axis).count();
            if hits == 0 {
                continue;
            }
            if dim.refs.len() - hits < 2 {
                plan.to_delete.insert(ObjectRef::Dimension(id));
            } else {
                plan.dim_refs_to_drop.insert(id, vec![axis]);
                plan.to_regenerate.insert(ObjectRef::Dimension(id));
            }
        }
    }
    Ok(plan)
}

/// Removes `victim` and executes `plan` on `profile`.
pub(crate) fn apply_cascade(profile: &mut Profile, victim: ObjectRef, plan: &CascadePlan) {
    profile.remove_raw(victim);
    for &r in &plan.to_delete {
        profile.remove_raw(r);
    }
    for (id, drops) in &plan.dim_refs_to_drop {
        let Some(dim) = profile.dimensions.get_mut(id) else { continue };
        for drop in drops {
            while let Some(pos) = dim.refs.iter().position(|r| r == drop) {
                dim.refs.remove(pos);
                if !dim.text_offsets.is_empty() {
                    // The gaps on both sides of the removed line fuse into one.
                    let gap = pos.min(dim.text_offsets.len() - 1);
                    dim.text_offsets.remove(gap);
                }
            }
        }
    }
    if let ObjectRef::PipeType(t) = victim {
        if profile.defaults.pipe.last_type == Some(t) {
            profile.defaults.pipe.last_type = None;
        }
    }
}

/// Casing diameter for a carrier pipe of `pipe_diameter`. Proportional links
/// round to whole millimeters; offset links add exactly.
pub fn casing_diameter(link: CasingLink, pipe_diameter: f64) -> Result<f64, LinkError> {
    if !(pipe_diameter.is_finite() && pipe_diameter > 0.0) {
        return Err(LinkError::NonPositiveDiameter(pipe_diameter));
    }
    Ok(match link {
        CasingLink::Proportional(k) => (k * pipe_diameter).round(),
        CasingLink::Offset(c) => pipe_diameter + c,
    })
}

fn pipe_diameter(profile: &Profile, pipe: ObjectId) -> Result<f64, LinkError> {
    let p = profile.pipes.get(&pipe).ok_or(LinkError::Unresolved(ObjectRef::Pipe(pipe)))?;
    profile
        .pipe_types
        .get(&p.type_ref)
        .map(|t| t.outer_diameter)
        .ok_or(LinkError::Unresolved(ObjectRef::PipeType(p.type_ref)))
}

/// Elevation of the pipe's outer bottom at `x`: axis elevation minus half
/// the outer diameter.
pub fn pipe_bottom_at(profile: &Profile, pipe: ObjectId, x: f64) -> Result<f64, LinkError> {
    let d = pipe_diameter(profile, pipe)?;
    let axis = &profile.pipes[&pipe].axis;
    crate::model::interpolate_y(axis, x)
        .map(|y| y - d / 2.0)
        .ok_or(LinkError::OutOfSpan { pipe, x })
}

/// Pipes whose axis span covers `x`, with their bottom elevation there.
pub fn pipes_covering(profile: &Profile, x: f64) -> Vec<(ObjectId, f64)> {
    profile
        .pipes
        .keys()
        .filter_map(|&id| pipe_bottom_at(profile, id, x).ok().map(|b| (id, b)))
        .collect()
}

/// The pipe with the lowest bottom at `x`; ties go to the smaller id.
pub fn lowest_pipe_at(profile: &Profile, x: f64) -> Option<(ObjectId, f64)> {
    pipes_covering(profile, x)
        .into_iter()
        .fold(None, |best, cur| match best {
            Some((_, b)) if b <= cur.1 => best,
            _ => Some(cur),
        })
}

/// Project ground elevation at `x`, or the conditional ground level when
/// no project surface covers it.
pub fn ground_at(profile: &Profile, x: f64) -> f64 {
    profile
        .surfaces
        .project
        .as_ref()
        .and_then(|s| s.elevation_at(x))
        .unwrap_or(profile.settings.build.conditional_ground_level)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellExtents {
    pub top: f64,
    pub bottom: f64,
    pub depth: f64,
}

/// Vertical extent of a well. The lowest pipe under the axis governs the
/// bottom; conditional levels stand in for missing ground or pipes.
pub fn well_extents(profile: &Profile, well: ObjectId) -> Result<WellExtents, LinkError> {
    let w = profile.wells.get(&well).ok_or(LinkError::Unresolved(ObjectRef::Well(well)))?;
    let top = ground_at(profile, w.axis_x);
    let pipe_bottom = lowest_pipe_at(profile, w.axis_x)
        .map(|(_, b)| b)
        .unwrap_or(profile.settings.build.conditional_pipe_bottom_level);
    let bottom = pipe_bottom - w.overshoot_below_pipe;
    Ok(WellExtents { top, bottom, depth: top - bottom })
}

/// Derived placement of a casing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasingGeometry {
    pub center: NaturalPoint,
    pub diameter: f64,
    /// Carrier pipe, `None` when the casing sits on no pipe.
    pub host: Option<ObjectId>,
}

pub fn casing_geometry(profile: &Profile, casing: ObjectId) -> Result<CasingGeometry, LinkError> {
    let c = profile.casings.get(&casing).ok_or(LinkError::Unresolved(ObjectRef::Casing(casing)))?;
    casing_geometry_at(profile, c.center_x, c.link)
}

pub(crate) fn casing_geometry_at(
    profile: &Profile,
    center_x: f64,
    link: CasingLink,
) -> Result<CasingGeometry, LinkError> {
    match lowest_pipe_at(profile, center_x) {
        Some((pipe, bottom)) => {
            let d = pipe_diameter(profile, pipe)?;
            Ok(CasingGeometry {
                center: NaturalPoint::new(center_x, bottom + d / 2.0),
                diameter: casing_diameter(link, d)?,
                host: Some(pipe),
            })
        }
        None => {
            let d = profile.settings.conditional_pipe_diameter;
            let bottom = profile.settings.build.conditional_pipe_bottom_level;
            Ok(CasingGeometry {
                center: NaturalPoint::new(center_x, bottom + d / 2.0),
                diameter: casing_diameter(link, d)?,
                host: None,
            })
        }
    }
}

/// Casings currently carried by `pipe`.
pub fn casings_on_pipe(profile: &Profile, pipe: ObjectId) -> Vec<ObjectId> {
    profile
        .casings
        .keys()
        .copied()
        .filter(|&id| matches!(casing_geometry(profile, id), Ok(g) if g.host == Some(pipe)))
        .collect()
}

/// Natural point a leader's stored offset is measured from: the pipe axis
/// of a section, the casing symbol center, the mid-bottom of a well.
pub fn leader_anchor(profile: &Profile, target: LeaderTarget) -> Result<NaturalPoint, LinkError> {
    match target {
        LeaderTarget::Section(id) => profile
            .sections
            .get(&id)
            .map(|s| s.center)
            .ok_or(LinkError::Unresolved(target.into())),
        LeaderTarget::Casing(id) => casing_geometry(profile, id).map(|g| g.center),
        LeaderTarget::Well(id) => {
            let e = well_extents(profile, id)?;
            Ok(NaturalPoint::new(profile.wells[&id].axis_x, e.bottom))
        }
    }
}

/// A gap in the drawn project ground line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutInterval {
    pub lo: f64,
    pub hi: f64,
    /// Above-ground objects merged into this gap.
    pub objects: Vec<ObjectId>,
}

/// Where above-ground symbols cut into the project ground line: each
/// object's width around its axis, clipped to the surface span, with
/// overlapping or touching intervals merged. Sorted and pairwise disjoint.
pub fn embed_cut_intervals(profile: &Profile) -> Vec<CutInterval> {
    let Some((s_lo, s_hi)) = profile.surfaces.project.as_ref().and_then(|s| s.span()) else {
        return Vec::new();
    };
    let mut raw: Vec<CutInterval> = profile
        .above_ground
        .iter()
        .filter_map(|(&id, o)| {
            let half = o.width? / 2.0;
            let lo = (o.axis_x - half).max(s_lo);
            let hi = (o.axis_x + half).min(s_hi);
            (lo < hi).then(|| CutInterval { lo, hi, objects: vec![id] })
        })
        .collect();
    raw.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut merged: Vec<CutInterval> = Vec::with_capacity(raw.len());
    for iv in raw {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                last.hi = last.hi.max(iv.hi);
                last.objects.extend(iv.objects);
            }
            _ => merged.push(iv),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn well(x: f64, overshoot: f64) -> Well {
        Well {
            kind: WellKind::Manhole,
            axis_x: x,
            width: 1000.0,
            overshoot_below_pipe: overshoot,
            depth_label_offset: 5.0,
            designation: String::new(),
            color: Color(7),
            line_kind: LineKind::SolidMain,
        }
    }

    fn pipe_type(d: f64) -> PipeType {
        PipeType {
            outer_diameter: d,
            name: format!("Труба {d}"),
            material: String::new(),
            insulation: String::new(),
            spec: SpecProps::default(),
        }
    }

    fn add_pipe(p: &mut Profile, d: f64, axis: &[(f64, f64)]) -> ObjectId {
        let t = p.allocate_id();
        p.pipe_types.insert(t, pipe_type(d));
        let id = p.allocate_id();
        p.pipes.insert(
            id,
            Pipe {
                type_ref: t,
                color: Color(7),
                axis: axis.iter().map(|&(x, y)| NaturalPoint::new(x, y)).collect(),
            },
        );
        id
    }

    fn text(p: &mut Profile) -> ObjectId {
        let id = p.allocate_id();
        p.texts.insert(
            id,
            TextNote {
                lines: vec!["x".into()],
                font: FontSetting::default(),
                line_step: 4.0,
                color: Color(1),
                origin: NaturalPoint::default(),
            },
        );
        id
    }

    fn turn(p: &mut Profile, x: f64) -> ObjectId {
        let id = p.allocate_id();
        p.turn_points.insert(
            id,
            TurnPoint { x, over_table_text: String::new(), designation: String::new() },
        );
        id
    }

    fn dim(p: &mut Profile, refs: Vec<AxisRef>) -> ObjectId {
        let id = p.allocate_id();
        let n = refs.len();
        p.dimensions.insert(
            id,
            ChainDimension { refs, dim_line_offset: 10.0, text_offsets: vec![1.0; n - 1] },
        );
        id
    }

    #[test]
    fn casing_diameter_examples() {
        assert_eq!(casing_diameter(CasingLink::Proportional(1.5), 630.0), Ok(945.0));
        assert_eq!(casing_diameter(CasingLink::Offset(200.0), 630.0), Ok(830.0));
        assert_eq!(
            casing_diameter(CasingLink::Proportional(1.2), 0.0),
            Err(LinkError::NonPositiveDiameter(0.0))
        );
    }

    #[test]
    fn pipe_bottom_examples() {
        let mut p = Profile::new();
        let id = add_pipe(&mut p, 300.0, &[(0.0, 97000.0), (20000.0, 96800.0)]);
        // Hand oracle: axis elevation minus D/2.
        assert_eq!(pipe_bottom_at(&p, id, 0.0), Ok(97000.0 - 150.0));
        assert_eq!(pipe_bottom_at(&p, id, 10000.0), Ok(96900.0 - 150.0));
        assert_eq!(pipe_bottom_at(&p, id, 25000.0), Err(LinkError::OutOfSpan { pipe: id, x: 25000.0 }));
    }

    #[test]
    fn well_extents_examples() {
        let mut p = Profile::new();
        p.surfaces.project = Some(Polyline::new(
            vec![NaturalPoint::new(-5000.0, 100000.0), NaturalPoint::new(5000.0, 100000.0)],
            Color(7),
        ));
        add_pipe(&mut p, 300.0, &[(0.0, 97000.0), (20000.0, 96800.0)]);
        let w = p.allocate_id();
        p.wells.insert(w, well(0.0, 200.0));
        assert_eq!(
            well_extents(&p, w).unwrap(),
            WellExtents { top: 100000.0, bottom: 96650.0, depth: 3350.0 }
        );

        let mut empty = Profile::new();
        empty.settings.build.conditional_ground_level = 100000.0;
        empty.settings.build.conditional_pipe_bottom_level = 97000.0;
        let w = empty.allocate_id();
        empty.wells.insert(w, well(1234.0, 0.0));
        assert_eq!(
            well_extents(&empty, w).unwrap(),
            WellExtents { top: 100000.0, bottom: 97000.0, depth: 3000.0 }
        );
    }

    #[test]
    fn well_depth_can_be_zero() {
        let mut p = Profile::new();
        p.surfaces.project = Some(Polyline::new(
            vec![NaturalPoint::new(0.0, 96850.0), NaturalPoint::new(1000.0, 96850.0)],
            Color(7),
        ));
        add_pipe(&mut p, 300.0, &[(0.0, 97000.0), (1000.0, 97000.0)]);
        let w = p.allocate_id();
        p.wells.insert(w, well(500.0, 0.0));
        assert_eq!(well_extents(&p, w).unwrap().depth, 0.0);
    }

    #[test]
    fn lowest_pipe_governs_the_well() {
        let mut p = Profile::new();
        add_pipe(&mut p, 300.0, &[(0.0, 97000.0), (1000.0, 97000.0)]);
        add_pipe(&mut p, 500.0, &[(0.0, 96000.0), (1000.0, 96000.0)]);
        let w = p.allocate_id();
        p.wells.insert(w, well(500.0, 100.0));
        assert_eq!(well_extents(&p, w).unwrap().bottom, 96000.0 - 250.0 - 100.0);
    }

    #[test]
    fn cascade_well_with_leader_and_three_ref_dimension() {
        let mut p = Profile::new();
        let w = p.allocate_id();
        p.wells.insert(w, well(0.0, 0.0));
        let a = turn(&mut p, 5000.0);
        let b = turn(&mut p, 9000.0);
        let t = text(&mut p);
        let l = p.allocate_id();
        p.leaders.insert(
            l,
            Leader { text: t, target: LeaderTarget::Well(w), offset: PaperOffset::default() },
        );
        let d = dim(&mut p, vec![AxisRef::Well(w), AxisRef::TurnPoint(a), AxisRef::TurnPoint(b)]);
        let plan = cascade_of(&p, ObjectRef::Well(w)).unwrap();
        assert_eq!(plan.to_delete, BTreeSet::from([ObjectRef::Leader(l)]));
        assert_eq!(plan.to_regenerate, BTreeSet::from([ObjectRef::Dimension(d)]));
        assert_eq!(plan.dim_refs_to_drop, BTreeMap::from([(d, vec![AxisRef::Well(w)])]));

        apply_cascade(&mut p, ObjectRef::Well(w), &plan);
        assert!(validate(&p).is_empty());
        assert_eq!(p.dimensions[&d].refs, vec![AxisRef::TurnPoint(a), AxisRef::TurnPoint(b)]);
        assert_eq!(p.dimensions[&d].text_offsets.len(), 1);
    }

    #[test]
    fn cascade_section_with_mark_and_two_ref_dimension() {
        let mut p = Profile::new();
        let s = p.allocate_id();
        p.sections.insert(
            s,
            UtilitySection {
                kind: SectionKind::Cable,
                center: NaturalPoint::new(3000.0, 98000.0),
                color: Color(7),
            },
        );
        let m = p.allocate_id();
        p.elevation_marks.insert(
            m,
            ElevationMark { section: s, arrow_shift: 5.0, shelf_dir: ShelfDir::Right, shelf_lift: 2.0 },
        );
        let tp = turn(&mut p, 0.0);
        let d = dim(&mut p, vec![AxisRef::TurnPoint(tp), AxisRef::Section(s)]);
        let plan = cascade_of(&p, ObjectRef::Section(s)).unwrap();
        assert_eq!(
            plan.to_delete,
            BTreeSet::from([ObjectRef::ElevationMark(m), ObjectRef::Dimension(d)])
        );
        assert!(plan.to_regenerate.is_empty());
        apply_cascade(&mut p, ObjectRef::Section(s), &plan);
        assert!(validate(&p).is_empty());
    }

    #[test]
    fn cascade_of_lonely_turn_point_is_empty() {
        let mut p = Profile::new();
        let tp = turn(&mut p, 0.0);
        assert!(cascade_of(&p, ObjectRef::TurnPoint(tp)).unwrap().is_empty());
        assert_eq!(
            cascade_of(&p, ObjectRef::Well(ObjectId(42))),
            Err(LinkError::Unresolved(ObjectRef::Well(ObjectId(42))))
        );
    }

    #[test]
    fn cut_intervals() {
        let mut p = Profile::new();
        p.surfaces.project = Some(Polyline::new(
            vec![NaturalPoint::new(0.0, 100000.0), NaturalPoint::new(40000.0, 100000.0)],
            Color(7),
        ));
        let road = |p: &mut Profile, x: f64, w: f64| {
            let id = p.allocate_id();
            p.above_ground.insert(
                id,
                AboveGroundObject {
                    kind: AboveGroundKind::Road,
                    axis_x: x,
                    label: String::new(),
                    color: Color(7),
                    height: None,
                    width: Some(w),
                },
            );
            id
        };
        let r1 = road(&mut p, 12000.0, 6000.0);
        assert_eq!(
            embed_cut_intervals(&p),
            vec![CutInterval { lo: 9000.0, hi: 15000.0, objects: vec![r1] }]
        );
        let r2 = road(&mut p, 16000.0, 4000.0);
        assert_eq!(
            embed_cut_intervals(&p),
            vec![CutInterval { lo: 9000.0, hi: 18000.0, objects: vec![r1, r2] }]
        );
        road(&mut p, 50000.0, 6000.0);
        assert_eq!(embed_cut_intervals(&p).len(), 1);
        let r4 = road(&mut p, 39000.0, 4000.0);
        assert_eq!(
            embed_cut_intervals(&p)[1],
            CutInterval { lo: 37000.0, hi: 40000.0, objects: vec![r4] }
        );
    }

    #[test]
    fn casing_follows_host_pipe() {
        let mut p = Profile::new();
        let pipe = add_pipe(&mut p, 630.0, &[(0.0, 97000.0), (20000.0, 96800.0)]);
        let c = p.allocate_id();
        p.casings.insert(
            c,
            Casing {
                center_x: 10000.0,
                link: CasingLink::Proportional(1.5),
                wall: 10.0,
                length: 8000.0,
                color: Color(7),
            },
        );
        let g = casing_geometry(&p, c).unwrap();
        assert_eq!(g.diameter, 945.0);
        assert_eq!(g.center, NaturalPoint::new(10000.0, 96900.0));
        assert_eq!(g.host, Some(pipe));
        assert_eq!(casings_on_pipe(&p, pipe), vec![c]);

        p.casings.get_mut(&c).unwrap().center_x = 30000.0;
        let g = casing_geometry(&p, c).unwrap();
        assert_eq!(g.host, None);
        assert_eq!(g.diameter, (1.5 * p.settings.conditional_pipe_diameter).round());
    }
}
