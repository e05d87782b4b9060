// SPDX-License-Identifier: Apache-2.0

//! Edits entered through the data table, with their propagation variants.

use super::objects::surface_dependents;
use super::{pipe_dependents, transact, DistanceEdit, EditError, EditResult, GroundEdit, LengthEdit, Side, SlopeEdit};
use crate::datatable::collect_stations;
use crate::linkage;
use crate::model::{interpolate_y, segment_index, NaturalPoint, ObjectId, ObjectRef, Profile, SlopeUnit, SurfaceRole};

/// Makes a ground line pass through `new_elev` at `station_x`.
pub fn edit_ground_elevation(
    profile: &mut Profile,
    role: SurfaceRole,
    station_x: f64,
    new_elev: f64,
    choice: GroundEdit,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        if role == SurfaceRole::Groundwater {
            return Err(EditError::NotGroundSurface);
        }
        let points = &mut p
            .surfaces
            .slot_mut(role)
            .as_mut()
            .ok_or(EditError::SurfaceUnavailable(role))?
            .points;
        let i = segment_index(points, station_x).ok_or(EditError::OutOfSpan(station_x))?;
        let current = interpolate_y(points, station_x).ok_or(EditError::OutOfSpan(station_x))?;
        let (a, b) = (points[i], points[i + 1]);
        match choice {
            GroundEdit::AddVertex => {
                // At a vertex (or a drop) the governing vertex is rewritten.
                if let Some(v) = points.iter().rposition(|q| q.x == station_x) {
                    points[v].y = new_elev;
                } else {
                    points.insert(i + 1, NaturalPoint::new(station_x, new_elev));
                }
            }
            GroundEdit::MoveLeftEnd | GroundEdit::MoveRightEnd => {
                let t = if b.x > a.x { (station_x - a.x) / (b.x - a.x) } else { f64::NAN };
                if choice == GroundEdit::MoveLeftEnd {
                    if !(t < 1.0) {
                        return Err(EditError::ZeroLeverArm);
                    }
                    points[i].y = (new_elev - t * b.y) / (1.0 - t);
                } else {
                    if !(t > 0.0) {
                        return Err(EditError::ZeroLeverArm);
                    }
                    points[i + 1].y = (new_elev - (1.0 - t) * a.y) / t;
                }
            }
            GroundEdit::ShiftSegment => {
                let d = new_elev - current;
                points[i].y += d;
                points[i + 1].y += d;
            }
        }
        res.changed.insert(ObjectRef::Surface(role));
        res.changed.extend(surface_dependents(p, role));
        Ok(())
    })
}

fn segment(p: &Profile, pipe: ObjectId, seg: usize) -> Result<(NaturalPoint, NaturalPoint), EditError> {
    let q = p.pipes.get(&pipe).ok_or(EditError::Unresolved(ObjectRef::Pipe(pipe)))?;
    match (q.axis.get(seg), q.axis.get(seg + 1)) {
        (Some(&a), Some(&b)) => Ok((a, b)),
        _ => Err(EditError::BadIndex(seg)),
    }
}

/// Translates everything of the pipeline on `side` of segment `seg`: the
/// segment's own endpoint on that side, the pipe's joints beyond it, other
/// pipes lying wholly on that side and the casings they carry.
fn shift_side(p: &mut Profile, res: &mut EditResult, pipe: ObjectId, seg: usize, side: Side, dx: f64, dy: f64) {
    let (a, b) = {
        let axis = &p.pipes[&pipe].axis;
        (axis[seg], axis[seg + 1])
    };
    let beyond = |q: &[NaturalPoint]| match side {
        Side::Right => q.first().is_some_and(|f| f.x >= b.x),
        Side::Left => q.last().is_some_and(|l| l.x <= a.x),
    };
    let moved: Vec<ObjectId> = p
        .pipes
        .iter()
        .filter(|(&id, q)| id != pipe && beyond(&q.axis))
        .map(|(&id, _)| id)
        .collect();

    // Casings are found by position, so collect them before anything moves.
    let mut casings: Vec<ObjectId> = Vec::new();
    for (&id, c) in &p.casings {
        let host = linkage::casing_geometry(p, id).ok().and_then(|g| g.host);
        let on_moved_part = match side {
            Side::Right => c.center_x >= b.x,
            Side::Left => c.center_x <= a.x,
        };
        let carried = match host {
            Some(h) if h == pipe => on_moved_part,
            Some(h) => moved.contains(&h),
            None => false,
        };
        if carried {
            casings.push(id);
        }
    }
    for &id in moved.iter().chain([&pipe]) {
        res.changed.extend(pipe_dependents(p, id));
    }

    let axis = &mut p.pipes.get_mut(&pipe).expect("resolved by caller").axis;
    let range = match side {
        Side::Right => seg + 1..axis.len(),
        Side::Left => 0..seg + 1,
    };
    for pt in &mut axis[range] {
        pt.x += dx;
        pt.y += dy;
    }
    for id in &moved {
        for pt in &mut p.pipes.get_mut(id).expect("listed above").axis {
            pt.x += dx;
            pt.y += dy;
        }
    }
    for id in &casings {
        p.casings.get_mut(id).expect("listed above").center_x += dx;
    }
    res.changed.insert(ObjectRef::Pipe(pipe));
    res.changed.extend(moved.iter().map(|&id| ObjectRef::Pipe(id)));
    res.changed.extend(casings.iter().map(|&id| ObjectRef::Casing(id)));
    res.changed.extend(pipe_dependents(p, pipe));
}

/// Sets the horizontal length of one pipe segment by moving the pipeline on
/// the chosen side. With `keep_slope` the moved part also drops or rises so
/// the segment keeps its slope.
pub fn edit_segment_length(
    profile: &mut Profile,
    pipe: ObjectId,
    seg: usize,
    new_len: f64,
    choice: LengthEdit,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        if !(new_len.is_finite() && new_len > 0.0) {
            return Err(EditError::NonPositiveLength);
        }
        let (a, b) = segment(p, pipe, seg)?;
        let current = b.x - a.x;
        if choice.keep_slope && current == 0.0 {
            return Err(EditError::VerticalSegment);
        }
        let grow = new_len - current;
        let (dx, dy) = match choice.side {
            Side::Right => (grow, if choice.keep_slope { (b.y - a.y) * grow / current } else { 0.0 }),
            Side::Left => (-grow, if choice.keep_slope { (a.y - b.y) * grow / current } else { 0.0 }),
        };
        shift_side(p, res, pipe, seg, choice.side, dx, dy);
        Ok(())
    })
}

/// Sets the slope of one pipe segment, given in the table's unit, by
/// raising or lowering the pipeline on the chosen side.
pub fn edit_segment_slope(
    profile: &mut Profile,
    pipe: ObjectId,
    seg: usize,
    new_slope: f64,
    choice: SlopeEdit,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let (a, b) = segment(p, pipe, seg)?;
        let len = b.x - a.x;
        if len == 0.0 {
            return Err(EditError::VerticalSegment);
        }
        let per = match p.settings.table.slope_unit {
            SlopeUnit::Permille => 1000.0,
            SlopeUnit::Percent => 100.0,
        };
        // Multiply before dividing so whole-unit slopes over whole-mm
        // lengths stay exact.
        let fall = new_slope * len / per;
        let dy = match choice.side {
            Side::Right => (a.y - fall) - b.y,
            Side::Left => (b.y + fall) - a.y,
        };
        shift_side(p, res, pipe, seg, choice.side, 0.0, dy);
        Ok(())
    })
}

fn station_object(r: ObjectRef) -> Result<ObjectId, EditError> {
    match r {
        ObjectRef::Well(id) | ObjectRef::TurnPoint(id) => Ok(id),
        other => Err(EditError::NotStation(other)),
    }
}

/// Sets the distance between two adjacent stations by shifting every well
/// and turn point on the chosen side.
pub fn edit_distance(
    profile: &mut Profile,
    left: ObjectRef,
    right: ObjectRef,
    new_dist: f64,
    choice: DistanceEdit,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let (lid, rid) = (station_object(left)?, station_object(right)?);
        for r in [left, right] {
            if !p.contains(r) {
                return Err(EditError::Unresolved(r));
            }
        }
        if !(new_dist.is_finite() && new_dist > 0.0) {
            return Err(EditError::NonPositiveDistance);
        }
        let stations: Vec<_> = collect_stations(p).into_iter().filter(|s| s.is_site_station()).collect();
        let find = |id: ObjectId| stations.iter().position(|s| s.objects.contains(&id));
        let (li, ri) = (find(lid).expect("resolved"), find(rid).expect("resolved"));
        if ri != li + 1 {
            return Err(EditError::NotAdjacent(left, right));
        }
        let delta = new_dist - (stations[ri].x - stations[li].x);
        let (groups, shift) = match choice.side {
            Side::Right => (ri..stations.len(), delta),
            Side::Left => (0..li + 1, -delta),
        };
        let order: Vec<Vec<ObjectId>> = stations.iter().map(|s| s.objects.clone()).collect();
        for s in &stations[groups] {
            for id in &s.objects {
                if let Some(w) = p.wells.get_mut(id) {
                    w.axis_x += shift;
                    res.changed.insert(ObjectRef::Well(*id));
                } else if let Some(t) = p.turn_points.get_mut(id) {
                    t.x += shift;
                    res.changed.insert(ObjectRef::TurnPoint(*id));
                }
            }
        }
        let after: Vec<Vec<ObjectId>> = collect_stations(p)
            .into_iter()
            .filter(|s| s.is_site_station())
            .map(|s| s.objects)
            .collect();
        if after != order {
            return Err(EditError::StationReorder);
        }
        let moved: Vec<ObjectRef> = res.changed.iter().copied().collect();
        for r in moved {
            res.changed.extend(super::dependents(p, r));
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datatable::{build_table, slope_from_display};
    use crate::model::{Casing, CasingLink, Color, LineKind, Pipe, PipeType, Polyline, TurnPoint, Well, WellKind};

    fn pts(v: &[(f64, f64)]) -> Vec<NaturalPoint> {
        v.iter().map(|&(x, y)| NaturalPoint::new(x, y)).collect()
    }

    fn ground(points: &[(f64, f64)]) -> Profile {
        let mut p = Profile::new();
        p.surfaces.project = Some(Polyline::new(pts(points), Color(7)));
        p
    }

    fn project(p: &Profile) -> &[NaturalPoint] {
        &p.surfaces.project.as_ref().unwrap().points
    }

    #[test]
    fn ground_variants() {
        let base = ground(&[(0.0, 100000.0), (10000.0, 98000.0)]);

        let mut p = base.clone();
        edit_ground_elevation(&mut p, SurfaceRole::Project, 5000.0, 99500.0, GroundEdit::ShiftSegment).unwrap();
        assert_eq!(project(&p), pts(&[(0.0, 100500.0), (10000.0, 98500.0)]));

        let mut p = base.clone();
        edit_ground_elevation(&mut p, SurfaceRole::Project, 5000.0, 99500.0, GroundEdit::AddVertex).unwrap();
        assert_eq!(project(&p)[1], NaturalPoint::new(5000.0, 99500.0));

        let mut p = base.clone();
        edit_ground_elevation(&mut p, SurfaceRole::Project, 5000.0, 99500.0, GroundEdit::MoveRightEnd).unwrap();
        assert_eq!(project(&p)[1].y, 99000.0);

        let mut p = base.clone();
        edit_ground_elevation(&mut p, SurfaceRole::Project, 2500.0, 99000.0, GroundEdit::MoveLeftEnd).unwrap();
        assert_eq!(interpolate_y(project(&p), 2500.0), Some(99000.0));
    }

    #[test]
    fn ground_zero_lever_arm() {
        let mut p = ground(&[(0.0, 100000.0), (10000.0, 98000.0), (20000.0, 97000.0)]);
        // x = 10000 governs the second segment; its left end is the station itself.
        assert_eq!(
            edit_ground_elevation(&mut p, SurfaceRole::Project, 10000.0, 1.0, GroundEdit::MoveRightEnd),
            Err(EditError::ZeroLeverArm)
        );
        assert_eq!(
            edit_ground_elevation(&mut p, SurfaceRole::Project, 20000.0, 1.0, GroundEdit::MoveLeftEnd),
            Err(EditError::ZeroLeverArm)
        );
        assert_eq!(
            edit_ground_elevation(&mut p, SurfaceRole::Project, 30000.0, 1.0, GroundEdit::ShiftSegment),
            Err(EditError::OutOfSpan(30000.0))
        );
        assert_eq!(
            edit_ground_elevation(&mut p, SurfaceRole::Natural, 0.0, 1.0, GroundEdit::ShiftSegment),
            Err(EditError::SurfaceUnavailable(SurfaceRole::Natural))
        );
    }

    fn pipeline(axes: &[&[(f64, f64)]], diameter: f64) -> (Profile, Vec<ObjectId>) {
        let mut p = Profile::new();
        let t = p.allocate_id();
        p.pipe_types.insert(
            t,
            PipeType {
                outer_diameter: diameter,
                name: "Труба".into(),
                material: String::new(),
                insulation: String::new(),
                spec: Default::default(),
            },
        );
        let ids = axes
            .iter()
            .map(|a| {
                let id = p.allocate_id();
                p.pipes.insert(id, Pipe { type_ref: t, color: Color(7), axis: pts(a) });
                id
            })
            .collect();
        (p, ids)
    }

    #[test]
    fn length_without_slope() {
        let (mut p, ids) = pipeline(&[&[(0.0, 97000.0), (20000.0, 96800.0)]], 500.0);
        let r = edit_segment_length(&mut p, ids[0], 0, 25000.0, LengthEdit { side: Side::Right, keep_slope: false })
            .unwrap();
        assert!(r.changed.contains(&ObjectRef::Pipe(ids[0])));
        assert_eq!(p.pipes[&ids[0]].axis[1], NaturalPoint::new(25000.0, 96800.0));
        assert_eq!(build_table(&p).length_slope[0].slope_display, "8");
    }

    #[test]
    fn length_keeping_slope() {
        let (mut p, ids) = pipeline(
            &[&[(0.0, 97000.0), (20000.0, 96800.0), (30000.0, 96700.0)], &[(30000.0, 96700.0), (40000.0, 96500.0)]],
            500.0,
        );
        let c = p.allocate_id();
        p.casings.insert(
            c,
            Casing { center_x: 35000.0, link: CasingLink::Proportional(1.5), wall: 8.0, length: 2000.0, color: Color(7) },
        );
        edit_segment_length(&mut p, ids[0], 0, 25000.0, LengthEdit { side: Side::Right, keep_slope: true }).unwrap();
        let axis = &p.pipes[&ids[0]].axis;
        assert_eq!(axis[1], NaturalPoint::new(25000.0, 96750.0));
        assert_eq!(axis[2], NaturalPoint::new(35000.0, 96650.0));
        assert_eq!(p.pipes[&ids[1]].axis[0], NaturalPoint::new(35000.0, 96650.0));
        assert_eq!(p.casings[&c].center_x, 40000.0);
        assert_eq!(
            edit_segment_length(&mut p, ids[0], 0, 0.0, LengthEdit { side: Side::Right, keep_slope: true }),
            Err(EditError::NonPositiveLength)
        );
    }

    #[test]
    fn length_on_left_side() {
        let (mut p, ids) = pipeline(&[&[(0.0, 97000.0), (20000.0, 96800.0)]], 500.0);
        edit_segment_length(&mut p, ids[0], 0, 25000.0, LengthEdit { side: Side::Left, keep_slope: true }).unwrap();
        assert_eq!(p.pipes[&ids[0]].axis[0], NaturalPoint::new(-5000.0, 97050.0));
    }

    #[test]
    fn slope_examples() {
        let (base, ids) = pipeline(
            &[&[(0.0, 97000.0), (20000.0, 96800.0), (30000.0, 96600.0)], &[(30000.0, 96600.0), (40000.0, 96500.0)]],
            500.0,
        );
        let mut p = base.clone();
        edit_segment_slope(&mut p, ids[0], 0, 15.0, SlopeEdit { side: Side::Right }).unwrap();
        assert_eq!(p.pipes[&ids[0]].axis[1].y, 96700.0);
        assert_eq!(p.pipes[&ids[0]].axis[2].y, 96500.0);
        assert_eq!(p.pipes[&ids[1]].axis, pts(&[(30000.0, 96500.0), (40000.0, 96400.0)]));

        let mut p = base.clone();
        edit_segment_slope(&mut p, ids[0], 0, 10.0, SlopeEdit { side: Side::Right }).unwrap();
        assert_eq!(p, base);

        let mut p = base.clone();
        edit_segment_slope(&mut p, ids[0], 0, 0.0, SlopeEdit { side: Side::Left }).unwrap();
        assert_eq!(p.pipes[&ids[0]].axis[0].y, 96800.0);

        let mut p = base.clone();
        p.settings.table.slope_unit = SlopeUnit::Percent;
        edit_segment_slope(&mut p, ids[0], 0, 1.5, SlopeEdit { side: Side::Right }).unwrap();
        let axis = &p.pipes[&ids[0]].axis;
        let s = (axis[0].y - axis[1].y) / (axis[1].x - axis[0].x);
        assert!((s - slope_from_display(1.5, SlopeUnit::Percent)).abs() < 1e-12);
    }

    fn well(x: f64) -> Well {
        Well {
            kind: WellKind::Manhole,
            axis_x: x,
            width: 1000.0,
            overshoot_below_pipe: 0.0,
            depth_label_offset: 5.0,
            designation: String::new(),
            color: Color(7),
            line_kind: LineKind::SolidMain,
        }
    }

    #[test]
    fn distance_examples() {
        let mut p = Profile::new();
        let a = p.allocate_id();
        p.wells.insert(a, well(0.0));
        let b = p.allocate_id();
        p.wells.insert(b, well(15000.0));
        let t = p.allocate_id();
        p.turn_points.insert(t, TurnPoint { x: 30000.0, over_table_text: String::new(), designation: "УП1".into() });
        let base = p.clone();

        edit_distance(&mut p, ObjectRef::Well(a), ObjectRef::Well(b), 20000.0, DistanceEdit { side: Side::Right })
            .unwrap();
        assert_eq!(p.wells[&a].axis_x, 0.0);
        assert_eq!(p.wells[&b].axis_x, 20000.0);
        assert_eq!(p.turn_points[&t].x, 35000.0);

        let mut q = base.clone();
        edit_distance(&mut q, ObjectRef::Well(a), ObjectRef::Well(b), 15000.0, DistanceEdit { side: Side::Left })
            .unwrap();
        assert_eq!(q, base);

        let mut q = base.clone();
        assert_eq!(
            edit_distance(&mut q, ObjectRef::Well(a), ObjectRef::Well(b), 0.3, DistanceEdit { side: Side::Right }),
            Err(EditError::StationReorder)
        );
        assert_eq!(
            edit_distance(&mut q, ObjectRef::Well(a), ObjectRef::TurnPoint(t), 5.0, DistanceEdit { side: Side::Right }),
            Err(EditError::NotAdjacent(ObjectRef::Well(a), ObjectRef::TurnPoint(t)))
        );
        assert_eq!(
            edit_distance(&mut q, ObjectRef::Well(a), ObjectRef::Well(b), 0.0, DistanceEdit { side: Side::Right }),
            Err(EditError::NonPositiveDistance)
        );
        assert_eq!(q, base);
    }
}
