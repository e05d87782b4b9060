// SPDX-License-Identifier: Apache-2.0

//! Topology edits on pipe axes and surface polylines.

use serde::{Deserialize, Serialize};

use super::objects::{ensure_monotone, surface_dependents};
use super::{pipe_dependents, transact, EditError, EditResult};
use crate::linkage;
use crate::model::{interior_segment, interpolate_y, Color, NaturalPoint, ObjectId, ObjectRef, Pipe, Profile, SplitMiss, SurfaceRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainEnd {
    Start,
    End,
}

/// Attaches `new` to one end of `points`. At the start the new points are
/// listed moving left, away from the existing chain.
fn extend_chain(points: &mut Vec<NaturalPoint>, end: ChainEnd, new: &[NaturalPoint]) -> Result<(), EditError> {
    if new.is_empty() {
        return Err(EditError::NoPoints);
    }
    match end {
        ChainEnd::End => points.extend_from_slice(new),
        ChainEnd::Start => {
            let mut head: Vec<NaturalPoint> = new.iter().rev().copied().collect();
            head.append(points);
            *points = head;
        }
    }
    ensure_monotone(points)
}

fn split_chain(points: &mut Vec<NaturalPoint>, x: f64) -> Result<(), EditError> {
    let i = interior_segment(points, x).map_err(|m| match m {
        SplitMiss::OnVertex => EditError::ExistingVertex(x),
        SplitMiss::OutOfSpan => EditError::OutOfSpan(x),
    })?;
    let y = interpolate_y(points, x).ok_or(EditError::OutOfSpan(x))?;
    points.insert(i + 1, NaturalPoint::new(x, y));
    Ok(())
}

fn pipe_mut(p: &mut Profile, pipe: ObjectId) -> Result<&mut Pipe, EditError> {
    p.pipes.get_mut(&pipe).ok_or(EditError::Unresolved(ObjectRef::Pipe(pipe)))
}

fn surface_mut(p: &mut Profile, role: SurfaceRole) -> Result<&mut Vec<NaturalPoint>, EditError> {
    p.surfaces
        .slot_mut(role)
        .as_mut()
        .map(|l| &mut l.points)
        .ok_or(EditError::SurfaceUnavailable(role))
}

pub fn continue_pipe(
    profile: &mut Profile,
    pipe: ObjectId,
    end: ChainEnd,
    points: Vec<NaturalPoint>,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        extend_chain(&mut pipe_mut(p, pipe)?.axis, end, &points)?;
        res.changed.insert(ObjectRef::Pipe(pipe));
        res.changed.extend(pipe_dependents(p, pipe));
        Ok(())
    })
}

pub fn extend_surface(
    profile: &mut Profile,
    role: SurfaceRole,
    end: ChainEnd,
    points: Vec<NaturalPoint>,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        extend_chain(surface_mut(p, role)?, end, &points)?;
        res.changed.insert(ObjectRef::Surface(role));
        res.changed.extend(surface_dependents(p, role));
        Ok(())
    })
}

/// Inserts a joint at `x`; both halves keep the original slope.
pub fn split_pipe_segment(profile: &mut Profile, pipe: ObjectId, x: f64) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        split_chain(&mut pipe_mut(p, pipe)?.axis, x)?;
        res.changed.insert(ObjectRef::Pipe(pipe));
        Ok(())
    })
}

pub fn split_surface_segment(profile: &mut Profile, role: SurfaceRole, x: f64) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        split_chain(surface_mut(p, role)?, x)?;
        res.changed.insert(ObjectRef::Surface(role));
        Ok(())
    })
}

/// Removes a joint or end. A single-segment pipe is deleted whole.
pub fn delete_pipe_joint(profile: &mut Profile, pipe: ObjectId, index: usize) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let r = ObjectRef::Pipe(pipe);
        res.changed.extend(pipe_dependents(p, pipe));
        let axis = &mut pipe_mut(p, pipe)?.axis;
        if index >= axis.len() {
            return Err(EditError::BadIndex(index));
        }
        if axis.len() <= 2 {
            let plan = linkage::cascade_of(p, r)?;
            linkage::apply_cascade(p, r, &plan);
            res.deleted.insert(r);
            res.deleted.extend(plan.to_delete.iter().copied());
        } else {
            axis.remove(index);
            res.changed.insert(r);
            res.changed.extend(pipe_dependents(p, pipe));
        }
        Ok(())
    })
}

/// Removes a surface vertex. A single-segment surface is removed whole.
pub fn delete_surface_vertex(profile: &mut Profile, role: SurfaceRole, index: usize) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let r = ObjectRef::Surface(role);
        res.changed.extend(surface_dependents(p, role));
        let points = surface_mut(p, role)?;
        if index >= points.len() {
            return Err(EditError::BadIndex(index));
        }
        if points.len() <= 2 {
            p.surfaces.slot_mut(role).take();
            res.deleted.insert(r);
        } else {
            points.remove(index);
            res.changed.insert(r);
        }
        Ok(())
    })
}

/// Cuts a pipe in two at an interior joint. The left part keeps the id.
pub fn divide_pipe(profile: &mut Profile, pipe: ObjectId, index: usize) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let q = pipe_mut(p, pipe)?;
        if index >= q.axis.len() {
            return Err(EditError::BadIndex(index));
        }
        if index == 0 || index + 1 == q.axis.len() {
            return Err(EditError::InteriorOnly);
        }
        let right = Pipe { type_ref: q.type_ref, color: q.color, axis: q.axis[index..].to_vec() };
        q.axis.truncate(index + 1);
        let new = p.allocate_id();
        p.pipes.insert(new, right);
        res.changed.insert(ObjectRef::Pipe(pipe));
        res.created.insert(ObjectRef::Pipe(new));
        res.changed.extend(pipe_dependents(p, pipe));
        res.changed.extend(pipe_dependents(p, new));
        Ok(())
    })
}

/// Joins `pipe` at `end` with the pipe whose opposite end coincides with it
/// exactly. The left pipe keeps its id. Differing types or colors need a
/// resolution; a given resolution always applies.
pub fn merge_pipes(
    profile: &mut Profile,
    pipe: ObjectId,
    end: ChainEnd,
    resolved_type: Option<ObjectId>,
    resolved_color: Option<Color>,
) -> Result<EditResult, EditError> {
    transact(profile, |p, res| {
        let a = p.pipes.get(&pipe).ok_or(EditError::Unresolved(ObjectRef::Pipe(pipe)))?;
        let joint = match end {
            ChainEnd::Start => a.axis.first(),
            ChainEnd::End => a.axis.last(),
        }
        .copied()
        .ok_or(EditError::EndsNotCoincident)?;
        let other = p
            .pipes
            .iter()
            .find(|(&id, q)| {
                id != pipe
                    && match end {
                        ChainEnd::End => q.axis.first() == Some(&joint),
                        ChainEnd::Start => q.axis.last() == Some(&joint),
                    }
            })
            .map(|(&id, _)| id)
            .ok_or(EditError::EndsNotCoincident)?;
        let (left, right) = match end {
            ChainEnd::End => (pipe, other),
            ChainEnd::Start => (other, pipe),
        };
        let (l, r) = (&p.pipes[&left], &p.pipes[&right]);
        let type_ref = match resolved_type {
            Some(t) => t,
            None if l.type_ref == r.type_ref => l.type_ref,
            None => return Err(EditError::ResolutionRequired),
        };
        let color = match resolved_color {
            Some(c) => c,
            None if l.color == r.color => l.color,
            None => return Err(EditError::ResolutionRequired),
        };
        res.changed.extend(pipe_dependents(p, right));
        let tail = p.pipes.remove(&right).expect("found above").axis;
        let merged = p.pipes.get_mut(&left).expect("found above");
        merged.axis.extend_from_slice(&tail[1..]);
        merged.type_ref = type_ref;
        merged.color = color;
        // Pipes carry no leaders or dimensions, so nothing cascades.
        res.deleted.insert(ObjectRef::Pipe(right));
        res.changed.insert(ObjectRef::Pipe(left));
        res.changed.extend(pipe_dependents(p, left));
        Ok(())
    })
}
