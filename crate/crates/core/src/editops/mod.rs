// SPDX-License-Identifier: Apache-2.0

//! Operations a designer applies to a profile.
//!
//! Every operation is atomic: it runs on a scratch copy, re-sorts dimension
//! extension lines, validates the result and only then replaces the caller's
//! profile. On error the profile is left untouched.

mod objects;
mod pipes;
mod ops;
mod table;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::linkage::{self, LinkError};
use crate::model::{validate, ObjectKind, ObjectRef, Profile, SurfaceRole, Violation};

pub use objects::*;
pub use ops::Operation;
pub use pipes::*;
pub use table::*;

/// Objects touched by one operation. The three sets are disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditResult {
    pub changed: BTreeSet<ObjectRef>,
    pub deleted: BTreeSet<ObjectRef>,
    pub created: BTreeSet<ObjectRef>,
}

impl EditResult {
    fn normalize(&mut self) {
        self.created.retain(|r| !self.deleted.contains(r));
        let (created, deleted) = (&self.created, &self.deleted);
        self.changed.retain(|r| !created.contains(r) && !deleted.contains(r));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// How a ground line absorbs a new elevation typed into the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundEdit {
    AddVertex,
    MoveLeftEnd,
    MoveRightEnd,
    ShiftSegment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthEdit {
    pub side: Side,
    pub keep_slope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeEdit {
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEdit {
    pub side: Side,
}

/// A propagation variant offered when a table cell is edited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagationChoice {
    Ground(GroundEdit),
    Length(LengthEdit),
    Slope(SlopeEdit),
    Distance(DistanceEdit),
}

impl PropagationChoice {
    /// Variants offered for a row of [`crate::datatable::ROW_LABELS`];
    /// empty for read-only rows.
    pub fn for_row(row: usize) -> Vec<PropagationChoice> {
        use crate::datatable::row;
        let sides = [Side::Left, Side::Right];
        match row {
            row::PROJECT_ELEV | row::NATURAL_ELEV => [
                GroundEdit::AddVertex,
                GroundEdit::MoveLeftEnd,
                GroundEdit::MoveRightEnd,
                GroundEdit::ShiftSegment,
            ]
            .into_iter()
            .map(Self::Ground)
            .collect(),
            row::LENGTH_SLOPE => [false, true]
                .into_iter()
                .flat_map(|keep_slope| sides.map(|side| Self::Length(LengthEdit { side, keep_slope })))
                .chain(sides.map(|side| Self::Slope(SlopeEdit { side })))
                .collect(),
            row::DISTANCE => sides.map(|side| Self::Distance(DistanceEdit { side })).to_vec(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EditError {
    #[error("unresolved reference {0}")]
    Unresolved(ObjectRef),
    #[error("invariant violation: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("{0} objects cannot be copied")]
    NotCopyable(ObjectKind),
    #[error("{0} objects cannot be moved as a whole")]
    NotMovable(ObjectKind),
    #[error("copy anchor does not fit a {0}")]
    BadAnchor(ObjectKind),
    #[error("x-monotonicity violated")]
    NonMonotone,
    #[error("no points given")]
    NoPoints,
    #[error("{} surface is not drawn", .0.name())]
    SurfaceUnavailable(SurfaceRole),
    #[error("{} surface already drawn", .0.name())]
    SurfaceExists(SurfaceRole),
    #[error("only ground surfaces have table rows")]
    NotGroundSurface,
    #[error("x = {0} is an existing joint or vertex")]
    ExistingVertex(f64),
    #[error("x = {0} is outside the span")]
    OutOfSpan(f64),
    #[error("vertex or segment index {0} out of range")]
    BadIndex(usize),
    #[error("only interior joints can divide a pipe")]
    InteriorOnly,
    #[error("ends not coincident")]
    EndsNotCoincident,
    #[error("pipes differ in type or color: resolution required")]
    ResolutionRequired,
    #[error("text needs at least one line")]
    EmptyText,
    #[error("station coincides with the opposite segment end")]
    ZeroLeverArm,
    #[error("length must be positive")]
    NonPositiveLength,
    #[error("distance must be positive")]
    NonPositiveDistance,
    #[error("vertical segment has no slope")]
    VerticalSegment,
    #[error("{0} is not a well or turn point")]
    NotStation(ObjectRef),
    #[error("{0} and {1} are not adjacent stations")]
    NotAdjacent(ObjectRef, ObjectRef),
    #[error("shift reorders the station sequence")]
    StationReorder,
    #[error("{0} is used by pipes")]
    TypeInUse(ObjectRef),
    #[error("no pipe type given and no type used before")]
    NoPipeType,
    #[error("bad properties: {0}")]
    BadProperties(String),
    #[error(transparent)]
    Link(#[from] LinkError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Runs `f` on a copy of `profile`, commits only a valid result.
pub(crate) fn transact(
    profile: &mut Profile,
    f: impl FnOnce(&mut Profile, &mut EditResult) -> Result<(), EditError>,
) -> Result<EditResult, EditError> {
    let mut work = profile.clone();
    let mut res = EditResult::default();
    f(&mut work, &mut res)?;
    for id in work.sort_dimension_refs() {
        res.changed.insert(ObjectRef::Dimension(id));
    }
    let violations = validate(&work);
    if !violations.is_empty() {
        return Err(EditError::Invalid(violations));
    }
    res.normalize();
    *profile = work;
    Ok(res)
}

/// Objects whose drawing regenerates when `r` moves or changes.
pub(crate) fn dependents(p: &Profile, r: ObjectRef) -> Vec<ObjectRef> {
    let mut out: Vec<ObjectRef> = p.leaders_of(r).into_iter().map(ObjectRef::Leader).collect();
    if let ObjectRef::Section(id) = r {
        out.extend(p.marks_of(id).into_iter().map(ObjectRef::ElevationMark));
    }
    if let Some(a) = r.as_axis() {
        out.extend(p.dimensions_of(a).into_iter().map(ObjectRef::Dimension));
    }
    out
}

/// Casings carried by `pipe` and wells standing on it, plus their leaders.
pub(crate) fn pipe_dependents(p: &Profile, pipe: crate::model::ObjectId) -> Vec<ObjectRef> {
    let mut out = Vec::new();
    for c in linkage::casings_on_pipe(p, pipe) {
        out.push(ObjectRef::Casing(c));
        out.extend(dependents(p, ObjectRef::Casing(c)));
    }
    if let Some((lo, hi)) = p.pipes.get(&pipe).and_then(|q| crate::model::chain_span(&q.axis)) {
        for (&id, w) in &p.wells {
            if w.axis_x >= lo && w.axis_x <= hi {
                out.push(ObjectRef::Well(id));
                out.extend(dependents(p, ObjectRef::Well(id)));
            }
        }
    }
    out
}
