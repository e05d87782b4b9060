// SPDX-License-Identifier: Apache-2.0

//! Parametric representation of a longitudinal network profile.
//!
//! A [`Profile`] owns id-keyed lists of every object kind together with the
//! profile-wide settings. Objects never store geometry that can be derived:
//! well depths, casing diameters and table contents are computed on demand
//! from the parameters kept here.

mod geometry;
mod objects;
mod refs;
mod settings;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use geometry::{
    chain_span, check_chain, interpolate_y, segment_index, ChainDefect, Color, NaturalPoint,
    PaperOffset, PaperPoint, Polyline, Vector, COORD_LIMIT,
};
pub(crate) use geometry::{interior_segment, SplitMiss};
pub use objects::*;
pub use refs::{AxisRef, ObjectId, ObjectKind, ObjectRef, RefParseError, SurfaceRole};
pub use settings::*;
pub use validate::{validate, Rule, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unresolved reference {0}")]
    Unresolved(ObjectRef),
    #[error("{0} has no axis")]
    NoAxis(ObjectRef),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Profile {
    pub settings: GeneralSettings,
    pub defaults: DefaultSettings,
    pub surfaces: SurfaceSet,
    pub above_ground: BTreeMap<ObjectId, AboveGroundObject>,
    pub sections: BTreeMap<ObjectId, UtilitySection>,
    pub turn_points: BTreeMap<ObjectId, TurnPoint>,
    pub wells: BTreeMap<ObjectId, Well>,
    pub casings: BTreeMap<ObjectId, Casing>,
    pub pipe_types: BTreeMap<ObjectId, PipeType>,
    pub pipes: BTreeMap<ObjectId, Pipe>,
    pub texts: BTreeMap<ObjectId, TextNote>,
    pub leaders: BTreeMap<ObjectId, Leader>,
    pub dimensions: BTreeMap<ObjectId, ChainDimension>,
    pub elevation_marks: BTreeMap<ObjectId, ElevationMark>,
    /// Next id to hand out; greater than every id in use.
    pub next_id: u32,
}

impl Profile {
    /// An empty profile with default settings.
    pub fn new() -> Self {
        Self { next_id: 1, ..Self::default() }
    }

    pub fn allocate_id(&mut self) -> ObjectId {
        let id = ObjectId(self.next_id);
        self.next_id += 1;
        id
    }

    pub fn contains(&self, r: ObjectRef) -> bool {
        match r {
            ObjectRef::AboveGround(id) => self.above_ground.contains_key(&id),
            ObjectRef::Section(id) => self.sections.contains_key(&id),
            ObjectRef::TurnPoint(id) => self.turn_points.contains_key(&id),
            ObjectRef::Well(id) => self.wells.contains_key(&id),
            ObjectRef::Casing(id) => self.casings.contains_key(&id),
            ObjectRef::PipeType(id) => self.pipe_types.contains_key(&id),
            ObjectRef::Pipe(id) => self.pipes.contains_key(&id),
            ObjectRef::Text(id) => self.texts.contains_key(&id),
            ObjectRef::Leader(id) => self.leaders.contains_key(&id),
            ObjectRef::Dimension(id) => self.dimensions.contains_key(&id),
            ObjectRef::ElevationMark(id) => self.elevation_marks.contains_key(&id),
            ObjectRef::Surface(role) => self.surfaces.get(role).is_some(),
        }
    }

    /// Removes a single object without touching its dependents.
    pub(crate) fn remove_raw(&mut self, r: ObjectRef) -> bool {
        match r {
            ObjectRef::AboveGround(id) => self.above_ground.remove(&id).is_some(),
            ObjectRef::Section(id) => self.sections.remove(&id).is_some(),
            ObjectRef::TurnPoint(id) => self.turn_points.remove(&id).is_some(),
            ObjectRef::Well(id) => self.wells.remove(&id).is_some(),
            ObjectRef::Casing(id) => self.casings.remove(&id).is_some(),
            ObjectRef::PipeType(id) => self.pipe_types.remove(&id).is_some(),
            ObjectRef::Pipe(id) => self.pipes.remove(&id).is_some(),
            ObjectRef::Text(id) => self.texts.remove(&id).is_some(),
            ObjectRef::Leader(id) => self.leaders.remove(&id).is_some(),
            ObjectRef::Dimension(id) => self.dimensions.remove(&id).is_some(),
            ObjectRef::ElevationMark(id) => self.elevation_marks.remove(&id).is_some(),
            ObjectRef::Surface(role) => self.surfaces.slot_mut(role).take().is_some(),
        }
    }

    /// Every id-bearing object, in list order.
    pub fn object_refs(&self) -> Vec<ObjectRef> {
        fn keys<T>(m: &BTreeMap<ObjectId, T>, f: fn(ObjectId) -> ObjectRef) -> impl Iterator<Item = ObjectRef> + '_ {
            m.keys().map(move |&id| f(id))
        }
        keys(&self.above_ground, ObjectRef::AboveGround)
            .chain(keys(&self.sections, ObjectRef::Section))
            .chain(keys(&self.turn_points, ObjectRef::TurnPoint))
            .chain(keys(&self.wells, ObjectRef::Well))
            .chain(keys(&self.casings, ObjectRef::Casing))
            .chain(keys(&self.pipe_types, ObjectRef::PipeType))
            .chain(keys(&self.pipes, ObjectRef::Pipe))
            .chain(keys(&self.texts, ObjectRef::Text))
            .chain(keys(&self.leaders, ObjectRef::Leader))
            .chain(keys(&self.dimensions, ObjectRef::Dimension))
            .chain(keys(&self.elevation_marks, ObjectRef::ElevationMark))
            .collect()
    }

    pub fn object_count(&self) -> usize {
        self.object_refs().len()
    }

    /// Axis X of an axis-bearing object: sections use their center, casings
    /// their symbol center.
    pub fn axis_x_of(&self, r: ObjectRef) -> Result<f64, ModelError> {
        let missing = || ModelError::Unresolved(r);
        match r {
            ObjectRef::AboveGround(id) => self.above_ground.get(&id).map(|o| o.axis_x).ok_or_else(missing),
            ObjectRef::Section(id) => self.sections.get(&id).map(|o| o.center.x).ok_or_else(missing),
            ObjectRef::TurnPoint(id) => self.turn_points.get(&id).map(|o| o.x).ok_or_else(missing),
            ObjectRef::Well(id) => self.wells.get(&id).map(|o| o.axis_x).ok_or_else(missing),
            ObjectRef::Casing(id) => self.casings.get(&id).map(|o| o.center_x).ok_or_else(missing),
            other if !self.contains(other) => Err(missing()),
            other => Err(ModelError::NoAxis(other)),
        }
    }

    pub fn axis_of(&self, a: AxisRef) -> Result<f64, ModelError> {
        self.axis_x_of(a.into())
    }

    /// Leaders pointing at `target`.
    pub fn leaders_of(&self, target: ObjectRef) -> Vec<ObjectId> {
        self.leaders
            .iter()
            .filter(|(_, l)| ObjectRef::from(l.target) == target || ObjectRef::Text(l.text) == target)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn dimensions_of(&self, axis: AxisRef) -> Vec<ObjectId> {
        self.dimensions
            .iter()
            .filter(|(_, d)| d.refs.contains(&axis))
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn marks_of(&self, section: ObjectId) -> Vec<ObjectId> {
        self.elevation_marks
            .iter()
            .filter(|(_, m)| m.section == section)
            .map(|(&id, _)| id)
            .collect()
    }

    /// Sorts the refs of every dimension by axis X. Returns the ids of
    /// dimensions whose order changed. Unresolved refs sort last.
    pub(crate) fn sort_dimension_refs(&mut self) -> Vec<ObjectId> {
        let mut touched = Vec::new();
        let axes: BTreeMap<AxisRef, f64> = self
            .dimensions
            .values()
            .flat_map(|d| d.refs.iter().copied())
            .filter_map(|a| self.axis_of(a).ok().map(|x| (a, x)))
            .collect();
        for (&id, dim) in self.dimensions.iter_mut() {
            let key = |a: &AxisRef| axes.get(a).copied().unwrap_or(f64::INFINITY);
            if dim.refs.windows(2).any(|w| key(&w[0]) > key(&w[1])) {
                dim.refs.sort_by(|a, b| key(a).total_cmp(&key(b)));
                touched.push(id);
            }
        }
        touched
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_x_reads_the_right_field() {
        let mut p = Profile::new();
        let w = p.allocate_id();
        p.wells.insert(
            w,
            Well {
                kind: WellKind::Manhole,
                axis_x: 15000.0,
                width: 1000.0,
                overshoot_below_pipe: 0.0,
                depth_label_offset: 5.0,
                designation: "1".into(),
                color: Color(7),
                line_kind: LineKind::SolidMain,
            },
        );
        let s = p.allocate_id();
        p.sections.insert(
            s,
            UtilitySection {
                kind: SectionKind::Cable,
                center: NaturalPoint::new(8000.0, 96500.0),
                color: Color(1),
            },
        );
        let t = p.allocate_id();
        p.texts.insert(
            t,
            TextNote {
                lines: vec!["a".into()],
                font: FontSetting::default(),
                line_step: 4.0,
                color: Color(0),
                origin: NaturalPoint::default(),
            },
        );
        assert_eq!(p.axis_x_of(ObjectRef::Well(w)), Ok(15000.0));
        assert_eq!(p.axis_x_of(ObjectRef::Section(s)), Ok(8000.0));
        assert_eq!(p.axis_x_of(ObjectRef::Text(t)), Err(ModelError::NoAxis(ObjectRef::Text(t))));
        assert_eq!(
            p.axis_x_of(ObjectRef::Well(ObjectId(99))),
            Err(ModelError::Unresolved(ObjectRef::Well(ObjectId(99))))
        );
    }

    #[test]
    fn profile_json_round_trip() {
        let mut p = Profile::new();
        let id = p.allocate_id();
        p.turn_points.insert(
            id,
            TurnPoint { x: 8000.0, over_table_text: "УП1".into(), designation: "УП1".into() },
        );
        let json = serde_json::to_string(&p).unwrap();
        let back: Profile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
