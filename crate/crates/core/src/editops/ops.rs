// SPDX-License-Identifier: Apache-2.0

//! Serializable form of every edit, for command lines and the HTTP service.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::*;
use crate::model::{
    AxisRef, Color, DefaultSettings, GeneralSettings, NaturalPoint, ObjectId, ObjectRef, Profile, SurfaceRole,
    Vector,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operation {
    Add { object: NewObject },
    Delete { target: ObjectRef },
    Move { target: MoveTarget, delta: Vector },
    Copy { source: ObjectRef, anchor: CopyAnchor },
    SetProperties { target: ObjectRef, value: ObjectValue },
    PatchProperties { target: ObjectRef, patch: Value },
    ContinuePipe { pipe: ObjectId, end: ChainEnd, points: Vec<NaturalPoint> },
    ExtendSurface { role: SurfaceRole, end: ChainEnd, points: Vec<NaturalPoint> },
    SplitPipe { pipe: ObjectId, x: f64 },
    SplitSurface { role: SurfaceRole, x: f64 },
    DeletePipeJoint { pipe: ObjectId, index: usize },
    DeleteSurfaceVertex { role: SurfaceRole, index: usize },
    DividePipe { pipe: ObjectId, index: usize },
    MergePipes {
        pipe: ObjectId,
        end: ChainEnd,
        #[serde(default)]
        resolved_type: Option<ObjectId>,
        #[serde(default)]
        resolved_color: Option<Color>,
    },
    EditText { text: ObjectId, lines: Vec<String> },
    AddDimensionRef { dimension: ObjectId, axis: AxisRef },
    EditGround { role: SurfaceRole, station_x: f64, new_elev: f64, choice: GroundEdit },
    EditLength { pipe: ObjectId, segment: usize, new_len: f64, choice: LengthEdit },
    EditSlope { pipe: ObjectId, segment: usize, new_slope: f64, choice: SlopeEdit },
    EditDistance { left: ObjectRef, right: ObjectRef, new_dist: f64, choice: DistanceEdit },
    MoveProfile { delta: Vector },
    UpdateSettings { settings: Box<GeneralSettings> },
    UpdateDefaults { defaults: Box<DefaultSettings> },
}

impl Operation {
    pub fn apply(self, p: &mut Profile) -> Result<EditResult, EditError> {
        match self {
            Self::Add { object } => add_object(p, object),
            Self::Delete { target } => delete_object(p, target),
            Self::Move { target, delta } => move_object(p, target, delta),
            Self::Copy { source, anchor } => copy_object(p, source, anchor),
            Self::SetProperties { target, value } => set_properties(p, target, value),
            Self::PatchProperties { target, patch } => patch_properties(p, target, &patch),
            Self::ContinuePipe { pipe, end, points } => continue_pipe(p, pipe, end, points),
            Self::ExtendSurface { role, end, points } => extend_surface(p, role, end, points),
            Self::SplitPipe { pipe, x } => split_pipe_segment(p, pipe, x),
            Self::SplitSurface { role, x } => split_surface_segment(p, role, x),
            Self::DeletePipeJoint { pipe, index } => delete_pipe_joint(p, pipe, index),
            Self::DeleteSurfaceVertex { role, index } => delete_surface_vertex(p, role, index),
            Self::DividePipe { pipe, index } => divide_pipe(p, pipe, index),
            Self::MergePipes { pipe, end, resolved_type, resolved_color } => {
                merge_pipes(p, pipe, end, resolved_type, resolved_color)
            }
            Self::EditText { text, lines } => edit_text(p, text, lines),
            Self::AddDimensionRef { dimension, axis } => add_dimension_ref(p, dimension, axis),
            Self::EditGround { role, station_x, new_elev, choice } => {
                edit_ground_elevation(p, role, station_x, new_elev, choice)
            }
            Self::EditLength { pipe, segment, new_len, choice } => edit_segment_length(p, pipe, segment, new_len, choice),
            Self::EditSlope { pipe, segment, new_slope, choice } => {
                edit_segment_slope(p, pipe, segment, new_slope, choice)
            }
            Self::EditDistance { left, right, new_dist, choice } => edit_distance(p, left, right, new_dist, choice),
            Self::MoveProfile { delta } => move_profile(p, delta),
            Self::UpdateSettings { settings } => update_settings(p, *settings),
            Self::UpdateDefaults { defaults } => update_defaults(p, *defaults),
        }
    }
}
