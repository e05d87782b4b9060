// SPDX-License-Identifier: Apache-2.0

//! The object lists of a profile.

use serde::{Deserialize, Serialize};

use super::geometry::{Color, NaturalPoint, PaperOffset, Polyline};
use super::refs::{AxisRef, ObjectId, SurfaceRole};
use super::settings::{FontSetting, LineKind};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSet {
    /// Thin solid line.
    pub project: Option<Polyline>,
    /// Thin dashed line.
    pub natural: Option<Polyline>,
    /// Thin dash-dot line.
    pub groundwater: Option<Polyline>,
}

impl SurfaceSet {
    pub fn get(&self, role: SurfaceRole) -> Option<&Polyline> {
        match role {
            SurfaceRole::Project => self.project.as_ref(),
            SurfaceRole::Natural => self.natural.as_ref(),
            SurfaceRole::Groundwater => self.groundwater.as_ref(),
        }
    }

    pub fn slot_mut(&mut self, role: SurfaceRole) -> &mut Option<Polyline> {
        match role {
            SurfaceRole::Project => &mut self.project,
            SurfaceRole::Natural => &mut self.natural,
            SurfaceRole::Groundwater => &mut self.groundwater,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (SurfaceRole, &Polyline)> {
        SurfaceRole::ALL
            .into_iter()
            .filter_map(move |r| self.get(r).map(|p| (r, p)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AboveGroundKind {
    Road,
    Railway,
    Trestle1,
    Trestle2,
}

impl AboveGroundKind {
    pub fn has_height(self) -> bool {
        matches!(self, Self::Trestle1 | Self::Trestle2)
    }
}

/// A crossed road, railway or trestle. Its symbol is cut into the project
/// ground line around `axis_x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AboveGroundObject {
    pub kind: AboveGroundKind,
    pub axis_x: f64,
    /// Placed on the axis right above the data table.
    pub label: String,
    pub color: Color,
    /// Trestles only.
    pub height: Option<f64>,
    /// Required for every kind.
    pub width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionCasing {
    pub diameter: f64,
    pub wall: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipeSectionData {
    pub diameter: f64,
    pub wall: f64,
    pub label: Option<String>,
    pub casing: Option<SectionCasing>,
}

/// Section kind. Pipe-specific data only exists on pipe sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    Pipe(PipeSectionData),
    Cable,
    TelephoneDuct,
}

impl SectionKind {
    pub fn tag(&self) -> SectionTag {
        match self {
            Self::Pipe(_) => SectionTag::Pipe,
            Self::Cable => SectionTag::Cable,
            Self::TelephoneDuct => SectionTag::TelephoneDuct,
        }
    }

    pub fn pipe(&self) -> Option<&PipeSectionData> {
        match self {
            Self::Pipe(p) => Some(p),
            _ => None,
        }
    }
}

/// Data-free section kind, used for defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionTag {
    Pipe,
    Cable,
    TelephoneDuct,
}

/// Cross-section of an existing underground pipe, cable or duct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilitySection {
    pub kind: SectionKind,
    pub center: NaturalPoint,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnPoint {
    pub x: f64,
    pub over_table_text: String,
    /// Shown in the well / turn point row of the table.
    pub designation: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellKind {
    Manhole,
    RainInlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Well {
    pub kind: WellKind,
    pub axis_x: f64,
    pub width: f64,
    /// How far the well goes below the lowest pipe bottom.
    pub overshoot_below_pipe: f64,
    /// Paper mm from the project surface up to the depth label.
    pub depth_label_offset: f64,
    pub designation: String,
    pub color: Color,
    pub line_kind: LineKind,
}

/// Coupling between a casing's diameter and the carrier pipe diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CasingLink {
    /// Casing is `k` times the pipe diameter, `k > 1`.
    Proportional(f64),
    /// Casing exceeds the pipe diameter by a fixed amount, `c > 0`.
    Offset(f64),
}

impl CasingLink {
    pub fn is_valid(&self) -> bool {
        match *self {
            Self::Proportional(k) => k.is_finite() && k > 1.0,
            Self::Offset(c) => c.is_finite() && c > 0.0,
        }
    }
}

/// Protective casing on the designed pipeline. Diameter and vertical
/// position follow the pipe found under `center_x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Casing {
    pub center_x: f64,
    pub link: CasingLink,
    pub wall: f64,
    pub length: f64,
    pub color: Color,
}

/// Properties carried into the bill of materials.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpecProps {
    pub position: Option<String>,
    pub designation: Option<String>,
    pub unit_mass: Option<f64>,
    pub note: Option<String>,
    pub type_mark_doc: Option<String>,
    pub name_and_characteristic: Option<String>,
    pub unit: Option<String>,
    pub manufacturer: Option<String>,
    pub product_code: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipeType {
    /// Drawn pipe diameter, natural mm.
    pub outer_diameter: f64,
    pub name: String,
    pub material: String,
    pub insulation: String,
    #[serde(default)]
    pub spec: SpecProps,
}

impl PipeType {
    /// Text of the pipe designation row.
    pub fn designation_text(&self) -> String {
        [&self.name, &self.material, &self.insulation]
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A run of same-type pipes laid at possibly different slopes. Every axis
/// vertex is a joint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipe {
    pub type_ref: ObjectId,
    pub color: Color,
    pub axis: Vec<NaturalPoint>,
}

/// Reserved token rendered as the diameter glyph.
pub const DIAMETER_TOKEN: &str = "%%c";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextNote {
    pub lines: Vec<String>,
    pub font: FontSetting,
    /// Paper mm between baselines.
    pub line_step: f64,
    pub color: Color,
    pub origin: NaturalPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LeaderTarget {
    Section(ObjectId),
    Casing(ObjectId),
    Well(ObjectId),
}

/// Leader from a text to a section, casing or well. Drawn in its text's color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leader {
    pub text: ObjectId,
    pub target: LeaderTarget,
    /// Paper offset of the tip from the target's anchor point.
    pub offset: PaperOffset,
}

/// Horizontal chain dimension. Extension lines are the axes of the
/// referenced objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDimension {
    /// Kept sorted by axis X.
    pub refs: Vec<AxisRef>,
    /// Paper mm from the table top up to the dimension line.
    pub dim_line_offset: f64,
    /// One per gap, paper mm from the dimension line.
    pub text_offsets: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShelfDir {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElevationMark {
    pub section: ObjectId,
    /// Paper mm to the right along the extension line, signed.
    pub arrow_shift: f64,
    pub shelf_dir: ShelfDir,
    /// Paper mm up from the extension line, signed.
    pub shelf_lift: f64,
}
