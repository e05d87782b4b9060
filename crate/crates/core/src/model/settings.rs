// SPDX-License-Identifier: Apache-2.0

//! Profile-wide settings and add-time defaults.

use serde::{Deserialize, Serialize};

use super::geometry::{Color, PaperPoint};
use super::objects::{AboveGroundKind, CasingLink, SectionCasing, SectionTag, ShelfDir, WellKind};
use super::refs::ObjectId;

/// Horizontal scale denominators allowed on profile drawings.
pub const SCALE_H_RANGE: std::ops::RangeInclusive<u32> = 500..=1500;
/// Vertical scale denominators allowed on profile drawings.
pub const SCALE_V_RANGE: std::ops::RangeInclusive<u32> = 100..=500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FontSetting {
    /// Paper mm.
    pub height: f64,
    pub widening: f64,
    pub slant: bool,
}

impl FontSetting {
    pub const fn new(height: f64) -> Self {
        Self { height, widening: 1.0, slant: false }
    }

    pub fn is_valid(&self) -> bool {
        self.height.is_finite() && self.height > 0.0 && self.widening.is_finite() && self.widening > 0.0
    }
}

impl Default for FontSetting {
    fn default() -> Self {
        Self::new(2.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    SolidMain,
    SolidThin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeUnit {
    Permille,
    Percent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineKind {
    Water,
    Sewer,
}

/// Horizontal and vertical scale denominators (1:H, 1:V).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalePair {
    pub scale_h: u32,
    pub scale_v: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("scale 1:{scale_h} / 1:{scale_v} outside 1:500..1:1500 / 1:100..1:500")]
pub struct ScaleRangeError {
    pub scale_h: u32,
    pub scale_v: u32,
}

impl ScalePair {
    pub fn new(scale_h: u32, scale_v: u32) -> Result<Self, ScaleRangeError> {
        let pair = Self { scale_h, scale_v };
        if pair.is_valid() {
            Ok(pair)
        } else {
            Err(ScaleRangeError { scale_h, scale_v })
        }
    }

    pub fn is_valid(&self) -> bool {
        SCALE_H_RANGE.contains(&self.scale_h) && SCALE_V_RANGE.contains(&self.scale_v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSettings {
    /// Position of the header's top-right corner on the sheet.
    pub top_right_of_header: PaperPoint,
    pub has_header: bool,
    /// Natural mm; lets a headerless continuation table line up with another profile.
    pub min_headerless_length: f64,
    pub font: FontSetting,
    pub slope_unit: SlopeUnit,
    /// Paper mm.
    pub row_height: f64,
    /// Paper mm.
    pub header_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxScaleSettings {
    pub enabled: bool,
    /// Natural mm between divisions.
    pub division: f64,
    pub color: Color,
    pub font: FontSetting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceColors {
    pub project: Color,
    pub natural: Color,
    pub groundwater: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildSettings {
    pub scales: ScalePair,
    pub pipeline_kind: PipelineKind,
    /// The single value of the base (soil) row.
    pub base_soil: String,
    /// Minimum minor/major axis ratio of section ellipses, in (0, 1].
    pub min_ellipse_ratio: f64,
    /// Stand-in ground level while no project surface covers a point.
    pub conditional_ground_level: f64,
    /// Stand-in pipe bottom level while no pipe covers a point.
    pub conditional_pipe_bottom_level: f64,
    pub surface_colors: SurfaceColors,
    pub font: FontSetting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSettings {
    /// Paper mm; the smallest ellipse extent of a cable.
    pub cable_drawn_diameter: f64,
    pub pipe_symbol_length: f64,
    pub cable_symbol_length: f64,
    pub duct_symbol_length: f64,
    pub arrow_leg: f64,
    pub arrow_span: f64,
    pub duct_dot_diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionSettings {
    pub has_leader: bool,
    pub leader_to_shelf_end: bool,
    pub tick_length: f64,
    pub font: FontSetting,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElevationMarkSettings {
    pub line_kind: LineKind,
    pub arrow_leg: f64,
    pub font: FontSetting,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralSettings {
    pub table: TableSettings,
    pub aux_scale: AuxScaleSettings,
    pub build: BuildSettings,
    pub sections: SectionSettings,
    pub turn_point_color: Color,
    /// Natural mm; sizes casings that sit on no pipe.
    pub conditional_pipe_diameter: f64,
    pub dimensions: DimensionSettings,
    pub elevation_marks: ElevationMarkSettings,
}

impl Default for GeneralSettings {
    fn default() -> Self {
        Self {
            table: TableSettings {
                top_right_of_header: PaperPoint::new(60.0, 200.0),
                has_header: true,
                min_headerless_length: 0.0,
                font: FontSetting::default(),
                slope_unit: SlopeUnit::Permille,
                row_height: 5.0,
                header_width: 35.0,
            },
            aux_scale: AuxScaleSettings {
                enabled: false,
                division: 1000.0,
                color: Color(7),
                font: FontSetting::new(1.8),
            },
            build: BuildSettings {
                scales: ScalePair { scale_h: 1000, scale_v: 200 },
                pipeline_kind: PipelineKind::Sewer,
                base_soil: String::new(),
                min_ellipse_ratio: 0.5,
                conditional_ground_level: 100_000.0,
                conditional_pipe_bottom_level: 97_000.0,
                surface_colors: SurfaceColors {
                    project: Color(7),
                    natural: Color(8),
                    groundwater: Color(5),
                },
                font: FontSetting::default(),
            },
            sections: SectionSettings {
                cable_drawn_diameter: 1.5,
                pipe_symbol_length: 4.0,
                cable_symbol_length: 4.0,
                duct_symbol_length: 4.0,
                arrow_leg: 2.0,
                arrow_span: 1.5,
                duct_dot_diameter: 1.0,
            },
            turn_point_color: Color(7),
            conditional_pipe_diameter: 500.0,
            dimensions: DimensionSettings {
                has_leader: false,
                leader_to_shelf_end: false,
                tick_length: 2.0,
                font: FontSetting::default(),
                color: Color(7),
            },
            elevation_marks: ElevationMarkSettings {
                line_kind: LineKind::SolidThin,
                arrow_leg: 2.0,
                font: FontSetting::default(),
                color: Color(7),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AboveGroundDefaults {
    pub kind: AboveGroundKind,
    pub color: Color,
    pub width: f64,
    /// Used for trestles only.
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionDefaults {
    pub kind: SectionTag,
    pub diameter: f64,
    pub wall: f64,
    pub casing: Option<SectionCasing>,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellDefaults {
    pub kind: WellKind,
    pub width: f64,
    pub overshoot_below_pipe: f64,
    pub depth_label_offset: f64,
    pub color: Color,
    pub line_kind: LineKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasingDefaults {
    pub link: CasingLink,
    pub wall: f64,
    pub length: f64,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipeDefaults {
    pub color: Color,
    /// Type of the last added pipe.
    pub last_type: Option<ObjectId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextDefaults {
    pub font: FontSetting,
    pub line_step: f64,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionDefaults {
    /// Paper mm above the table top.
    pub line_offset: f64,
    /// Paper mm from the dimension line.
    pub text_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElevationMarkDefaults {
    pub arrow_shift: f64,
    pub shelf_dir: ShelfDir,
    pub shelf_lift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefaultSettings {
    pub above_ground: AboveGroundDefaults,
    pub section: SectionDefaults,
    pub well: WellDefaults,
    pub casing: CasingDefaults,
    pub pipe: PipeDefaults,
    pub text: TextDefaults,
    pub dimension: DimensionDefaults,
    pub elevation_mark: ElevationMarkDefaults,
}

impl Default for DefaultSettings {
    fn default() -> Self {
        Self {
            above_ground: AboveGroundDefaults {
                kind: AboveGroundKind::Road,
                color: Color(7),
                width: 6000.0,
                height: 5000.0,
            },
            section: SectionDefaults {
                kind: SectionTag::Pipe,
                diameter: 200.0,
                wall: 6.0,
                casing: None,
                color: Color(7),
            },
            well: WellDefaults {
                kind: WellKind::Manhole,
                width: 1000.0,
                overshoot_below_pipe: 200.0,
                depth_label_offset: 5.0,
                color: Color(7),
                line_kind: LineKind::SolidMain,
            },
            casing: CasingDefaults {
                link: CasingLink::Proportional(1.5),
                wall: 8.0,
                length: 10_000.0,
                color: Color(7),
            },
            pipe: PipeDefaults { color: Color(7), last_type: None },
            text: TextDefaults {
                font: FontSetting::default(),
                line_step: 4.0,
                color: Color(7),
            },
            dimension: DimensionDefaults {
                line_offset: 12.0,
                text_offset: 1.0,
            },
            elevation_mark: ElevationMarkDefaults {
                arrow_shift: 5.0,
                shelf_dir: ShelfDir::Right,
                shelf_lift: 3.0,
            },
        }
    }
}
