// SPDX-License-Identifier: Apache-2.0

//! Typed object identifiers.
//!
//! References print and parse as `kind:id` (`well:12`, `surface:project`),
//! which is also their JSON form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::objects::LeaderTarget;

/// Profile-wide object id. Assigned monotonically, never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub u32);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceRole {
    Project,
    Natural,
    Groundwater,
}

impl SurfaceRole {
    pub const ALL: [SurfaceRole; 3] = [Self::Project, Self::Natural, Self::Groundwater];

    pub fn name(self) -> &'static str {
        match self {
            Self::Project => "project",
            Self::Natural => "natural",
            Self::Groundwater => "groundwater",
        }
    }
}

impl FromStr for SurfaceRole {
    type Err = RefParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "project" => Ok(Self::Project),
            "natural" => Ok(Self::Natural),
            "groundwater" => Ok(Self::Groundwater),
            _ => Err(RefParseError(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectKind {
    AboveGround,
    Section,
    TurnPoint,
    Well,
    Casing,
    PipeType,
    Pipe,
    Text,
    Leader,
    Dimension,
    ElevationMark,
    Surface,
}

impl ObjectKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::AboveGround => "above-ground",
            Self::Section => "section",
            Self::TurnPoint => "turn-point",
            Self::Well => "well",
            Self::Casing => "casing",
            Self::PipeType => "pipe-type",
            Self::Pipe => "pipe",
            Self::Text => "text",
            Self::Leader => "leader",
            Self::Dimension => "dimension",
            Self::ElevationMark => "elevation-mark",
            Self::Surface => "surface",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "above-ground" => Self::AboveGround,
            "section" => Self::Section,
            "turn-point" => Self::TurnPoint,
            "well" => Self::Well,
            "casing" => Self::Casing,
            "pipe-type" => Self::PipeType,
            "pipe" => Self::Pipe,
            "text" => Self::Text,
            "leader" => Self::Leader,
            "dimension" => Self::Dimension,
            "elevation-mark" => Self::ElevationMark,
            "surface" => Self::Surface,
            _ => return None,
        })
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reference to any addressable part of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ObjectRef {
    AboveGround(ObjectId),
    Section(ObjectId),
    TurnPoint(ObjectId),
    Well(ObjectId),
    Casing(ObjectId),
    PipeType(ObjectId),
    Pipe(ObjectId),
    Text(ObjectId),
    Leader(ObjectId),
    Dimension(ObjectId),
    ElevationMark(ObjectId),
    Surface(SurfaceRole),
}

impl ObjectRef {
    pub fn kind(self) -> ObjectKind {
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

    pub fn id(self) -> Option<ObjectId> {
        match self {
            Self::AboveGround(id)
            | Self::Section(id)
            | Self::TurnPoint(id)
            | Self::Well(id)
            | Self::Casing(id)
            | Self::PipeType(id)
            | Self::Pipe(id)
            | Self::Text(id)
            | Self::Leader(id)
            | Self::Dimension(id)
            | Self::ElevationMark(id) => Some(id),
            Self::Surface(_) => None,
        }
    }

    pub fn from_kind(kind: ObjectKind, id: ObjectId) -> Option<Self> {
        Some(match kind {
            ObjectKind::AboveGround => Self::AboveGround(id),
            ObjectKind::Section => Self::Section(id),
            ObjectKind::TurnPoint => Self::TurnPoint(id),
            ObjectKind::Well => Self::Well(id),
            ObjectKind::Casing => Self::Casing(id),
            ObjectKind::PipeType => Self::PipeType(id),
            ObjectKind::Pipe => Self::Pipe(id),
            ObjectKind::Text => Self::Text(id),
            ObjectKind::Leader => Self::Leader(id),
            ObjectKind::Dimension => Self::Dimension(id),
            ObjectKind::ElevationMark => Self::ElevationMark(id),
            ObjectKind::Surface => return None,
        })
    }

    /// The axis-bearing view of this reference, if it has one.
    pub fn as_axis(self) -> Option<AxisRef> {
        Some(match self {
            Self::AboveGround(id) => AxisRef::AboveGround(id),
            Self::Section(id) => AxisRef::Section(id),
            Self::TurnPoint(id) => AxisRef::TurnPoint(id),
            Self::Well(id) => AxisRef::Well(id),
            Self::Casing(id) => AxisRef::Casing(id),
            _ => return None,
        })
    }
}

impl fmt::Display for ObjectRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Surface(role) => write!(f, "surface:{}", role.name()),
            other => write!(f, "{}:{}", other.kind(), other.id().expect("id-bearing")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed object reference `{0}` (expected kind:id)")]
pub struct RefParseError(pub String);

impl FromStr for ObjectRef {
    type Err = RefParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RefParseError(s.to_owned());
        let (kind, rest) = s.split_once(':').ok_or_else(err)?;
        let kind = ObjectKind::from_name(kind.trim()).ok_or_else(err)?;
        let rest = rest.trim();
        if kind == ObjectKind::Surface {
            return rest.parse().map(Self::Surface).map_err(|_| err());
        }
        let id = rest.parse::<u32>().map_err(|_| err())?;
        Self::from_kind(kind, ObjectId(id)).ok_or_else(err)
    }
}

impl TryFrom<String> for ObjectRef {
    type Error = RefParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ObjectRef> for String {
    fn from(r: ObjectRef) -> Self {
        r.to_string()
    }
}

/// Reference to an object that has a vertical axis: these can carry
/// dimension extension lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AxisRef {
    AboveGround(ObjectId),
    Section(ObjectId),
    TurnPoint(ObjectId),
    Well(ObjectId),
    Casing(ObjectId),
}

impl AxisRef {
    pub fn id(self) -> ObjectId {
        match self {
            Self::AboveGround(id)
            | Self::Section(id)
            | Self::TurnPoint(id)
            | Self::Well(id)
            | Self::Casing(id) => id,
        }
    }
}

impl From<AxisRef> for ObjectRef {
    fn from(a: AxisRef) -> Self {
        match a {
            AxisRef::AboveGround(id) => Self::AboveGround(id),
            AxisRef::Section(id) => Self::Section(id),
            AxisRef::TurnPoint(id) => Self::TurnPoint(id),
            AxisRef::Well(id) => Self::Well(id),
            AxisRef::Casing(id) => Self::Casing(id),
        }
    }
}

impl From<LeaderTarget> for ObjectRef {
    fn from(t: LeaderTarget) -> Self {
        match t {
            LeaderTarget::Section(id) => Self::Section(id),
            LeaderTarget::Casing(id) => Self::Casing(id),
            LeaderTarget::Well(id) => Self::Well(id),
        }
    }
}

impl ObjectRef {
    pub fn as_leader_target(self) -> Option<LeaderTarget> {
        Some(match self {
            Self::Section(id) => LeaderTarget::Section(id),
            Self::Casing(id) => LeaderTarget::Casing(id),
            Self::Well(id) => LeaderTarget::Well(id),
            _ => return None,
        })
    }
}

impl TryFrom<String> for LeaderTarget {
    type Error = RefParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        let r: ObjectRef = s.parse()?;
        r.as_leader_target().ok_or(RefParseError(s))
    }
}

impl From<LeaderTarget> for String {
    fn from(t: LeaderTarget) -> Self {
        ObjectRef::from(t).to_string()
    }
}

impl fmt::Display for AxisRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ObjectRef::from(*self).fmt(f)
    }
}

impl TryFrom<String> for AxisRef {
    type Error = RefParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        let r: ObjectRef = s.parse()?;
        r.as_axis().ok_or(RefParseError(s))
    }
}

impl From<AxisRef> for String {
    fn from(r: AxisRef) -> Self {
        r.to_string()
    }
}
