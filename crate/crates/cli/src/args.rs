// SPDX-License-Identifier: Apache-2.0

//! Argument grammar.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use pipeprof::editops::{ChainEnd, Side};
use pipeprof::model::{NaturalPoint, ObjectId, ObjectRef, SurfaceRole};

#[derive(Parser)]
#[command(name = "pipeprof", version, about = "Edit, check and draw longitudinal pipeline profiles")]
pub struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

/// A natural point written `x,y` in millimeters.
#[derive(Debug, Clone, Copy)]
pub struct PointArg(pub NaturalPoint);

impl FromStr for PointArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y but got {s:?}"))?;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
        Ok(Self(NaturalPoint::new(num(x)?, num(y)?)))
    }
}

fn object_id(s: &str) -> Result<ObjectId, String> {
    s.parse::<u32>().map(ObjectId).map_err(|e| format!("{s:?}: {e}"))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EndArg {
    Start,
    End,
}

impl From<EndArg> for ChainEnd {
    fn from(e: EndArg) -> Self {
        match e {
            EndArg::Start => ChainEnd::Start,
            EndArg::End => ChainEnd::End,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GroundMode {
    /// Insert (or rewrite) a vertex at the station.
    AddVertex,
    /// Tilt the segment about its right end.
    MoveLeft,
    /// Tilt the segment about its left end.
    MoveRight,
    /// Shift the whole segment vertically.
    Shift,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Create a profile file.
    New {
        file: PathBuf,
        /// Start from the bundled sample instead of an empty profile.
        #[arg(long)]
        sample: bool,
    },
    /// Read a profile file and print a summary.
    Load {
        file: PathBuf,
        /// Print the data table instead.
        #[arg(long)]
        table: bool,
    },
    /// Write a profile given as JSON.
    Save {
        file: PathBuf,
        /// JSON text, `@path` or `-` for stdin.
        #[arg(long)]
        from: String,
    },
    /// Add an object given as JSON, e.g. '{"kind":"well","axis_x":15000}'.
    Add { file: PathBuf, object: String },
    /// Delete an object and everything that depends on it.
    Del { file: PathBuf, target: ObjectRef },
    /// Move an object or one vertex of a pipe or surface.
    Move {
        file: PathBuf,
        target: ObjectRef,
        /// Vertex index, for pipes and surfaces.
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dx: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dy: f64,
    },
    /// Copy an object to a new position.
    Copy {
        file: PathBuf,
        source: ObjectRef,
        #[arg(long, allow_negative_numbers = true)]
        at: Option<PointArg>,
        /// Section an elevation mark copy attaches to.
        #[arg(long, value_parser = object_id)]
        section: Option<ObjectId>,
    },
    /// Show an object's properties, or change them with a JSON merge patch.
    Props {
        file: PathBuf,
        target: ObjectRef,
        #[arg(long)]
        set: Option<String>,
    },
    /// Edit pipes.
    #[command(subcommand)]
    Pipe(PipeCmd),
    /// Edit ground and groundwater lines.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Replace the lines of a text.
    Text {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        text: ObjectId,
        #[arg(long = "line", required = true)]
        lines: Vec<String>,
    },
    /// Type a value into a data-table cell.
    #[command(subcommand)]
    TableSet(TableCmd),
    /// Move the whole drawing on the sheet, paper mm with Y down.
    MoveProfile {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dx: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dy: f64,
    },
    /// Show settings, or change them with a JSON merge patch.
    Settings {
        file: PathBuf,
        #[arg(long)]
        set: Option<String>,
        /// Act on the object defaults instead of the general settings.
        #[arg(long)]
        defaults: bool,
    },
    /// List a pipe catalog, or add one of its entries to a profile.
    Catalog {
        catalog: PathBuf,
        #[arg(long)]
        into: Option<PathBuf>,
        /// Entry name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Export the specification as tab-separated text.
    Spec {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw the profile as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the prototype files of a directory.
    List { dir: PathBuf },
    /// Check a profile file against every invariant.
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
pub enum PipeCmd {
    /// Append joints at one end.
    Continue {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long, value_enum)]
        end: EndArg,
        #[arg(long = "point", required = true, allow_negative_numbers = true)]
        points: Vec<PointArg>,
    },
    /// Insert a joint at x.
    Split {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Cut the pipe in two at an interior joint.
    Divide {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long)]
        index: usize,
    },
    /// Join the pipe with the one meeting it at the given end.
    Merge {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long, value_enum)]
        end: EndArg,
        /// Pipe type to keep when the two differ.
        #[arg(long, value_parser = object_id)]
        r#type: Option<ObjectId>,
        /// Color to keep when the two differ.
        #[arg(long)]
        color: Option<u8>,
    },
    /// Remove a joint.
    DelJoint {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Subcommand)]
pub enum SurfaceCmd {
    /// Append vertices at one end.
    Extend {
        file: PathBuf,
        #[arg(long)]
        role: SurfaceRole,
        #[arg(long, value_enum)]
        end: EndArg,
        #[arg(long = "point", required = true, allow_negative_numbers = true)]
        points: Vec<PointArg>,
    },
    /// Insert a vertex at x.
    Split {
        file: PathBuf,
        #[arg(long)]
        role: SurfaceRole,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Remove a vertex.
    DelVertex {
        file: PathBuf,
        #[arg(long)]
        role: SurfaceRole,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Subcommand)]
pub enum TableCmd {
    /// Set a ground elevation at a station.
    Ground {
        file: PathBuf,
        #[arg(long)]
        role: SurfaceRole,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        elev: f64,
        #[arg(long, value_enum)]
        mode: GroundMode,
    },
    /// Set the horizontal length of a pipe segment.
    Length {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long)]
        seg: usize,
        #[arg(long)]
        len: f64,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        keep_slope: bool,
    },
    /// Set the slope of a pipe segment in the table's unit.
    Slope {
        file: PathBuf,
        #[arg(long, value_parser = object_id)]
        pipe: ObjectId,
        #[arg(long)]
        seg: usize,
        #[arg(long, allow_negative_numbers = true)]
        slope: f64,
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// Set the distance between two adjacent stations.
    Distance {
        file: PathBuf,
        #[arg(long)]
        left: ObjectRef,
        #[arg(long)]
        right: ObjectRef,
        #[arg(long)]
        dist: f64,
        #[arg(long, value_enum)]
        side: SideArg,
    },
}
