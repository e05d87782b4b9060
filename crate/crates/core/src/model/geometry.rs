// SPDX-License-Identifier: Apache-2.0

//! Points, offsets and X-monotone point chains.
//!
//! Natural coordinates are millimeters of the real site measured from the
//! profile base point; paper coordinates are millimeters on the drawing sheet.

use serde::{Deserialize, Serialize};

/// Largest magnitude accepted for a natural coordinate.
pub const COORD_LIMIT: f64 = 1e9;

/// Palette index. Indices 0..=15 have fixed colors, the rest render black.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u8);

/// A point in natural millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NaturalPoint {
    pub x: f64,
    pub y: f64,
}

impl NaturalPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_valid(&self) -> bool {
        coord_ok(self.x) && coord_ok(self.y)
    }

    pub fn translated(self, delta: Vector) -> Self {
        Self::new(self.x + delta.dx, self.y + delta.dy)
    }
}

/// A point on the drawing sheet, paper millimeters, y growing downward.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PaperPoint {
    pub x: f64,
    pub y: f64,
}

impl PaperPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Offset in paper millimeters, y pointing up like the natural axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PaperOffset {
    pub dx: f64,
    pub dy: f64,
}

impl PaperOffset {
    pub const fn new(dx: f64, dy: f64) -> Self {
        Self { dx, dy }
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite()
    }
}

/// A displacement. Units depend on the target: natural mm for model
/// objects, paper mm for annotation placement.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector {
    pub dx: f64,
    pub dy: f64,
}

impl Vector {
    pub const fn new(dx: f64, dy: f64) -> Self {
        Self { dx, dy }
    }
}

/// Ground surface or groundwater line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<NaturalPoint>,
    pub color: Color,
}

impl Polyline {
    pub fn new(points: Vec<NaturalPoint>, color: Color) -> Self {
        Self { points, color }
    }

    pub fn span(&self) -> Option<(f64, f64)> {
        chain_span(&self.points)
    }

    pub fn elevation_at(&self, x: f64) -> Option<f64> {
        interpolate_y(&self.points, x)
    }
}

pub(crate) fn coord_ok(v: f64) -> bool {
    v.is_finite() && v.abs() < COORD_LIMIT
}

/// Defects of a point chain, reported by [`check_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainDefect {
    TooFewPoints,
    NonFinite { index: usize },
    NonMonotoneX { index: usize },
    DuplicatePoint { index: usize },
}

/// Checks the polyline invariants: at least two points, finite coordinates,
/// non-decreasing x and no two equal consecutive points.
pub fn check_chain(points: &[NaturalPoint]) -> Vec<ChainDefect> {
    let mut out = Vec::new();
    if points.len() < 2 {
        out.push(ChainDefect::TooFewPoints);
    }
    for (i, p) in points.iter().enumerate() {
        if !p.is_valid() {
            out.push(ChainDefect::NonFinite { index: i });
        }
    }
    for (i, w) in points.windows(2).enumerate() {
        if w[1].x < w[0].x {
            out.push(ChainDefect::NonMonotoneX { index: i + 1 });
        } else if w[1] == w[0] {
            out.push(ChainDefect::DuplicatePoint { index: i + 1 });
        }
    }
    out
}

pub fn chain_span(points: &[NaturalPoint]) -> Option<(f64, f64)> {
    Some((points.first()?.x, points.last()?.x))
}

/// Index `i` of the segment `points[i]..points[i + 1]` that governs `x`.
///
/// This is the largest `i` with `points[i].x <= x`, so at a vertical drop
/// the later vertex starts the governing segment.
pub fn segment_index(points: &[NaturalPoint], x: f64) -> Option<usize> {
    let n = points.len();
    if n < 2 || !(x >= points[0].x && x <= points[n - 1].x) {
        return None;
    }
    Some(points[..n - 1].partition_point(|p| p.x <= x) - 1)
}

/// Piecewise-linear y at `x`; `None` outside the chain's X span.
pub fn interpolate_y(points: &[NaturalPoint], x: f64) -> Option<f64> {
    let i = segment_index(points, x)?;
    let (a, b) = (points[i], points[i + 1]);
    if x == b.x {
        return Some(b.y);
    }
    if x == a.x {
        return Some(a.y);
    }
    // Multiply before dividing so whole-mm inputs give exact whole-mm results.
    Some(a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x))
}

/// Index of the segment strictly containing `x` in its interior, or the
/// reason there is none.
pub(crate) fn interior_segment(points: &[NaturalPoint], x: f64) -> Result<usize, SplitMiss> {
    if !x.is_finite() {
        return Err(SplitMiss::OutOfSpan);
    }
    if points.iter().any(|p| p.x == x) {
        return Err(SplitMiss::OnVertex);
    }
    match segment_index(points, x) {
        Some(i) if points[i].x < x && x < points[i + 1].x => Ok(i),
        _ => Err(SplitMiss::OutOfSpan),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SplitMiss {
    OnVertex,
    OutOfSpan,
}
