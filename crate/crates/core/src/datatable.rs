// SPDX-License-Identifier: Apache-2.0

//! Contents of the main data table under the profile.
//!
//! The table is never stored. [`build_table`] derives every row from the
//! current profile, so edits made on the drawing and edits made through the
//! table always agree.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::linkage::lowest_pipe_at;
use crate::model::{
    interpolate_y, ChainDimension, ModelError, NaturalPoint, ObjectId, Polyline, Profile, SlopeUnit,
};

/// Row labels, top to bottom.
pub const ROW_LABELS: [&str; 8] = [
    "Основание",
    "Обозначение трубы и тип изоляции",
    "Проектная отметка земли",
    "Натурная отметка земли",
    "Отметка низа или лотка трубы",
    "Длина\\Уклон",
    "Расстояние",
    "Номер колодца, точки угла поворота",
];

/// Index of each row in [`ROW_LABELS`].
pub mod row {
    pub const BASE: usize = 0;
    pub const PIPE_DESIGNATION: usize = 1;
    pub const PROJECT_ELEV: usize = 2;
    pub const NATURAL_ELEV: usize = 3;
    pub const PIPE_BOTTOM: usize = 4;
    pub const LENGTH_SLOPE: usize = 5;
    pub const DISTANCE: usize = 6;
    pub const DESIGNATION: usize = 7;
}

/// Stations closer than this (natural mm) are one station.
pub const STATION_MERGE_TOLERANCE: f64 = 0.5;

const SLOPE_EQ_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("x = {0} outside the polyline span")]
pub struct OutOfSpan(pub f64);

/// Piecewise-linear elevation of `polyline` at `x`. At a vertical drop the
/// later vertex governs.
pub fn elevation_at(polyline: &Polyline, x: f64) -> Result<f64, OutOfSpan> {
    polyline.elevation_at(x).ok_or(OutOfSpan(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationSource {
    TurnPoint,
    Well,
    PipeJoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Station {
    pub x: f64,
    pub sources: BTreeSet<StationSource>,
    /// Wells and turn points merged into this station, by x then id.
    pub objects: Vec<ObjectId>,
}

impl Station {
    /// Ground rows, distances and designations only use these stations.
    pub fn is_site_station(&self) -> bool {
        self.sources.contains(&StationSource::Well) || self.sources.contains(&StationSource::TurnPoint)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationValue {
    pub x: f64,
    pub value_mm: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanText {
    pub x_from: f64,
    pub x_to: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthSlope {
    pub x_from: f64,
    pub x_to: f64,
    /// Horizontal length, natural mm.
    pub length_mm: f64,
    /// Fall per unit run, positive falling to the right.
    pub slope: f64,
    pub length_m: String,
    pub slope_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distance {
    pub x_from: f64,
    pub x_to: f64,
    pub value_mm: f64,
    pub value_m: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationText {
    pub x: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainDataTable {
    pub stations: Vec<Station>,
    pub pipe_bottom: Vec<StationValue>,
    pub project_elev: Vec<StationValue>,
    pub natural_elev: Vec<StationValue>,
    pub pipe_designation: Vec<SpanText>,
    pub base: String,
    pub length_slope: Vec<LengthSlope>,
    pub distance: Vec<Distance>,
    pub designations: Vec<StationText>,
    pub has_header: bool,
    pub min_length: f64,
}

/// Formats natural mm as meters with two decimals, rounding half up.
pub fn format_meters(mm: f64) -> String {
    format_fixed(half_up(snap(mm, 1e-3) / 10.0), 2)
}

/// Slope in the table's unit: whole promille or tenths of a percent.
pub fn format_slope(slope: f64, unit: SlopeUnit) -> String {
    let permille = half_up(snap(slope * 1000.0, 1e-9));
    match unit {
        SlopeUnit::Permille => format_fixed(permille, 0),
        SlopeUnit::Percent => format_fixed(permille, 1),
    }
}

/// Converts a slope typed in the table's unit into the stored ratio.
pub fn slope_from_display(value: f64, unit: SlopeUnit) -> f64 {
    match unit {
        SlopeUnit::Permille => value / 1000.0,
        SlopeUnit::Percent => value / 100.0,
    }
}

fn snap(v: f64, quantum: f64) -> f64 {
    (v / quantum).round() * quantum
}

fn half_up(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// `units` scaled down by `10^decimals`, without a negative zero.
fn format_fixed(units: i64, decimals: u32) -> String {
    if decimals == 0 {
        return units.to_string();
    }
    let div = 10i64.pow(decimals);
    let sign = if units < 0 { "-" } else { "" };
    let a = units.unsigned_abs();
    format!("{sign}{}.{:0width$}", a / div as u64, a % div as u64, width = decimals as usize)
}

struct Candidate {
    x: f64,
    source: StationSource,
    object: Option<ObjectId>,
}

fn near(a: NaturalPoint, b: NaturalPoint) -> bool {
    (a.x - b.x).abs() <= STATION_MERGE_TOLERANCE && (a.y - b.y).abs() <= STATION_MERGE_TOLERANCE
}

/// Stations of the table: turn points, well axes and pipe joints (interior
/// vertices and ends shared by two pipes), merged within
/// [`STATION_MERGE_TOLERANCE`].
pub fn collect_stations(profile: &Profile) -> Vec<Station> {
    let mut cands: Vec<Candidate> = Vec::new();
    for (&id, t) in &profile.turn_points {
        cands.push(Candidate { x: t.x, source: StationSource::TurnPoint, object: Some(id) });
    }
    for (&id, w) in &profile.wells {
        cands.push(Candidate { x: w.axis_x, source: StationSource::Well, object: Some(id) });
    }
    let ends: Vec<(ObjectId, NaturalPoint)> = profile
        .pipes
        .iter()
        .flat_map(|(&id, p)| [p.axis.first(), p.axis.last()].into_iter().flatten().map(move |&pt| (id, pt)))
        .collect();
    for (&id, p) in &profile.pipes {
        let n = p.axis.len();
        for (i, pt) in p.axis.iter().enumerate() {
            let interior = i > 0 && i + 1 < n;
            let shared_end = !interior && ends.iter().any(|&(other, e)| other != id && near(e, *pt));
            if interior || shared_end {
                cands.push(Candidate { x: pt.x, source: StationSource::PipeJoint, object: None });
            }
        }
    }
    cands.sort_by(|a, b| a.x.total_cmp(&b.x));

    let mut groups: Vec<Vec<Candidate>> = Vec::new();
    for c in cands {
        match groups.last_mut() {
            Some(g) if c.x - g[0].x <= STATION_MERGE_TOLERANCE => g.push(c),
            _ => groups.push(vec![c]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let x = g
                .iter()
                .find(|c| c.source != StationSource::PipeJoint)
                .unwrap_or(&g[0])
                .x;
            Station {
                x,
                sources: g.iter().map(|c| c.source).collect(),
                objects: g.iter().filter_map(|c| c.object).collect(),
            }
        })
        .collect()
}

fn station_values(stations: &[Station], f: impl Fn(f64) -> Option<f64>) -> Vec<StationValue> {
    stations
        .iter()
        .filter_map(|s| {
            f(s.x).map(|v| StationValue { x: s.x, value_mm: v, text: format_meters(v) })
        })
        .collect()
}

fn same_slope(a: f64, b: f64) -> bool {
    (a - b).abs() <= SLOPE_EQ_TOLERANCE * (1.0 + a.abs().max(b.abs()))
}

fn pipe_designation_spans(profile: &Profile) -> Vec<SpanText> {
    let mut pipes: Vec<(ObjectId, f64, f64)> = profile
        .pipes
        .values()
        .filter_map(|p| Some((p.type_ref, p.axis.first()?.x, p.axis.last()?.x)))
        .collect();
    pipes.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut runs: Vec<(ObjectId, f64, f64)> = Vec::new();
    for (t, lo, hi) in pipes {
        match runs.last_mut() {
            Some(run) if run.0 == t && (lo - run.2).abs() <= STATION_MERGE_TOLERANCE => {
                run.2 = run.2.max(hi)
            }
            _ => runs.push((t, lo, hi)),
        }
    }
    runs.into_iter()
        .map(|(t, lo, hi)| SpanText {
            x_from: lo,
            x_to: hi,
            text: profile.pipe_types.get(&t).map(|pt| pt.designation_text()).unwrap_or_default(),
        })
        .collect()
}

/// Constant-slope runs of the pipeline. Vertical drops are skipped; runs
/// continue across joints and across pipes while the slope stays the same
/// and the axis is continuous.
fn length_slope_spans(profile: &Profile) -> Vec<(NaturalPoint, NaturalPoint)> {
    let mut segs: Vec<(NaturalPoint, NaturalPoint)> = profile
        .pipes
        .values()
        .flat_map(|p| p.axis.windows(2).map(|w| (w[0], w[1])))
        .filter(|(a, b)| b.x > a.x)
        .collect();
    segs.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.1.x.total_cmp(&b.1.x)));
    let slope = |a: NaturalPoint, b: NaturalPoint| (a.y - b.y) / (b.x - a.x);
    let mut spans: Vec<(NaturalPoint, NaturalPoint)> = Vec::new();
    for (a, b) in segs {
        match spans.last_mut() {
            Some(span) if span.1 == a && same_slope(slope(span.0, span.1), slope(a, b)) => span.1 = b,
            _ => spans.push((a, b)),
        }
    }
    spans
}

/// Builds the whole table from the profile.
pub fn build_table(profile: &Profile) -> MainDataTable {
    let stations = collect_stations(profile);
    let site: Vec<Station> = stations.iter().filter(|s| s.is_site_station()).cloned().collect();
    let unit = profile.settings.table.slope_unit;

    let pipe_bottom = station_values(&stations, |x| lowest_pipe_at(profile, x).map(|(_, b)| b));
    let ground = |line: Option<&Polyline>| match line {
        Some(l) => station_values(&site, |x| interpolate_y(&l.points, x)),
        None => Vec::new(),
    };
    let project_elev = ground(profile.surfaces.project.as_ref());
    let natural_elev = ground(profile.surfaces.natural.as_ref());

    let length_slope = length_slope_spans(profile)
        .into_iter()
        .map(|(a, b)| {
            let length_mm = b.x - a.x;
            let slope = (a.y - b.y) / length_mm;
            LengthSlope {
                x_from: a.x,
                x_to: b.x,
                length_mm,
                slope,
                length_m: format_meters(length_mm),
                slope_display: format_slope(slope, unit),
            }
        })
        .collect();

    let distance = site
        .windows(2)
        .map(|w| {
            let value_mm = w[1].x - w[0].x;
            Distance { x_from: w[0].x, x_to: w[1].x, value_mm, value_m: format_meters(value_mm) }
        })
        .collect();

    let designations = site
        .iter()
        .map(|s| {
            let names: Vec<&str> = s
                .objects
                .iter()
                .filter_map(|id| {
                    profile
                        .wells
                        .get(id)
                        .map(|w| w.designation.as_str())
                        .or_else(|| profile.turn_points.get(id).map(|t| t.designation.as_str()))
                })
                .filter(|d| !d.is_empty())
                .collect();
            StationText { x: s.x, text: names.join(", ") }
        })
        .collect();

    MainDataTable {
        pipe_bottom,
        project_elev,
        natural_elev,
        pipe_designation: pipe_designation_spans(profile),
        base: profile.settings.build.base_soil.clone(),
        length_slope,
        distance,
        designations,
        has_header: profile.settings.table.has_header,
        min_length: profile.settings.table.min_headerless_length,
        stations,
    }
}

/// Dimension texts: gaps between consecutive extension lines (sorted by
/// axis X) in meters with two decimals.
pub fn dimension_texts(profile: &Profile, dim: &ChainDimension) -> Result<Vec<String>, ModelError> {
    let mut axes = dim
        .refs
        .iter()
        .map(|&r| profile.axis_of(r))
        .collect::<Result<Vec<f64>, _>>()?;
    axes.sort_by(f64::total_cmp);
    Ok(axes.windows(2).map(|w| format_meters(w[1] - w[0])).collect())
}
