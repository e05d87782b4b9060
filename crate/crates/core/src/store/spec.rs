// SPDX-License-Identifier: Apache-2.0

//! Bill of materials: one row per pipe type in use.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::StoreError;
use crate::model::{validate, ObjectId, Profile};

pub const SPEC_HEADER: [&str; 11] = [
    "Поз.",
    "Обозначение",
    "Наименование",
    "Материал",
    "Кол.",
    "Ед. изм.",
    "Масса ед., кг",
    "Примечание",
    "Тип, марка, документ",
    "Завод-изготовитель",
    "Код продукции",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecRow {
    pub pipe_type: ObjectId,
    pub position: String,
    pub designation: String,
    pub name: String,
    pub material: String,
    /// Total axis length of the type's pipes, natural mm.
    pub length: f64,
    pub unit: String,
    pub unit_mass: Option<f64>,
    pub note: String,
    pub type_mark_doc: String,
    pub manufacturer: String,
    pub product_code: String,
}

/// Numeric positions sort by value and before textual ones; rows without a
/// position come last.
fn by_position(a: &SpecRow, b: &SpecRow) -> Ordering {
    let key = |r: &SpecRow| {
        let num = r.position.trim().replace(',', ".").parse::<f64>().ok();
        (r.position.is_empty(), num.is_none(), num.unwrap_or(0.0))
    };
    let (ka, kb) = (key(a), key(b));
    (ka.0, ka.1)
        .cmp(&(kb.0, kb.1))
        .then(ka.2.total_cmp(&kb.2))
        .then_with(|| a.position.cmp(&b.position))
        .then(a.pipe_type.cmp(&b.pipe_type))
}

pub fn spec_rows(p: &Profile) -> Vec<SpecRow> {
    let mut length: BTreeMap<ObjectId, f64> = BTreeMap::new();
    for pipe in p.pipes.values() {
        let l: f64 = pipe.axis.windows(2).map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y)).sum();
        *length.entry(pipe.type_ref).or_default() += l;
    }
    let mut rows: Vec<SpecRow> = length
        .into_iter()
        .filter_map(|(id, length)| {
            let t = p.pipe_types.get(&id)?;
            let s = &t.spec;
            let text = |v: &Option<String>| v.clone().unwrap_or_default();
            Some(SpecRow {
                pipe_type: id,
                position: text(&s.position),
                designation: text(&s.designation),
                name: s.name_and_characteristic.clone().unwrap_or_else(|| t.name.clone()),
                material: t.material.clone(),
                length,
                unit: s.unit.clone().unwrap_or_else(|| "м".into()),
                unit_mass: s.unit_mass,
                note: text(&s.note),
                type_mark_doc: text(&s.type_mark_doc),
                manufacturer: text(&s.manufacturer),
                product_code: text(&s.product_code),
            })
        })
        .collect();
    rows.sort_by(by_position);
    rows
}

fn cell(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// Tab-separated text with a header line. Quantities are meters to 0.01.
pub fn spec_tsv(p: &Profile) -> String {
    let mut out = SPEC_HEADER.join("\t");
    out.push('\n');
    for r in spec_rows(p) {
        let fields = [
            cell(&r.position),
            cell(&r.designation),
            cell(&r.name),
            cell(&r.material),
            format!("{:.2}", r.length / 1000.0),
            cell(&r.unit),
            r.unit_mass.map(|m| m.to_string()).unwrap_or_default(),
            cell(&r.note),
            cell(&r.type_mark_doc),
            cell(&r.manufacturer),
            cell(&r.product_code),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

/// Writes the specification and returns the number of data rows.
pub fn export_spec(p: &Profile, dest: &Path) -> Result<usize, StoreError> {
    let v = validate(p);
    if !v.is_empty() {
        return Err(StoreError::Invalid(v));
    }
    let rows = spec_rows(p).len();
    std::fs::write(dest, spec_tsv(p))?;
    Ok(rows)
}
