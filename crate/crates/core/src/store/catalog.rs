// SPDX-License-Identifier: Apache-2.0

//! Pipe-type catalogs.
//!
//! The text format is line oriented UTF-8. A line starting with `#` opens a
//! group whose title is the rest of the line. Every other non-blank line is
//! an entry with tab-separated fields:
//!
//! ```text
//! diameter <TAB> name [<TAB> material [<TAB> insulation [<TAB> designation [<TAB> unit mass [<TAB> note]]]]]
//! ```
//!
//! An empty diameter field, or a line without tabs, takes the diameter from
//! a `DxS` size in the name, as in `Труба 630x8 ГОСТ 10704-76`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{PipeType, SpecProps};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Catalog {
    pub groups: Vec<CatalogGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogGroup {
    pub title: String,
    pub entries: Vec<PipeType>,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Syntax { line, message: message.into() }
}

/// First `D` of a `DxS` size token; `x`, Cyrillic `х` and `×` are accepted.
fn diameter_in_name(name: &str) -> Option<f64> {
    let chars: Vec<char> = name.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_digit() && (i == 0 || !chars[i - 1].is_ascii_digit() && chars[i - 1] != '.') {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == ',') {
                i += 1;
            }
            let sep = chars.get(i).is_some_and(|c| matches!(c, 'x' | 'X' | 'х' | 'Х' | '×'));
            let wall = chars.get(i + 1).is_some_and(|c| c.is_ascii_digit());
            if sep && wall {
                let num: String = chars[start..i].iter().map(|&c| if c == ',' { '.' } else { c }).collect();
                return num.parse().ok();
            }
        } else {
            i += 1;
        }
    }
    None
}

fn number(field: &str) -> Option<f64> {
    field.trim().replace(',', ".").parse::<f64>().ok().filter(|v| v.is_finite())
}

fn opt(field: Option<&&str>) -> Option<String> {
    field.map(|s| s.trim()).filter(|s| !s.is_empty()).map(str::to_owned)
}

fn parse_entry(line: &str, n: usize) -> Result<PipeType, CatalogError> {
    let fields: Vec<&str> = line.split('\t').collect();
    let (diameter, name) = if fields.len() == 1 { ("", fields[0].trim()) } else { (fields[0].trim(), fields[1].trim()) };
    if name.is_empty() {
        return Err(syntax(n, "empty name"));
    }
    let outer_diameter = if diameter.is_empty() {
        diameter_in_name(name).ok_or_else(|| syntax(n, "no diameter field and no size in the name"))?
    } else {
        number(diameter).ok_or_else(|| syntax(n, format!("malformed diameter {diameter:?}")))?
    };
    if outer_diameter <= 0.0 {
        return Err(syntax(n, "diameter must be positive"));
    }
    let unit_mass = match fields.get(5).map(|s| s.trim()).filter(|s| !s.is_empty()) {
        Some(s) => Some(number(s).ok_or_else(|| syntax(n, format!("malformed unit mass {s:?}")))?),
        None => None,
    };
    if fields.len() > 7 {
        return Err(syntax(n, "too many fields"));
    }
    Ok(PipeType {
        outer_diameter,
        name: name.to_owned(),
        material: opt(fields.get(2)).unwrap_or_default(),
        insulation: opt(fields.get(3)).unwrap_or_default(),
        spec: SpecProps { designation: opt(fields.get(4)), unit_mass, note: opt(fields.get(6)), ..Default::default() },
    })
}

pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let mut cat = Catalog::default();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(title) = line.strip_prefix('#') {
            let title = title.trim();
            if title.is_empty() {
                return Err(syntax(n, "empty group title"));
            }
            if cat.groups.iter().any(|g| g.title == title) {
                return Err(syntax(n, format!("duplicate group {title:?}")));
            }
            cat.groups.push(CatalogGroup { title: title.to_owned(), entries: Vec::new() });
            continue;
        }
        let entry = parse_entry(line, n)?;
        match cat.groups.last_mut() {
            Some(g) => g.entries.push(entry),
            None => return Err(syntax(n, "entry before the first group")),
        }
    }
    Ok(cat)
}

pub fn load_catalog(src: &Path) -> Result<Catalog, CatalogError> {
    parse_catalog(&std::fs::read_to_string(src)?)
}

impl Catalog {
    /// Looks an entry up by group index and entry index.
    pub fn entry(&self, group: usize, index: usize) -> Option<&PipeType> {
        self.groups.get(group)?.entries.get(index)
    }

    pub fn find(&self, name: &str) -> Option<&PipeType> {
        self.groups.iter().flat_map(|g| &g.entries).find(|t| t.name == name)
    }

    /// Text form that parses back to the same catalog.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            out.push_str("# ");
            out.push_str(&g.title);
            out.push('\n');
            for t in &g.entries {
                let mass = t.spec.unit_mass.map(|m| m.to_string()).unwrap_or_default();
                let fields = [
                    t.outer_diameter.to_string(),
                    t.name.clone(),
                    t.material.clone(),
                    t.insulation.clone(),
                    t.spec.designation.clone().unwrap_or_default(),
                    mass,
                    t.spec.note.clone().unwrap_or_default(),
                ];
                let keep = fields.iter().rposition(|f| !f.is_empty()).map_or(2, |i| (i + 1).max(2));
                out.push_str(&fields[..keep].join("\t"));
                out.push('\n');
            }
        }
        out
    }
}
