// SPDX-License-Identifier: Apache-2.0

//! Persistence: compact prototype files, pipe-type catalogs and the
//! specification export.
//!
//! A prototype file holds parameters only. Drawings are regenerated from
//! them and never stored.

mod binary;
mod catalog;
mod spec;

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::model::{validate, Profile, Violation};

pub use binary::{MAGIC, VERSION};
pub use catalog::{load_catalog, parse_catalog, Catalog, CatalogError, CatalogGroup};
pub use spec::{export_spec, spec_rows, spec_tsv, SpecRow, SPEC_HEADER};

/// File extension of prototype files.
pub const EXTENSION: &str = "pns";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("not a prototype file")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("file truncated at byte {offset}")]
    Truncated { offset: usize },
    #[error("malformed data at byte {offset}: {what}")]
    Malformed { offset: usize, what: String },
    #[error("profile violates {} rule(s)", .0.len())]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn check(p: &Profile) -> Result<(), StoreError> {
    let v = validate(p);
    if v.is_empty() {
        Ok(())
    } else {
        Err(StoreError::Invalid(v))
    }
}

/// Encodes a valid profile.
pub fn to_bytes(p: &Profile) -> Result<Vec<u8>, StoreError> {
    check(p)?;
    Ok(binary::encode_unchecked(p))
}

/// Decodes and validates.
pub fn from_bytes(bytes: &[u8]) -> Result<Profile, StoreError> {
    let p = binary::decode_unchecked(bytes)?;
    check(&p)?;
    Ok(p)
}

/// Writes the profile and returns the file size.
pub fn save_profile(p: &Profile, dest: &Path) -> Result<usize, StoreError> {
    let bytes = to_bytes(p)?;
    fs::write(dest, &bytes)?;
    Ok(bytes.len())
}

pub fn load_profile(src: &Path) -> Result<Profile, StoreError> {
    from_bytes(&fs::read(src)?)
}

/// One prototype in a directory listing. Unreadable files are listed with
/// `error` set instead of failing the listing.
#[derive(Debug, Clone, Serialize)]
pub struct PrototypeEntry {
    /// File stem.
    pub name: String,
    pub size: u64,
    #[serde(skip)]
    pub profile: Option<Profile>,
    pub error: Option<String>,
}

/// Prototype files in `dir`, sorted by name.
pub fn list_prototypes(dir: &Path) -> io::Result<Vec<PrototypeEntry>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if !path.is_file() || path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
            continue;
        }
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let size = fs::metadata(&path)?.len();
        let (profile, error) = match load_profile(&path) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        };
        out.push(PrototypeEntry { name, size, profile, error });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}
