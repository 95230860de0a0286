//! Line-delimited JSON catalog files: UTF-8, one record per LF-terminated line.
//!
//! Readers stop at a trailing line with no LF, which is what a concurrent
//! appender leaves behind mid-write.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::IdentityRecord;
use crate::Natural;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("duplicate record (k={k}, l={l}, d={d})")]
    DuplicateRecord { k: Natural, l: Natural, d: Natural },
    #[error("malformed catalog line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
}

type Key = (Natural, Natural, Natural);

fn owned_key(rec: &IdentityRecord) -> Key {
    (rec.k.clone(), rec.l.clone(), rec.d.clone())
}

fn duplicate(rec: &IdentityRecord) -> CatalogError {
    CatalogError::DuplicateRecord {
        k: rec.k.clone(),
        l: rec.l.clone(),
        d: rec.d.clone(),
    }
}

fn check_unique<'a>(
    seen: &mut HashSet<Key>,
    records: impl IntoIterator<Item = &'a IdentityRecord>,
) -> Result<(), CatalogError> {
    for rec in records {
        if !seen.insert(owned_key(rec)) {
            return Err(duplicate(rec));
        }
    }
    Ok(())
}

fn write_lines(file: File, records: &[IdentityRecord]) -> io::Result<()> {
    let mut w = BufWriter::new(file);
    for rec in records {
        w.write_all(rec.to_json_line().as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Replaces `path` with `records`. Nothing is written if `records` contains a duplicate key.
pub fn write_catalog(path: &Path, records: &[IdentityRecord]) -> Result<usize, CatalogError> {
    check_unique(&mut HashSet::new(), records)?;
    write_lines(File::create(path)?, records)?;
    Ok(records.len())
}

/// Appends to `path`, creating it if needed. Rejects keys already in the file.
pub fn append_catalog(path: &Path, records: &[IdentityRecord]) -> Result<usize, CatalogError> {
    let mut seen: HashSet<Key> = match read_catalog(path) {
        Ok(existing) => existing.iter().map(owned_key).collect(),
        Err(CatalogError::Io(e)) if e.kind() == io::ErrorKind::NotFound => HashSet::new(),
        Err(e) => return Err(e),
    };
    check_unique(&mut seen, records)?;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_lines(file, records)?;
    Ok(records.len())
}

/// Reads every complete line. Blank lines are skipped; line numbers in errors are 1-based.
pub fn read_catalog(path: &Path) -> Result<Vec<IdentityRecord>, CatalogError> {
    let text = fs::read_to_string(path)?;
    let mut records = Vec::new();
    let Some(end) = text.rfind('\n') else {
        return Ok(records);
    };
    let mut seen = HashSet::new();
    for (i, line) in text[..end].split('\n').enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: IdentityRecord =
            serde_json::from_str(line).map_err(|e| CatalogError::MalformedLine {
                line: line_no,
                reason: e.to_string(),
            })?;
        if !rec.is_consistent() {
            return Err(CatalogError::MalformedLine {
                line: line_no,
                reason: "coordinates do not match (k, l, d)".into(),
            });
        }
        if !seen.insert(owned_key(&rec)) {
            return Err(duplicate(&rec));
        }
        records.push(rec);
    }
    Ok(records)
}
