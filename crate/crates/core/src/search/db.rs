//! Append-only JSON-lines database of search results.
//!
//! Every line is one record with a `schema` field and a `kind`:
//! `orbit` (an orbit with its exact sum and members), `orbit_error` (a
//! class whose orbit could not be computed) or `degree_complete` (all
//! candidates of one degree were processed, with counts). A `<db>.lock`
//! file guards against concurrent writers.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RECORD_SCHEMA: &str = "origami-kz/search-record/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub stratum: String,
    pub degree: usize,
    /// Least member, in cycle notation.
    pub key: String,
    pub orbit_size: usize,
    /// Exact sum of the non-negative exponents, `p/q` or an integer.
    pub sum: String,
    pub degenerate: bool,
    /// For degenerate orbits: every member passes the direction screen.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen_all_members: Option<bool>,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitErrorRecord {
    pub stratum: String,
    pub degree: usize,
    pub key: String,
    pub error: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub stratum: String,
    pub degree: usize,
    pub source: String,
    pub candidates: u64,
    pub screened: u64,
    pub orbits: u64,
    pub degenerate: u64,
    pub errors: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Orbit(OrbitRecord),
    OrbitError(OrbitErrorRecord),
    DegreeComplete(DegreeRecord),
}

#[derive(Serialize, Deserialize)]
struct Line {
    schema: String,
    #[serde(flatten)]
    record: Record,
}

impl Record {
    pub fn to_line(&self) -> String {
        serde_json::to_string(&Line { schema: RECORD_SCHEMA.into(), record: self.clone() }).expect("records serialize")
    }

    pub fn from_line(line: &str, number: usize) -> Result<Record> {
        let parsed: Line =
            serde_json::from_str(line).map_err(|e| Error::CorruptRecord { line: number, reason: e.to_string() })?;
        if parsed.schema != RECORD_SCHEMA {
            return Err(Error::CorruptRecord { line: number, reason: format!("unknown schema {}", parsed.schema) });
        }
        Ok(parsed.record)
    }

    pub fn stratum(&self) -> &str {
        match self {
            Record::Orbit(r) => &r.stratum,
            Record::OrbitError(r) => &r.stratum,
            Record::DegreeComplete(r) => &r.stratum,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Record::Orbit(r) => r.degree,
            Record::OrbitError(r) => r.degree,
            Record::DegreeComplete(r) => r.degree,
        }
    }
}

/// Reads all records, skipping corrupt lines. Returns the records and the
/// line-level errors that were skipped.
pub fn db_read(path: &Path) -> Result<(Vec<Record>, Vec<Error>)> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), Vec::new())),
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match Record::from_line(&line, k + 1) {
            Ok(r) => records.push(r),
            Err(e) => {
                log::warn!("{e}; skipping");
                skipped.push(e);
            }
        }
    }
    Ok((records, skipped))
}

/// Appends records, one line each, flushing after the batch.
pub fn db_write(path: &Path, records: &[Record]) -> Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    for r in records {
        writeln!(file, "{}", r.to_line())?;
    }
    file.flush()?;
    Ok(())
}

/// Exclusive writer lock, released on drop.
#[derive(Debug)]
pub struct DbLock {
    path: PathBuf,
}

impl DbLock {
    pub fn acquire(db: &Path) -> Result<DbLock> {
        let mut name = db.as_os_str().to_owned();
        name.push(".lock");
        let path = PathBuf::from(name);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(DbLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::LockHeld(path.display().to_string())),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for DbLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Record> {
        vec![
            Record::Orbit(OrbitRecord {
                stratum: "H(2)".into(),
                degree: 3,
                key: "h=(1 2)(3); v=(1 3)(2)".into(),
                orbit_size: 3,
                sum: "4/3".into(),
                degenerate: false,
                screen_all_members: None,
                members: vec!["h=(1 2)(3); v=(1 3)(2)".into()],
            }),
            Record::DegreeComplete(DegreeRecord {
                stratum: "H(2)".into(),
                degree: 3,
                source: "rank-one".into(),
                candidates: 10,
                screened: 1,
                orbits: 1,
                degenerate: 0,
                errors: 0,
            }),
        ]
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db.jsonl");
        db_write(&path, &sample()).unwrap();
        std::fs::OpenOptions::new().append(true).open(&path).unwrap().write_all(b"{not json\n").unwrap();
        let (records, skipped) = db_read(&path).unwrap();
        assert_eq!(records, sample());
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0].code(), "CorruptRecord");
    }

    #[test]
    fn lock_is_exclusive() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db.jsonl");
        let lock = DbLock::acquire(&path).unwrap();
        assert_eq!(DbLock::acquire(&path).unwrap_err().code(), "LockHeld");
        drop(lock);
        assert!(DbLock::acquire(&path).is_ok());
    }
}
