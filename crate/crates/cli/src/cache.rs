//! Newline-delimited JSON result cache, keyed by (family, sorted config,
//! method). Corrupt lines are skipped with a warning, never fatal.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use permix_core::{FamilySpec, Method, RunRecord};

/// Cache path: the `--cache` flag wins, then `$PERMIX_CACHE`, else none.
pub fn resolve_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("PERMIX_CACHE").map(PathBuf::from))
}

pub fn load(path: &Path) -> Vec<RunRecord> {
    let Ok(file) = std::fs::File::open(path) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RunRecord>(&line) {
            Ok(rec) => out.push(rec),
            Err(err) => eprintln!(
                "warning: skipping corrupt cache line {}: {err}",
                lineno + 1
            ),
        }
    }
    out
}

pub fn find<'a>(
    records: &'a [RunRecord],
    family: &FamilySpec,
    config: &[String],
    method: Method,
) -> Option<&'a RunRecord> {
    records
        .iter()
        .find(|r| r.family == *family && r.config == config && r.method == method)
}

pub fn append(path: &Path, record: &RunRecord) -> std::io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{}", serde_json::to_string(record).expect("record serializes"))
}
