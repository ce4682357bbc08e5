//! CSV result files and the JSON sidecar.
//!
//! Every float is written as `{:.16e}` (17 significant digits), which reads
//! back bit-exactly.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use shallow_core::{Diagnostics, Grid, State};

use crate::error::CliError;

pub const SNAPSHOT_HEADER: [&str; 4] = ["x", "u", "H", "m"];
pub const DIAGNOSTICS_HEADER: [&str; 6] =
    ["t", "mass", "energy", "total_momentum", "max_H", "max_u"];
pub const METADATA_FILE: &str = "metadata.json";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const SNAPSHOT_INDEX_FILE: &str = "snapshots.csv";

type Result<T> = std::result::Result<T, CliError>;

/// Columns of a snapshot file as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTable {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub h: Vec<f64>,
    pub m: Vec<f64>,
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_file_name(index: usize) -> String {
    format!("snapshot_{index:04}.csv")
}

/// Writes a CSV with `header` and already formatted rows.
pub fn write_table<P: AsRef<Path>>(path: P, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(CliError::csv(path))?;
    w.write_record(header).map_err(CliError::csv(path))?;
    for row in rows {
        w.write_record(row).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

/// Reads a numeric CSV, checking the header matches `header` exactly.
pub fn read_table<P: AsRef<Path>>(path: P, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(CliError::csv(path))?;
    let found = r.headers().map_err(CliError::csv(path))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(CliError::Format {
            path: path.into(),
            reason: format!(
                "expected header {}, found {}",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(CliError::csv(path))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::Format {
                path: path.into(),
                reason: format!("row {}: {e}", line + 1),
            })?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_snapshot<P: AsRef<Path>>(
    path: P,
    grid: &Grid,
    state: &State,
    m: &[f64],
) -> Result<()> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    grid.check(m)?;
    let rows: Vec<Vec<String>> = (0..grid.n())
        .map(|i| {
            [grid.x()[i], state.u[i], state.h[i], m[i]]
                .into_iter()
                .map(fmt_f64)
                .collect()
        })
        .collect();
    write_table(path, &SNAPSHOT_HEADER, &rows)
}

pub fn read_snapshot<P: AsRef<Path>>(path: P) -> Result<SnapshotTable> {
    let rows = read_table(path, &SNAPSHOT_HEADER)?;
    let col = |j: usize| rows.iter().map(|r| r[j]).collect();
    Ok(SnapshotTable {
        x: col(0),
        u: col(1),
        h: col(2),
        m: col(3),
    })
}

pub fn write_diagnostics<P: AsRef<Path>>(path: P, records: &[Diagnostics]) -> Result<()> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|d| {
            [d.t, d.mass, d.energy, d.total_momentum, d.max_h, d.max_u]
                .into_iter()
                .map(fmt_f64)
                .collect()
        })
        .collect();
    write_table(path, &DIAGNOSTICS_HEADER, &rows)
}

pub fn read_diagnostics<P: AsRef<Path>>(path: P) -> Result<Vec<Diagnostics>> {
    Ok(read_table(path, &DIAGNOSTICS_HEADER)?
        .into_iter()
        .map(|r| Diagnostics {
            t: r[0],
            mass: r[1],
            energy: r[2],
            total_momentum: r[3],
            max_h: r[4],
            max_u: r[5],
        })
        .collect())
}

/// Index of snapshot files: `index,t,file`.
pub fn write_snapshot_index<P: AsRef<Path>>(path: P, times: &[f64]) -> Result<()> {
    let rows: Vec<Vec<String>> = times
        .iter()
        .enumerate()
        .map(|(i, &t)| vec![i.to_string(), fmt_f64(t), snapshot_file_name(i)])
        .collect();
    write_table(path, &["index", "t", "file"], &rows)
}

/// Sidecar with the tool version, the subcommand and its inputs.
pub fn write_metadata<P: AsRef<Path>>(path: P, command: &str, inputs: Value) -> Result<()> {
    let path = path.as_ref();
    let doc = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "inputs": inputs,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values always serialise");
    text.push('\n');
    fs::write(path, text).map_err(CliError::io(path))
}
