// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::analysis::{SweepRow, TimeSeries};
use crate::error::{Error, Result};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `contents` to a sibling temporary file, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    f.write_all(contents).map_err(|e| io_err(&tmp, e))?;
    f.sync_all().map_err(|e| io_err(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

fn number(x: f64) -> String {
    format!("{x:.15e}")
}

/// `time,<channels...>` with one row per sample.
pub fn series_csv(s: &TimeSeries) -> String {
    table_csv(&s.times, &s.names, &s.channels)
}

/// Standard errors in the same layout as [`series_csv`], if present.
pub fn std_error_csv(s: &TimeSeries) -> Option<String> {
    s.std_errors.as_ref().map(|e| table_csv(&s.times, &s.names, e))
}

fn table_csv(times: &[f64], names: &[String], channels: &[Vec<f64>]) -> String {
    let mut out = String::from("time");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (i, t) in times.iter().enumerate() {
        out.push_str(&number(*t));
        for c in channels {
            out.push(',');
            out.push_str(&number(c[i]));
        }
        out.push('\n');
    }
    out
}

pub const SWEEP_HEADER: &str = "solver,control,coupling,integrated_error,wall_seconds";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.solver,
            r.control,
            number(r.coupling),
            number(r.integrated_error),
            number(r.wall_seconds)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut s = TimeSeries::empty(vec!["a".into(), "b".into()]);
        s.push(0.0, &[1.0, -0.5]);
        s.push(0.1, &[std::f64::consts::PI, 0.0]);
        let text = series_csv(&s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "time,a,b");
        assert_eq!(lines.len(), 3);
        let pi: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert!((pi - std::f64::consts::PI).abs() < 1e-14);
        assert!(std_error_csv(&s).is_none());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("x.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        let leftovers = fs::read_dir(p.parent().unwrap()).unwrap().count();
        assert_eq!(leftovers, 1);
    }
}
