//! CSV tables and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::model::State2;
use crate::pde::{FearField, PdeState};

/// Scientific notation with 17 significant digits (lossless for `f64`).
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn trajectory_csv(times: &[f64], states: &[State2]) -> String {
    let mut s = String::from("t,x,y\n");
    for (t, y) in times.iter().zip(states) {
        let _ = writeln!(s, "{},{},{}", num(*t), num(y[0]), num(y[1]));
    }
    s
}

pub fn snapshots_csv(xs: &[f64], snaps: &[PdeState]) -> String {
    let mut s = String::from("t,x,u,v\n");
    for snap in snaps {
        let t = num(snap.t);
        for (j, x) in xs.iter().enumerate() {
            let _ = writeln!(s, "{t},{},{},{}", num(*x), num(snap.u[j]), num(snap.v[j]));
        }
    }
    s
}

pub fn field_csv(field: &FearField) -> String {
    let mut s = String::from("x,k\n");
    for (x, k) in field.xs.iter().zip(&field.k) {
        let _ = writeln!(s, "{},{}", num(*x), num(*k));
    }
    s
}
