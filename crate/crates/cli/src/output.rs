//! CSV and JSON serialization, and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use magic_billiards::dynamics::Trajectory;
use magic_billiards::geometry::{caustic_of_line, to_elliptic};
use magic_billiards::ConfocalFamily;
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: &str = "i,x,y,vx,vy,lambda1,lambda2,caustic";

/// One row per impact after the start, with 17 significant digits.
pub fn trajectory_csv(fam: &ConfocalFamily, traj: &Trajectory) -> Result<String, CliError> {
    let mut out = String::with_capacity(160 * traj.states.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, s) in traj.states.iter().enumerate().skip(1) {
        let ec = to_elliptic(fam, s.at).map_err(|e| CliError::Numerical(e.to_string()))?;
        let c = caustic_of_line(fam, s.at, s.v).map_err(|e| CliError::Numerical(e.to_string()))?;
        let _ = writeln!(
            out,
            "{i},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.at.x, s.at.y, s.v.x, s.v.y, ec.lambda1, ec.lambda2, c.lambda
        );
    }
    Ok(out)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
