//! Text output helpers shared by the file formats.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits, which round-trips every `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.flush().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

pub fn parse_f64(field: &str, line: usize, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::format(line, format!("cannot parse {what} from {field:?}")))
}

/// Splits a CSV row and checks the column count.
pub fn split_row(line: &str, line_no: usize, expected: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != expected {
        return Err(Error::format(
            line_no,
            format!("expected {expected} columns, found {}", fields.len()),
        ));
    }
    Ok(fields)
}
