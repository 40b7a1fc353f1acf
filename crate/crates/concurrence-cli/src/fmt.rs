//! Output formatting: 17-significant-digit floats for CSV, fixed
//! 6-decimal physical quantities and scientific-notation errors for
//! text reports.

use std::fs;
use std::io::Write;
use std::path::Path;

/// Round-trip-safe float for CSV cells: 17 significant digits.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Physical quantity in a text report.
pub fn physical(x: f64) -> String {
    format!("{x:.6}")
}

/// Error magnitude in a text report.
pub fn error(x: f64) -> String {
    format!("{x:.1e}")
}

/// Writes to a file, or to stdout when no path is given. Content is
/// emitted byte-for-byte (LF endings only).
pub fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

/// Renders a three-column table as CSV with a header row.
pub fn csv(columns: &[&str; 3], rows: &[[f64; 3]]) -> String {
    let mut s = String::with_capacity(rows.len() * 72 + 32);
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&g17(row[0]));
        s.push(',');
        s.push_str(&g17(row[1]));
        s.push(',');
        s.push_str(&g17(row[2]));
        s.push('\n');
    }
    s
}
