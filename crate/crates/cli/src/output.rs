//! Rendering and atomic file output.
//!
//! Numbers serialize with 17 significant digits, so parsing a value back
//! reproduces the exact double and identical runs produce identical bytes.
//! Files appear complete or not at all: content goes to a temporary in the
//! destination directory, then renames over the target.

use std::io::Write;
use std::path::Path;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("format must be csv or text, got `{s}`")),
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Uniform command output: an optional column table plus key/value summary
/// lines. Summary lines render as `# key = value` trailers in CSV and as
/// leading plain `key = value` lines in text.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub meta: Vec<(&'static str, String)>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        if !self.headers.is_empty() {
            out.push_str(&self.headers.join(","));
            out.push('\n');
            for row in &self.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("{k} = {v}\n"));
        }
        if self.headers.is_empty() {
            return out;
        }
        if !self.meta.is_empty() {
            out.push('\n');
        }
        // Pad every column to its widest cell so the table reads aligned.
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: Vec<&str>| -> String {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(&format!("{cell:<w$}"));
            }
            s.trim_end().to_string()
        };
        out.push_str(&line(self.headers.clone()));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        print!("{content}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Failure::Io(format!("cannot create temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(content.as_bytes())
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| Failure::Io(format!("cannot finalize {}: {e}", path.display())))?;
    Ok(())
}
