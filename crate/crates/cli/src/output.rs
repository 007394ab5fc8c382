//! Deterministic CSV and gnuplot emission.

use std::path::{Path, PathBuf};

use crate::error::CliResult;

/// Round-trip-safe decimal form with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV document: `#` comment lines, one column-name row, then data rows.
/// An empty row is emitted as a blank line (gnuplot block separator).
#[derive(Debug, Default)]
pub struct Csv {
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(command: &str, columns: Vec<String>) -> Self {
        Csv {
            comments: vec![
                format!("spectra {}", env!("CARGO_PKG_VERSION")),
                format!("command: {command}"),
            ],
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn comments(&mut self, lines: impl IntoIterator<Item = String>) {
        self.comments.extend(lines);
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn block_break(&mut self) {
        self.rows.push(Vec::new());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            s.push_str("# ");
            s.push_str(c);
            s.push('\n');
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn write(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

/// Gnuplot preamble that reads the CSV files written here and renders SVG.
pub fn gnuplot_preamble(svg: &str, xlabel: &str, ylabel: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set datafile commentschars '#'\n\
         set key autotitle columnhead\n\
         set terminal svg size 900,600\n\
         set output '{svg}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '{ylabel}'\n"
    )
}
