//! CSV tables and the run manifest.
//!
//! Every CSV starts with a `# schema_version=N` comment line followed by the
//! header row. Floats are written in scientific notation with 17 significant
//! digits, which round-trips `f64` exactly.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file_name: &'static str, header: &[&'static str]) -> Self {
        Self {
            file_name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, csv::Error> {
        let path = dir.join(self.file_name);
        let mut file = fs::File::create(&path)?;
        writeln!(file, "# schema_version={SCHEMA_VERSION}")?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(path)
    }
}

/// What a finished run records next to its CSVs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    /// Fully resolved configuration text.
    pub config: String,
    pub outputs: Vec<PathBuf>,
    pub duration_secs: f64,
    pub version: String,
}

pub const MANIFEST_FILE: &str = "manifest.ini";

impl RunManifest {
    /// A loadable config file whose comment header carries the metadata.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# strichartz {}\n", self.version));
        out.push_str(&format!("# subcommand = {}\n", self.subcommand));
        out.push_str(&format!("# duration_seconds = {:.3}\n", self.duration_secs));
        for p in &self.outputs {
            out.push_str(&format!("# output = {}\n", p.display()));
        }
        out.push_str(&format!(
            "# rerun: strichartz {} --config {MANIFEST_FILE}\n\n",
            self.subcommand
        ));
        out.push_str(&self.config);
        out
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, self.render())?;
        Ok(path)
    }
}
