use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Config, SCHEMA_VERSION};
use crate::CliError;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Provenance stamped on every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub schema_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub tool_version: &'static str,
}

impl Meta {
    pub fn new(cfg: &Config) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config_hash: cfg.hash(),
            seed: cfg.seed,
            tool_version: TOOL_VERSION,
        }
    }
}

/// A table of rows rendered either as CSV with `#` metadata lines or as a
/// JSON array.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, meta: &Meta) -> String {
        let mut s = String::new();
        writeln!(s, "# schema_version={}", meta.schema_version).unwrap();
        writeln!(s, "# config_hash={}", meta.config_hash).unwrap();
        writeln!(s, "# seed={}", meta.seed).unwrap();
        writeln!(s, "# tool_version={}", meta.tool_version).unwrap();
        writeln!(s, "{}", self.header.join(",")).unwrap();
        for row in &self.rows {
            writeln!(s, "{}", row.join(",")).unwrap();
        }
        s
    }

    /// Rows as objects; numeric cells stay numbers.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| {
                        let cell = serde_json::from_str::<serde_json::Value>(v)
                            .ok()
                            .filter(|c| c.is_number())
                            .unwrap_or_else(|| serde_json::Value::String(v.clone()));
                        (k.to_string(), cell)
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Shortest round-trip decimal form, so reruns are byte-identical.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub struct Writer {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    pub fn json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value).expect("output serializes");
        body.push('\n');
        self.text(name, &body)
    }

    /// Writes `stem.csv` (csv format only) and the JSON summary `stem.json`,
    /// which carries the table as well when the format is json.
    pub fn table(
        &mut self,
        stem: &str,
        format: Format,
        meta: &Meta,
        table: &Table,
        mut summary: serde_json::Map<String, serde_json::Value>,
    ) -> Result<(), CliError> {
        if format == Format::Csv {
            self.text(&format!("{stem}.csv"), &table.to_csv(meta))?;
        } else {
            summary.insert("rows".into(), table.to_json());
        }
        summary.insert(
            "meta".into(),
            serde_json::to_value(meta).expect("meta serializes"),
        );
        self.json(&format!("{stem}.json"), &summary)
    }
}
