use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    /// Nested JSON records.
    Json,
    /// Aligned plain-text tables.
    Pretty,
}

/// Collects artifact files written into one output directory.
pub struct OutDir {
    pub dir: PathBuf,
    pub written: Vec<String>,
}

impl OutDir {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OutDir { dir: dir.to_path_buf(), written: Vec::new() })
    }

    /// Write via a temporary file in the same directory, then rename.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let target = self.dir.join(name);
        if let Some(parent) = target.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::Input(format!("{}: {e}", parent.display())))?;
        }
        let parent = target.parent().unwrap_or(&self.dir);
        let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| CliError::Input(format!("{}: {e}", parent.display())))?;
        tmp.write_all(bytes).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        tmp.persist(&target).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        self.write(name, s.as_bytes())
    }

    /// A table in the chosen format: `<stem>.csv`, `<stem>.json` (array of
    /// objects keyed by header) or `<stem>.txt`.
    pub fn write_table(&mut self, stem: &str, format: Format, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header).expect("in-memory write");
                for r in rows {
                    w.write_record(r).expect("in-memory write");
                }
                let bytes = w.into_inner().expect("in-memory write");
                self.write(&format!("{stem}.csv"), &bytes)
            }
            Format::Json => {
                let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
                    .iter()
                    .map(|r| header.iter().cloned().zip(r.iter().map(|v| json_cell(v))).collect())
                    .collect();
                self.write_json(&format!("{stem}.json"), &records)
            }
            Format::Pretty => self.write(&format!("{stem}.txt"), pretty_table(header, rows).as_bytes()),
        }
    }
}

fn json_cell(v: &str) -> serde_json::Value {
    if let Ok(i) = v.parse::<i64>() {
        return i.into();
    }
    match v {
        "true" => true.into(),
        "false" => false.into(),
        "" => serde_json::Value::Null,
        _ => v.into(),
    }
}

pub fn pretty_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out += &line(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_and_formats() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutDir::new(dir.path()).unwrap();
        let header = vec!["m".to_string(), "e=-1".to_string()];
        let rows = vec![vec!["1".to_string(), "0".to_string()]];
        out.write_table("grid", Format::Csv, &header, &rows).unwrap();
        out.write_table("grid", Format::Json, &header, &rows).unwrap();
        out.write_table("grid", Format::Pretty, &header, &rows).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("grid.csv")).unwrap(), "m,e=-1\n1,0\n");
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("grid.json")).unwrap()).unwrap();
        assert_eq!(json[0]["e=-1"], 0);
        assert_eq!(out.written.len(), 3);
        // no leftover temporaries
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
    }
}
