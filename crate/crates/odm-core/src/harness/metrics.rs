//! Metrics emission: a plain CSV trace (header row, \n line endings) and a
//! summary JSON carrying final values plus the resolved-config hash.
//! Formatting is deterministic so reruns are byte-identical.

use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

/// One metrics table: fixed column names, rows of pre-formatted cells.
pub struct MetricsTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl MetricsTable {
    pub fn new(header: &[&str]) -> Self {
        MetricsTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "row does not match header");
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        write_file(path, out.as_bytes())
    }
}

/// Shortest-round-trip float formatting (Rust's Display), deterministic.
pub fn fmt_f64(v: f64) -> String {
    format!("{}", v)
}

pub fn write_summary(path: &Path, summary: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::Config(format!("summary serialization: {}", e)))?;
    write_file(path, text.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    f.write_all(bytes).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_newline_endings() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        let mut t = MetricsTable::new(&["update", "loss"]);
        t.push(vec!["0".into(), fmt_f64(0.5)]);
        t.push(vec!["1".into(), fmt_f64(0.25)]);
        t.write_csv(&p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "update,loss\n0,0.5\n1,0.25\n");
    }

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        MetricsTable::new(&["a", "b", "c"]).write_csv(&p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b,c\n");
    }

    #[test]
    fn summary_parses_and_echoes_the_seed() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("summary.json");
        write_summary(&p, &serde_json::json!({"seed": 42, "final": 0.125})).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(parsed["seed"], 42);
    }
}
