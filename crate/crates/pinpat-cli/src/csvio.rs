//! CSV emission and ingestion. UTF-8, comma separated, one header row,
//! `.` decimal point, `\n` line ends. Numbers are written in the shortest
//! form that parses back to the identical bits, so a write/read cycle is
//! lossless.

use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| CliError::Config(format!("csv flush failed: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        crate::report::write_artifact(path, &self.to_bytes()?)
    }

    pub fn read(path: &Path) -> Result<Table, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Table::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Table, CliError> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
        let header = r
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            rows.push(rec.iter().map(|s| s.to_string()).collect());
        }
        Ok(Table { header, rows })
    }

    /// Column index by name, for readers that do not trust positions.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Config(format!("csv error: {e}"))
}

/// Shortest decimal form of `v` that round-trips to the same f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_read_round_trip_is_exact() {
        let mut t = Table::new(&["n", "value", "note"]);
        t.push(vec!["5".into(), fmt_f64(0.1 + 0.2), "plain".into()]);
        t.push(vec!["11".into(), fmt_f64(std::f64::consts::TAU / 101.0), String::new()]);
        let bytes = t.to_bytes().unwrap();
        let back = Table::from_bytes(&bytes).unwrap();
        assert_eq!(t, back);
        let v: f64 = back.rows[1][1].parse().unwrap();
        assert_eq!(v.to_bits(), (std::f64::consts::TAU / 101.0).to_bits());
    }

    #[test]
    fn format_is_comma_separated_with_header_and_lf() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2.5".into()]);
        let text = String::from_utf8(t.to_bytes().unwrap()).unwrap();
        assert_eq!(text, "a,b\n1,2.5\n");
    }

    #[test]
    fn column_lookup() {
        let t = Table::new(&["x", "y"]);
        assert_eq!(t.column("y"), Some(1));
        assert_eq!(t.column("z"), None);
    }
}
