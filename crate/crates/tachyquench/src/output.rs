//! Tabular experiment output with deterministic CSV and JSON encodings.

use std::io::Write;

/// One table cell: numeric, text, or empty (e.g. beta_eff of an
/// unstable mode).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// A column-labelled table of results.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ExperimentResult {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a header row; numbers carry 17 significant digits.
    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format_sig17(*v),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    /// JSON array of records keyed by column name; non-finite numbers
    /// become null.
    pub fn write_json(&self, w: &mut impl Write) -> std::io::Result<()> {
        let records: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| {
                        let value = match cell {
                            Cell::Num(v) => serde_json::Number::from_f64(*v)
                                .map(serde_json::Value::Number)
                                .unwrap_or(serde_json::Value::Null),
                            Cell::Text(s) => serde_json::Value::String(s.clone()),
                            Cell::Empty => serde_json::Value::Null,
                        };
                        (name.clone(), value)
                    })
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *w, &records).map_err(std::io::Error::other)?;
        writeln!(w)
    }
}

/// 17 significant digits, scientific notation.
pub fn format_sig17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut table = ExperimentResult::new(&["r", "t", "value"]);
        table.push(vec![Cell::Num(1.0), Cell::Num(0.5), Cell::Num(0.1 + 0.2)]);
        table.push(vec![Cell::Num(2.0), Cell::Empty, Cell::Text("stable".into())]);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "r,t,value");
        assert!(lines[1].starts_with("1.0000000000000000e0,5.0000000000000000e-1,"));
        assert!(lines[1].contains("3.0000000000000004e-1"), "{text}");
        assert_eq!(lines[2], "2.0000000000000000e0,,stable");
    }

    #[test]
    fn json_records() {
        let mut table = ExperimentResult::new(&["a", "b"]);
        table.push(vec![Cell::Num(2.0), Cell::Num(f64::INFINITY)]);
        let mut buf = Vec::new();
        table.write_json(&mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(parsed[0]["a"], 2.0);
        assert!(parsed[0]["b"].is_null());
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_sig17(0.25), "2.5000000000000000e-1");
        assert_eq!(format_sig17(1.0 / 3.0).len(), "3.3333333333333331e-1".len());
    }
}
