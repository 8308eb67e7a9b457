//! Deterministic CSV output: header first, LF line endings, every value in
//! 17-significant-digit scientific notation so that files round-trip and
//! compare byte-for-byte.

use std::path::Path;

use crate::CliError;

/// A named-column numeric table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn render(&self) -> Result<String, CliError> {
        if self.rows.is_empty() {
            return Err(CliError::Output("refusing to write an empty table".into()));
        }
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            if row.len() != self.columns.len() {
                return Err(CliError::Output(format!(
                    "row has {} fields, header has {}",
                    row.len(),
                    self.columns.len()
                )));
            }
            let fields: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `table` to `path`. An empty table is an error and no file is created.
pub fn emit_csv(table: &Table, path: &Path) -> Result<(), CliError> {
    let text = table.render()?;
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}
