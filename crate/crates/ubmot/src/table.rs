//! Flat result tables shared by the sweep operations and the CLI.

use serde::Serialize;

/// One rectangular sweep result: named columns, row-major values, and a
/// method tag plus error estimate per row.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub methods: Vec<String>,
    pub err_estimates: Vec<f64>,
}

impl SweepTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            methods: Vec::new(),
            err_estimates: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>, method: &str, err: f64) {
        assert_eq!(row.len(), self.columns.len(), "ragged sweep row");
        self.rows.push(row);
        self.methods.push(method.to_string());
        self.err_estimates.push(err);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column index by name.
    pub fn col(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}
