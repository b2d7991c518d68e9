//! Column tables and their CSV encoding.

use std::fmt::Write as _;

/// A rectangular table of floats with named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    /// Panics if the row width does not match the header.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// `(first column, named column)` pairs for plotting.
    pub fn series(&self, name: &str) -> Vec<(f64, f64)> {
        match self.column_index(name) {
            Some(idx) => self.rows.iter().map(|r| (r[0], r[idx])).collect(),
            None => Vec::new(),
        }
    }

    /// Header row plus one line per row, every value with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// `<name>_re`, `<name>_im`.
pub fn complex_columns(name: &str) -> [String; 2] {
    [format!("{name}_re"), format!("{name}_im")]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats_exactly() {
        let mut t = Table::new(vec!["t".into(), "v".into()]);
        let v = 0.1 + 0.2;
        t.push(vec![0.0, v]);
        t.push(vec![1.0, -1.0 / 3.0]);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,v"));
        let parsed: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(parsed, vec![0.0, v]);
        assert_eq!(t.column("v").unwrap(), vec![v, -1.0 / 3.0]);
        assert_eq!(t.series("v")[1], (1.0, -1.0 / 3.0));
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn rejects_ragged_rows() {
        Table::new(vec!["a".into()]).push(vec![1.0, 2.0]);
    }
}
