//! CSV tables with a `#` header block.

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn render(self) -> String {
        match self {
            Cell::Num(x) if x != 0.0 && x.is_finite() && !(1e-4..1e15).contains(&x.abs()) => format!("{x:e}"),
            Cell::Num(x) => format!("{x}"),
            Cell::Int(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Drops the columns whose cells are all empty.
    pub fn without_empty_columns(self) -> Self {
        let keep: Vec<bool> = (0..self.columns.len())
            .map(|c| self.rows.iter().any(|r| r[c] != Cell::Empty))
            .collect();
        let pick = |v: Vec<Cell>| v.into_iter().zip(&keep).filter(|(_, k)| **k).map(|(c, _)| c).collect();
        Table {
            columns: self
                .columns
                .into_iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(c, _)| c)
                .collect(),
            rows: self.rows.into_iter().map(pick).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|c| c.render()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// `#` lines recording version, command, configuration hash, warnings and
/// notes.
pub fn header(command: &str, cfg: &RunConfig, warnings: &[String], notes: &[String]) -> String {
    let mut s = format!(
        "# nlosc {}\n# command: {command}\n# config-sha256: {}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.hash()
    );
    for w in warnings {
        s.push_str(&format!("# warning: {w}\n"));
    }
    for n in notes {
        s.push_str(&format!("# note: {n}\n"));
    }
    s
}
