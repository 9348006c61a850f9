//! Experiment reports: one table per run, written as CSV or JSON.
//!
//! Every table ends with the same comparison columns:
//!
//! | column       | meaning                                                    |
//! |--------------|------------------------------------------------------------|
//! | `reference`  | value the estimate is compared with                        |
//! | `ratio`      | `estimate / reference` (empty when the reference is 0)     |
//! | `provenance` | `closed_form`, `oracle` or `trend`                         |
//! | `tolerance`  | numeric tolerance of the comparison                        |
//! | `criterion`  | `rel`, `abs`, `le`, `ge` or `flag` (see [`Criterion`])     |
//! | `pass`       | `true`/`false` for pass-flagged rows, empty otherwise      |
//! | `note`       | free text; error rows put `error[<code>]: <message>` here  |

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use serde::ser::{Serialize, Serializer};
use serde_json::json;

use crate::config::Format;

pub const TAIL: [&str; 7] = ["reference", "ratio", "provenance", "tolerance", "criterion", "pass", "note"];

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Empty,
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Empty => Ok(()),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:e}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Empty => s.serialize_none(),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(v) => s.serialize_str(&format!("{v:e}")),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Oracle,
    Trend,
}

impl Provenance {
    fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Oracle => "oracle",
            Provenance::Trend => "trend",
        }
    }
}

/// How `pass` is decided from estimate `e`, reference `r` and tolerance `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// `|e − r| ≤ τ|r|`.
    Rel,
    /// `|e − r| ≤ τ`.
    Abs,
    /// `e ≤ r + τ`.
    Le,
    /// `e ≥ r − τ`.
    Ge,
    /// A qualitative check described in the note; `pass` is set directly.
    Flag,
}

impl Criterion {
    fn as_str(self) -> &'static str {
        match self {
            Criterion::Rel => "rel",
            Criterion::Abs => "abs",
            Criterion::Le => "le",
            Criterion::Ge => "ge",
            Criterion::Flag => "flag",
        }
    }

    pub fn holds(self, e: f64, r: f64, tol: f64) -> bool {
        match self {
            Criterion::Rel => (e - r).abs() <= tol * r.abs(),
            Criterion::Abs => (e - r).abs() <= tol,
            Criterion::Le => e <= r + tol,
            Criterion::Ge => e >= r - tol,
            Criterion::Flag => false,
        }
    }
}

/// The comparison part of a row.
#[derive(Clone, Debug, Default)]
pub struct Compare {
    reference: Option<(f64, Provenance)>,
    test: Option<(f64, Criterion)>,
    flag: Option<(bool, Provenance)>,
    note: String,
}

impl Compare {
    pub fn none() -> Self {
        Self::default()
    }

    /// Reference value shown for information, without a pass flag.
    pub fn reference(r: f64, p: Provenance) -> Self {
        Self { reference: Some((r, p)), ..Self::default() }
    }

    /// Pass-flagged comparison.
    pub fn test(r: f64, p: Provenance, tol: f64, c: Criterion) -> Self {
        Self { reference: Some((r, p)), test: Some((tol, c)), ..Self::default() }
    }

    /// Pass-flagged qualitative check.
    pub fn flag(pass: bool, p: Provenance) -> Self {
        Self { flag: Some((pass, p)), ..Self::default() }
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.note = s.into();
        self
    }

    fn cells(&self, estimate: Option<f64>) -> Vec<Cell> {
        let mut out = vec![Cell::Empty; TAIL.len()];
        if let Some((r, p)) = self.reference {
            out[0] = r.into();
            if let Some(e) = estimate.filter(|_| r != 0.0) {
                out[1] = (e / r).into();
            }
            out[2] = p.as_str().into();
        }
        if let (Some((tol, c)), Some((r, _))) = (self.test, self.reference) {
            out[3] = tol.into();
            out[4] = c.as_str().into();
            out[5] = Cell::Bool(estimate.is_some_and(|e| c.holds(e, r, tol)));
        }
        if let Some((pass, p)) = self.flag {
            out[2] = p.as_str().into();
            out[4] = Criterion::Flag.as_str().into();
            out[5] = Cell::Bool(pass);
        }
        out[6] = self.note.clone().into();
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Index of the column holding the compared estimate.
    estimate_col: usize,
}

impl Table {
    /// `lead` are the command-specific columns; `estimate` names the one the
    /// comparison columns refer to.
    pub fn new(lead: &[&'static str], estimate: &str) -> Self {
        let estimate_col = lead.iter().position(|c| *c == estimate).expect("estimate column");
        let mut columns = lead.to_vec();
        columns.extend(TAIL);
        Self { columns, rows: Vec::new(), estimate_col }
    }

    pub fn push(&mut self, lead: Vec<Cell>, cmp: Compare) {
        assert_eq!(lead.len() + TAIL.len(), self.columns.len());
        let est = match lead[self.estimate_col] {
            Cell::Float(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        };
        let mut row = lead;
        row.extend(cmp.cells(est));
        self.rows.push(row);
    }

    /// A failed row carrying a machine-readable error in the note column.
    pub fn push_error(&mut self, experiment: &str, code: &str, msg: &str) {
        let lead = self.columns.len() - TAIL.len();
        let mut row = vec![Cell::Empty; self.columns.len()];
        row[0] = experiment.into();
        row[lead + 5] = Cell::Bool(false);
        row[lead + 6] = format!("error[{code}]: {msg}").into();
        self.rows.push(row);
    }

    fn pass_col(&self) -> usize {
        self.columns.len() - 2
    }

    /// False iff some pass-flagged row failed.
    pub fn passed(&self) -> bool {
        let c = self.pass_col();
        self.rows.iter().all(|r| r[c] != Cell::Bool(false))
    }

    pub fn has_error(&self) -> bool {
        let c = self.columns.len() - 1;
        self.rows.iter().any(|r| matches!(&r[c], Cell::Text(t) if t.starts_with("error[")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub timestamp: u64,
    pub table: Table,
}

impl Report {
    pub fn to_csv(&self) -> Vec<u8> {
        let mut buf = format!(
            "# affsurf {} command={} seed={} timestamp={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.seed,
            self.timestamp
        )
        .into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.table.columns).expect("write to memory");
            for row in &self.table.rows {
                w.write_record(row.iter().map(|c| c.to_string())).expect("write to memory");
            }
            w.flush().expect("write to memory");
        }
        buf
    }

    pub fn to_json(&self) -> Vec<u8> {
        let v = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "columns": self.table.columns,
            "rows": self.table.rows,
        });
        let mut out = serde_json::to_vec_pretty(&v).expect("serializable");
        out.push(b'\n');
        out
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes to `out` through a temporary file in the same directory, or
    /// to standard output.
    pub fn write(&self, format: Format, out: Option<&Path>) -> io::Result<()> {
        let bytes = self.render(format);
        match out {
            None => {
                let mut s = io::stdout().lock();
                s.write_all(&bytes)?;
                s.flush()
            }
            Some(path) => {
                let dir = match path.parent() {
                    Some(d) if !d.as_os_str().is_empty() => d,
                    _ => Path::new("."),
                };
                let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
                tmp.write_all(&bytes)?;
                tmp.as_file().sync_all()?;
                tmp.persist(path).map_err(|e| e.error)?;
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flags() {
        let mut t = Table::new(&["experiment", "estimate"], "estimate");
        t.push(vec!["a".into(), 1.0.into()], Compare::test(1.0 + 1e-9, Provenance::ClosedForm, 1e-8, Criterion::Rel));
        t.push(vec!["b".into(), 2.0.into()], Compare::reference(1.0, Provenance::Trend));
        assert!(t.passed());
        assert_eq!(t.rows[1][3], Cell::Float(2.0));
        t.push(vec!["c".into(), 2.0.into()], Compare::test(1.0, Provenance::Oracle, 0.5, Criterion::Le));
        assert!(!t.passed());
    }

    #[test]
    fn error_rows_fail() {
        let mut t = Table::new(&["experiment", "estimate"], "estimate");
        t.push_error("asa", "numeric.Infeasible", "boom");
        assert!(!t.passed() && t.has_error());
    }
}
