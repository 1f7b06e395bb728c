//! Result tables and their CSV / JSON encodings.
//!
//! CSV: optional `# metadata: {json}` comment line, then a header row and
//! comma-separated rows with LF endings; numbers carry 17 significant
//! digits. JSON: one object `{metadata, columns, rows}`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

const METADATA_PREFIX: &str = "# metadata: ";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// Failed or non-finite value.
    Missing,
}

impl Cell {
    pub fn num(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Missing
        }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn from_csv_field(field: &str) -> Self {
        if field.is_empty() {
            Cell::Missing
        } else {
            field
                .parse::<f64>()
                .map(Cell::Num)
                .unwrap_or_else(|_| Cell::Text(field.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            metadata: Map::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "ragged row");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn numeric_column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        self.column(name).map(|c| c.into_iter().map(Cell::as_f64).collect())
    }

    pub fn is_rectangular(&self) -> bool {
        self.rows.iter().all(|r| r.len() == self.columns.len())
    }

    /// Header and rows only, without metadata.
    pub fn csv_data(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Table(e.to_string());
        w.write_record(&self.columns).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field)).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Table(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Table(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        if !self.metadata.is_empty() {
            out.push_str(METADATA_PREFIX);
            out.push_str(&serde_json::to_string(&self.metadata).map_err(|e| CliError::Table(e.to_string()))?);
            out.push('\n');
        }
        out.push_str(&self.csv_data()?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut metadata = Map::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            if let Some(json) = line.strip_prefix(METADATA_PREFIX) {
                metadata = serde_json::from_str(json).map_err(|e| CliError::Table(e.to_string()))?;
            }
        }
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let err = |e: csv::Error| CliError::Table(e.to_string());
        let columns = r.headers().map_err(err)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(Cell::from_csv_field).collect()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        Ok(ResultTable {
            metadata,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Table(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Table(e.to_string()))
    }

    pub fn encode(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn decode(text: &str, format: Format) -> Result<Self, CliError> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<(), CliError> {
        let text = self.encode(format)?;
        let mut f = std::fs::File::create(path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
        f.write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }
}
