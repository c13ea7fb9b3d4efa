//! Text, CSV and JSON rendering of tabular results.
//!
//! Every cell carries both its printed form and its JSON value, so the three
//! formats always agree and the text/CSV output is fixed-precision.

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Cell {
    text: String,
    json: Value,
}

impl Cell {
    pub fn float(value: f64, decimals: usize) -> Self {
        Self {
            text: format!("{value:.decimals$}"),
            json: Value::from(value),
        }
    }

    pub fn int(value: u64) -> Self {
        Self {
            text: value.to_string(),
            json: Value::from(value),
        }
    }

    pub fn sci(value: f64) -> Self {
        Self {
            text: format!("{value:.3e}"),
            json: Value::from(value),
        }
    }
}

/// Lamb-Dicke values print with two decimals when they sit on a 0.01 grid
/// and with five otherwise.
pub fn eta_cell(eta: f64) -> Cell {
    let on_grid = ((eta * 100.0).round() - eta * 100.0).abs() < 1e-9;
    Cell::float(eta, if on_grid { 2 } else { 5 })
}

#[derive(Debug, Clone)]
pub struct Row {
    cells: Vec<Cell>,
    error: Option<String>,
}

impl Row {
    pub fn ok(cells: Vec<Cell>) -> Self {
        Self { cells, error: None }
    }

    /// A row that failed after its leading cells (usually `eta`) were known.
    pub fn failed(lead: Vec<Cell>, error: impl ToString) -> Self {
        Self {
            cells: lead,
            error: Some(error.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// Extra text appended after the table in text mode.
    pub text_suffix: String,
    /// Extra top-level JSON members.
    pub json_extra: Map<String, Value>,
}

impl Report {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
            text_suffix: String::new(),
            json_extra: Map::new(),
        }
    }

    pub fn render(&self, format: Format, config: Value) -> Result<String, CliError> {
        match format {
            Format::Text => Ok(self.text()),
            Format::Csv => self.csv(),
            Format::Json => Ok(self.json(config)),
        }
    }

    fn text(&self) -> String {
        if self.rows.is_empty() && self.text_suffix.is_empty() {
            return String::new();
        }
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(&row.cells) {
                *w = (*w).max(cell.text.len());
            }
        }
        let mut out = String::new();
        if !self.rows.is_empty() {
            let line: Vec<String> = self
                .headers
                .iter()
                .zip(&widths)
                .map(|(h, w)| format!("{h:>w$}"))
                .collect();
            out.push_str(&line.join("  "));
            out.push('\n');
            for row in &self.rows {
                let mut line: Vec<String> = row
                    .cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{:>w$}", c.text))
                    .collect();
                if let Some(err) = &row.error {
                    line.push(format!("error: {err}"));
                }
                out.push_str(&line.join("  "));
                out.push('\n');
            }
        }
        out.push_str(&self.text_suffix);
        out
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.headers)?;
        for row in &self.rows {
            let mut record: Vec<&str> = row.cells.iter().map(|c| c.text.as_str()).collect();
            record.resize(self.headers.len(), "");
            writer.write_record(&record)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 strings"))
    }

    fn json(&self, config: Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (i, header) in self.headers.iter().enumerate() {
                    let value = row.cells.get(i).map_or(Value::Null, |c| c.json.clone());
                    obj.insert((*header).to_string(), value);
                }
                if let Some(err) = &row.error {
                    obj.insert("error".into(), Value::from(err.as_str()));
                }
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("config".into(), config);
        top.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.json_extra {
            top.insert(k.clone(), v.clone());
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(top))
            .expect("JSON values built from finite numbers and strings");
        text.push('\n');
        text
    }
}
