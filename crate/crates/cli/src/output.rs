use std::io::{self, Write};
use std::time::Duration;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Rows shared by the table and CSV renderings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn is_empty(&self) -> bool {
        self.header.is_empty()
    }
}

/// Result of one subcommand in all three renderings.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    /// `key: value` lines shown above the table.
    pub summary: Vec<(String, String)>,
    pub table: Table,
    /// CSV layout when it differs from the table layout.
    pub csv: Option<Table>,
    pub timing: Option<Duration>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            summary: Vec::new(),
            table: Table::default(),
            csv: None,
            timing: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    /// Adds a result that also appears in the summary.
    pub fn result(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let text = value.to_string();
        self.summary.push((key.to_string(), text.clone()));
        self.results.insert(key.to_string(), Value::String(text));
        self
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.summary.push((key.to_string(), value.to_string()));
        self.results.insert(key.to_string(), Value::Bool(value));
        self
    }

    pub fn result_value(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("results".into(), Value::Object(self.results.clone()));
        if let Some(t) = self.timing {
            root.insert(
                "timing_ms".into(),
                Value::String(format!("{:.3}", t.as_secs_f64() * 1e3)),
            );
        }
        Value::Object(root)
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let text =
                    serde_json::to_string_pretty(&self.to_json()).map_err(io::Error::other)?;
                writeln!(out, "{text}")
            }
            Format::Csv => self.render_csv(out),
            Format::Table => self.render_table(out),
        }
    }

    fn render_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let table = self.csv.as_ref().unwrap_or(&self.table);
        if table.is_empty() {
            w.write_record(["field", "value"])?;
            for (k, v) in &self.summary {
                w.write_record([k, v])?;
            }
        } else {
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
        }
        w.flush()?;
        if let Some(t) = self.timing {
            eprintln!("time: {:.3} ms", t.as_secs_f64() * 1e3);
        }
        Ok(())
    }

    fn render_table(&self, out: &mut dyn Write) -> io::Result<()> {
        let key_width = self
            .summary
            .iter()
            .map(|(k, _)| k.chars().count())
            .max()
            .unwrap_or(0);
        for (k, v) in &self.summary {
            writeln!(out, "{k:<key_width$}  {v}")?;
        }
        if !self.table.is_empty() {
            if !self.summary.is_empty() {
                writeln!(out)?;
            }
            let cols = self.table.header.len();
            let mut widths: Vec<usize> = self
                .table
                .header
                .iter()
                .map(|h| h.chars().count())
                .collect();
            for row in &self.table.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                (0..cols)
                    .map(|i| {
                        let cell = cells.get(i).map_or("", String::as_str);
                        format!("{cell:>width$}", width = widths[i])
                    })
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&self.table.header).trim_end())?;
            for row in &self.table.rows {
                writeln!(out, "{}", line(row).trim_end())?;
            }
        }
        if let Some(t) = self.timing {
            writeln!(out, "time: {:.3} ms", t.as_secs_f64() * 1e3)?;
        }
        Ok(())
    }
}
