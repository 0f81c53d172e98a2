//! Tabular results and their CSV/JSON serialization.

use crate::config::{Format, RunConfig};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// How the run ended, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    InvariantFailure,
    ConvergenceFailure,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::InvariantFailure => 1,
            Status::ConvergenceFailure => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalar results that are not per-row.
    pub summary: Map<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Map::new(),
            status: Status::Ok,
        }
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn summarize_num(&mut self, key: &str, value: f64, digits: usize) {
        self.summary
            .insert(key.to_string(), json_number(value, digits));
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Csv => self.to_csv(cfg),
            Format::Json => self.to_json(cfg),
        }
    }

    fn to_csv(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        out.push_str(&format!("# bisphere {}\n", bisphere::VERSION));
        out.push_str(&format!(
            "# config: {}\n",
            serde_json::to_string(cfg).expect("config serializes")
        ));
        if !self.summary.is_empty() {
            out.push_str(&format!(
                "# summary: {}\n",
                Value::Object(self.summary.clone())
            ));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| csv_cell(c, cfg.digits)))
                .expect("write to memory");
        }
        let body =
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8");
        out.push_str(&body);
        out
    }

    fn to_json(&self, cfg: &RunConfig) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            version: &'a str,
            config: &'a RunConfig,
            columns: &'a [String],
            rows: Vec<Vec<Value>>,
            summary: &'a Map<String, Value>,
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| json_cell(c, cfg.digits)).collect())
            .collect();
        let doc = Doc {
            version: bisphere::VERSION,
            config: cfg,
            columns: &self.columns,
            rows,
            summary: &self.summary,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `v` rounded to `digits` significant digits, in `%g` style.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn csv_cell(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Num(v) => fmt_sig(*v, digits),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

pub fn json_number(v: f64, digits: usize) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{:.*e}", digits - 1, v)
        .parse()
        .expect("round trip");
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

fn json_cell(c: &Cell, digits: usize) -> Value {
    match c {
        Cell::Num(v) => json_number(*v, digits),
        Cell::Int(v) => Value::from(*v),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
    }
}
