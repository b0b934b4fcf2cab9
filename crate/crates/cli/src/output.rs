//! CSV and JSON emitters. Every record carries `schema_version`; reals are
//! written with 17 significant digits.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use sl2_geodesics::GroupElement;

pub const SCHEMA_VERSION: u32 = 1;

/// Emitted matrices must satisfy `|det − 1| ≤ DET_CHECK·max(1, ‖g‖∞)²`.
pub const DET_CHECK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Real(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_owned())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Real)
    }
}

/// Rows sharing one set of columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

#[derive(Debug)]
pub struct DetCheckFailed {
    pub det: f64,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema_version".into(), SCHEMA_VERSION.into());
                obj.insert("command".into(), self.command.into());
                let rows = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut o = Map::new();
                        for (c, f) in self.columns.iter().zip(r) {
                            o.insert((*c).into(), field_value(f));
                        }
                        Value::Object(o)
                    })
                    .collect();
                obj.insert("rows".into(), Value::Array(rows));
                let mut out = render_json(&Value::Object(obj));
                out.push('\n');
                out
            }
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("schema_version");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{SCHEMA_VERSION}");
            for f in row {
                out.push(',');
                out.push_str(&csv_field(f));
            }
            out.push('\n');
        }
        out
    }
}

/// Entries of `g`, row-major, after re-checking `det g = 1`.
pub fn matrix_fields(g: &GroupElement) -> Result<[Field; 4], DetCheckFailed> {
    let det = g.det();
    let scale = g.sup_norm().max(1.0);
    if !((det - 1.0).abs() <= DET_CHECK * scale * scale) {
        return Err(DetCheckFailed { det });
    }
    Ok(g.entries().map(Field::Real))
}

pub fn real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn csv_field(f: &Field) -> String {
    match f {
        Field::Real(v) => real(*v),
        Field::Int(v) => v.to_string(),
        Field::Bool(v) => v.to_string(),
        Field::Empty => String::new(),
        Field::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Field::Text(s) => s.clone(),
    }
}

fn field_value(f: &Field) -> Value {
    match f {
        Field::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Field::Int(v) => (*v).into(),
        Field::Text(s) => s.clone().into(),
        Field::Bool(v) => (*v).into(),
        Field::Empty => Value::Null,
    }
}

/// Compact JSON with reals at 17 significant digits.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, &mut out);
    out
}

fn write_json(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&real(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_json(item, out);
            }
            out.push('}');
        }
    }
}
