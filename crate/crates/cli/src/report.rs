//! Ordered report trees rendered as JSON or as `field,value` CSV.
//!
//! Floats are printed with 17 significant digits so that identical runs
//! produce identical bytes. Non-finite values become the strings `"inf"`,
//! `"-inf"` and `"nan"`.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    List(Vec<Value>),
    Obj(Report),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<Report> for Value {
    fn from(r: Report) -> Self {
        Value::Obj(r)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(o: Option<T>) -> Self {
        o.map_or(Value::Null, Into::into)
    }
}

impl From<&[f64]> for Value {
    fn from(xs: &[f64]) -> Self {
        Value::List(xs.iter().map(|&x| Value::Num(x)).collect())
    }
}

impl From<Vec<Report>> for Value {
    fn from(rs: Vec<Report>) -> Self {
        Value::List(rs.into_iter().map(Value::Obj).collect())
    }
}

/// Object with fields in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_obj(&mut out, self);
        out.push('\n');
        out
    }

    /// One `path,value` line per leaf; nested keys are joined with dots and
    /// list entries are addressed by index.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,value\n");
        let mut rows = Vec::new();
        flatten("", &Value::Obj(self.clone()), &mut rows);
        for (path, value) in rows {
            let _ = writeln!(out, "{},{}", csv_cell(&path), csv_cell(&value));
        }
        out
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn write_obj(out: &mut String, r: &Report) {
    out.push('{');
    for (i, (k, v)) in r.fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&serde_json::to_string(k).expect("string encodes"));
        out.push(':');
        write_value(out, v);
    }
    out.push('}');
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Value::Num(x) if x.is_finite() => out.push_str(&format_float(*x)),
        Value::Num(x) => {
            let _ = write!(out, "\"{}\"", format_float(*x));
        }
        Value::Str(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::List(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Obj(r) => write_obj(out, r),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Obj(r) => {
            for (k, v) in &r.fields {
                flatten(&join(k), v, rows);
            }
        }
        Value::List(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), item, rows);
            }
        }
        Value::Null => rows.push((prefix.to_string(), String::new())),
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Int(n) => rows.push((prefix.to_string(), n.to_string())),
        Value::Num(x) => rows.push((prefix.to_string(), format_float(*x))),
        Value::Str(s) => rows.push((prefix.to_string(), s.clone())),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
