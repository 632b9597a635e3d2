use std::io::Write;

use serde_json::{Map, Number, Value};

/// Scalar cell of a report.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Reals with 17 significant digits, so they round-trip exactly.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_owned();
    }
    let s = format!("{v:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Real(v) if v.is_finite() => format_real(*v),
            Cell::Real(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(v) if v.is_finite() => {
                Value::Number(format_real(*v).parse::<Number>().expect("formatted real is valid JSON"))
            }
            Cell::Real(_) => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

pub type Record = Vec<(&'static str, Cell)>;

/// A flat result: scalar fields plus an optional table of records.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub fields: Record,
    pub rows_key: &'static str,
    pub rows: Vec<Record>,
}

impl Report {
    pub fn scalar(fields: Record) -> Self {
        Self {
            fields,
            ..Self::default()
        }
    }

    pub fn table(fields: Record, rows_key: &'static str, rows: Vec<Record>) -> Self {
        Self { fields, rows_key, rows }
    }

    fn object(record: &Record) -> Value {
        Value::Object(record.iter().map(|(k, v)| ((*k).to_owned(), v.json())).collect::<Map<_, _>>())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut obj = match Self::object(&self.fields) {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        if !self.rows_key.is_empty() {
            obj.insert(self.rows_key.to_owned(), Value::Array(self.rows.iter().map(Self::object).collect()));
        }
        serde_json::to_writer(&mut *out, &Value::Object(obj))?;
        out.write_all(b"\n")
    }

    /// The table when there is one, otherwise the scalar fields as a
    /// single row; CRLF line endings.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        let rows: Vec<&Record> = if self.rows_key.is_empty() { vec![&self.fields] } else { self.rows.iter().collect() };
        let header: Vec<&str> = match rows.first() {
            Some(r) => r.iter().map(|(k, _)| *k).collect(),
            None => Vec::new(),
        };
        if !header.is_empty() {
            w.write_record(&header)?;
        }
        for r in rows {
            w.write_record(r.iter().map(|(_, v)| v.text()))?;
        }
        w.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keeps_order_and_digits() {
        let r = Report::scalar(vec![("x", 0.25.into()), ("K", 1.2896668993309640.into()), ("ok", true.into())]);
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "{\"x\":2.5000000000000000e-1,\"K\":1.2896668993309639e+0,\"ok\":true}\n");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["K"].as_f64(), Some(1.289666899330964));
    }

    #[test]
    fn csv_uses_crlf() {
        let rows = vec![vec![("a", 1.0.into()), ("b", "x,y".into())], vec![("a", 0.0.into()), ("b", "z".into())]];
        let r = Report::table(vec![], "rows", rows);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\r\n1.0000000000000000e+0,\"x,y\"\r\n0.0,z\r\n");
    }

    #[test]
    fn real_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 15.723161934385155, f64::MAX] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }
}
