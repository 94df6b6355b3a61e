use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::Format;

/// Rows for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// field,value rows from a JSON tree, with dotted paths.
    pub fn flatten(v: &Value) -> Self {
        let mut t = Table::new(&["field", "value"]);
        flatten_into(v, String::new(), &mut t);
        t
    }
}

fn flatten_into(v: &Value, path: String, t: &mut Table) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten_into(x, join(k), t);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten_into(x, join(&i.to_string()), t);
            }
        }
        Value::Array(xs) => t.push(vec![path, xs.iter().map(scalar).collect::<Vec<_>>().join(";")]),
        x => t.push(vec![path, scalar(x)]),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        x => x.to_string(),
    }
}

/// Result of a command: the JSON document, an optional table for CSV and
/// whether every identity it checked held.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: Value,
    pub table: Option<Table>,
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn new<T: Serialize>(v: &T) -> Self {
        Outcome {
            value: serde_json::to_value(v).expect("serializable report"),
            table: None,
            ok: true,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn with_ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.value)?;
                writeln!(out)
            }
            Format::Csv => {
                let flat;
                let t = match &self.table {
                    Some(t) => t,
                    None => {
                        flat = Table::flatten(&self.value);
                        &flat
                    }
                };
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&t.header)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_paths() {
        let v = serde_json::json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"x": "y"}]});
        let t = Table::flatten(&v);
        assert_eq!(
            t.rows,
            vec![
                vec!["a".to_string(), "1".to_string()],
                vec!["b.c".to_string(), "1;2".to_string()],
                vec!["d.0.x".to_string(), "y".to_string()],
            ]
        );
    }

    #[test]
    fn csv_quotes_matrices() {
        let mut t = Table::new(&["b"]);
        t.push(vec!["[[2,1],[1,2]]".into()]);
        let o = Outcome::new(&0).with_table(t);
        let mut buf = Vec::new();
        o.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "b\n\"[[2,1],[1,2]]\"\n");
    }
}
