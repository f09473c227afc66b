//! Rendering of command payloads as JSON or CSV.

use finpart::C64;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Compact when `indent` is `None`.
    Json {
        indent: Option<usize>,
    },
    Csv,
}

impl Default for Format {
    fn default() -> Self {
        Format::Json { indent: None }
    }
}

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// Renders `payload` followed by a newline.
pub fn render(payload: &Value, format: Format) -> String {
    let mut s = match format {
        Format::Json { indent: None } => payload.to_string(),
        Format::Json { indent: Some(n) } => {
            let pad = vec![b' '; n];
            let mut buf = Vec::new();
            let mut ser =
                serde_json::Serializer::with_formatter(&mut buf, serde_json::ser::PrettyFormatter::with_indent(&pad));
            payload.serialize(&mut ser).expect("JSON values serialize");
            String::from_utf8(buf).expect("serde_json emits UTF-8")
        }
        Format::Csv => csv_table(payload),
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// One row per element of a top-level `cases` array, otherwise a single
/// row of dotted keys. Columns keep first-seen order; object keys arrive sorted.
fn csv_table(payload: &Value) -> String {
    let rows: Vec<Vec<(String, String)>> = match payload.get("cases").and_then(Value::as_array) {
        Some(cases) => cases
            .iter()
            .map(|c| {
                let mut r = Vec::new();
                flatten("", c, &mut r);
                r
            })
            .collect(),
        None => {
            let mut r = Vec::new();
            flatten("", payload, &mut r);
            vec![r]
        }
    };
    let mut columns: Vec<String> = Vec::new();
    for r in &rows {
        for (k, _) in r {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns).expect("in-memory write");
    for r in rows {
        let m: Map<String, Value> = r.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
        let record = columns.iter().map(|c| m.get(c).and_then(Value::as_str).unwrap_or(""));
        w.write_record(record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of UTF-8 fields")
}
