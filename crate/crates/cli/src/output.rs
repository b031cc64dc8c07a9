use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Aligned text, one row per result.
    Table,
}

pub fn json<T: Serialize>(v: &T, pretty: bool) -> Result<String, Failure> {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    s.map(|mut s| {
        s.push('\n');
        s
    })
    .map_err(|e| Failure { code: 2, message: format!("serialization failed: {e}") })
}

/// Compact text for a JSON value: strings bare, everything else as JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// `key: value` lines for the top-level fields of an object.
pub fn key_values<T: Serialize>(v: &T) -> Result<String, Failure> {
    let v = serde_json::to_value(v).map_err(|e| Failure { code: 2, message: e.to_string() })?;
    let mut out = String::new();
    match &v {
        Value::Object(map) => {
            let w = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, x) in map {
                out.push_str(&format!("{k:<w$}  {}\n", cell(x)));
            }
        }
        other => {
            out.push_str(&cell(other));
            out.push('\n');
        }
    }
    Ok(out)
}

/// Left-aligned columns under a header row.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, c) in row.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let n = cells.len();
        let mut s = String::new();
        for (i, c) in cells.into_iter().enumerate() {
            if i + 1 == n {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  ", w = widths[i]));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
