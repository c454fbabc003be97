//! Deterministic CSV/JSON emission. Every artifact starts with a comment
//! header carrying the config hash, the seed and the quadrature metadata, so
//! reruns with the same run configuration are byte-identical and
//! self-describing. No timestamps, ever.

use std::io::Write;
use std::path::Path;

/// FNV-1a, 64-bit.
pub fn fnv1a(data: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &byte in data {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// RFC-4180 field quoting: quote when the field contains a comma, a quote
/// or a line break; double embedded quotes.
pub fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') || value.contains('\r') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

pub struct Table {
    pub header_comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            header_comments: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.header_comments.push(line.into());
    }

    pub fn standard_comments(&mut self, config_json: &str, seed: u64, quadrature: &str) {
        self.comment(format!("config_hash={:016x}", fnv1a(config_json.as_bytes())));
        self.comment(format!("seed={seed}"));
        self.comment(format!("quadrature={quadrature}"));
        self.comment(format!("tool=dunklkit {}", env!("CARGO_PKG_VERSION")));
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.header_comments {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(
            &self
                .columns
                .iter()
                .map(|c| csv_field(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut objects = Vec::new();
        for row in &self.rows {
            let mut map = serde_json::Map::new();
            for (column, value) in self.columns.iter().zip(row) {
                // numbers stay numbers where they parse
                let json_value = value
                    .parse::<f64>()
                    .ok()
                    .and_then(serde_json::Number::from_f64)
                    .map(serde_json::Value::Number)
                    .unwrap_or_else(|| serde_json::Value::String(value.clone()));
                map.insert(column.clone(), json_value);
            }
            objects.push(serde_json::Value::Object(map));
        }
        let meta: serde_json::Value = serde_json::json!({
            "comments": self.header_comments,
            "rows": objects,
        });
        serde_json::to_string_pretty(&meta).expect("serialization cannot fail")
    }

    /// Write to the path (or stdout when none) in the requested format.
    pub fn emit(&self, out: Option<&Path>, format: &str) -> std::io::Result<()> {
        let body = match format {
            "json" => self.to_json(),
            _ => self.to_csv(),
        };
        match out {
            Some(path) => std::fs::write(path, body),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(body.as_bytes())
            }
        }
    }
}

/// Render a float with Rust's shortest round-trip formatting; tiny
/// magnitudes switch to scientific notation for readability. Both branches
/// are deterministic.
pub fn fmt_f64(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}
