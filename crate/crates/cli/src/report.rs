use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 over the command's inputs, hex encoded.
    pub inputs_digest: String,
    pub results: Value,
    pub timing_ms: f64,
}

/// Incremental digest over length-prefixed input chunks, so that
/// concatenation boundaries cannot collide.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut d = InputDigest(Sha256::new());
        d.add(command.as_bytes());
        d
    }

    pub fn add(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Output(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => to_csv(report),
    }
}

/// One header row and one value row. Nested objects flatten to dotted
/// keys; arrays of scalars become `key_1 … key_n`; anything deeper is
/// embedded as JSON text.
fn to_csv(report: &Report) -> Result<String, CliError> {
    let mut cells: Vec<(String, String)> = vec![
        ("command".into(), report.command.clone()),
        ("inputs_digest".into(), report.inputs_digest.clone()),
        ("timing_ms".into(), report.timing_ms.to_string()),
    ];
    flatten("", &report.results, &mut cells);
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(cells.iter().map(|(k, _)| k)).map_err(to_err)?;
    w.write_record(cells.iter().map(|(_, v)| v)).map_err(to_err)?;
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&join(k), inner, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
            for (i, x) in items.iter().enumerate() {
                out.push((format!("{prefix}_{}", i + 1), scalar(x).unwrap_or_default()));
            }
        }
        other => out.push((
            prefix.to_string(),
            scalar(other).unwrap_or_else(|| other.to_string()),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report {
            command: "eval-quantum".into(),
            inputs_digest: InputDigest::new("eval-quantum").finish(),
            results: json!({"I": [1.5, 2.0], "s_net": 3.0, "tolerances": {"tol": 1e-9},
                            "classes": [[1, -1], [1, 1]]}),
            timing_ms: 0.0,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = render(&r, Format::Json).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }

    #[test]
    fn csv_flattens_vectors() {
        let text = render(&sample(), Format::Csv).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.contains("I_1,I_2"));
        assert!(header.contains("tolerances.tol"));
        assert!(header.contains("classes"));
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn digest_separates_chunks() {
        let mut a = InputDigest::new("x");
        a.add(b"ab");
        a.add(b"c");
        let mut b = InputDigest::new("x");
        b.add(b"a");
        b.add(b"bc");
        assert_ne!(a.finish(), b.finish());
    }
}
