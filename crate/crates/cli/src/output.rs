//! Deterministic rendering of CLI outputs.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::{Map, Value};

/// Rounds to 6 decimal places for JSON output.
pub fn round6(x: f64) -> Value {
    let r = (x * 1e6).round() / 1e6;
    // -0.0 would print as "-0.0"
    Value::from(if r == 0.0 { 0.0 } else { r })
}

/// Pretty JSON with keys in sorted order, newline-terminated.
pub fn json(map: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes to `path` atomically, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => spreadrank_core::experiment::write_atomic(p, body.as_bytes()).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// CSV field, quoted when needed.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
