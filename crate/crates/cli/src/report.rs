use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tol: f64,
}

/// Everything a command emits. `body` replaces the flattened results in
/// text mode and is left out of structured output.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_passed: Option<bool>,
    #[serde(skip)]
    pub body: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64, tol: f64) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            seed,
            tolerances: Tolerances { tol },
            results: Value::Null,
            check_passed: None,
            body: None,
        }
    }

    pub fn results<S: Serialize>(mut self, value: &S) -> Self {
        self.results = serde_json::to_value(value).expect("reports serialize");
        self
    }

    pub fn check(mut self, passed: bool) -> Self {
        self.check_passed = Some(passed);
        self
    }

    pub fn body(mut self, text: String) -> Self {
        self.body = Some(text);
        self
    }

    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn text(&self, elapsed: Duration) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        for input in &self.inputs {
            let _ = writeln!(out, "# input: {} sha256={}", input.path, input.sha256);
        }
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# tol: {:e}", self.tolerances.tol);
        if let Some(passed) = self.check_passed {
            let _ = writeln!(out, "# check: {}", if passed { "passed" } else { "FAILED" });
        }
        let _ = writeln!(out, "# elapsed: {:.3} s", elapsed.as_secs_f64());
        match &self.body {
            Some(body) => out.push_str(body),
            None => flatten("", &self.results, &mut out),
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) => {
            let inline: Option<Vec<String>> = items.iter().map(scalar).collect();
            match inline {
                Some(parts) => {
                    let _ = writeln!(out, "{prefix}: [{}]", parts.join(", "));
                }
                None => {
                    for (i, child) in items.iter().enumerate() {
                        flatten(&key(&i.to_string()), child, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", scalar(other).expect("scalar"));
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattens_nested_values() {
        let v = serde_json::json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]});
        let mut out = String::new();
        flatten("", &v, &mut out);
        assert_eq!(out, "a: 1\nb.c: [1, 2]\nd.0.e: true\n");
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
