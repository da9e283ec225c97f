use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Ordered `key: value` lines; `--json` prints the same keys as one object.
#[derive(Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.put("command", command);
        r
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.fields.push((key.into(), value.into()));
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.fields.iter().cloned().collect();
            return Value::Object(map).to_string() + "\n";
        }
        let mut s = String::new();
        for (k, v) in &self.fields {
            let v = match v {
                Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            s.push_str(&format!("{k}: {v}\n"));
        }
        s
    }
}

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
