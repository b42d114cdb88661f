//! Deterministic report records: ordered `key: value` text lines and a
//! single-line JSON rendering of the same data.

use std::fmt;

/// One report value; floats are rendered with a fixed precision so that
/// identical runs produce identical bytes.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Str(String),
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    IntList(Vec<i64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Str(s) => write!(f, "{s}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::UInt(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{}", fmt_float(*v)),
            Value::Bool(v) => write!(f, "{v}"),
            Value::IntList(vs) => {
                let cells: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "{}", cells.join(","))
            }
        }
    }
}

pub fn fmt_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.6e}")
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl Value {
    fn to_json(&self) -> String {
        match self {
            Value::Str(s) => format!("\"{}\"", json_escape(s)),
            Value::Int(v) => v.to_string(),
            Value::UInt(v) => v.to_string(),
            Value::Float(v) => format!("\"{}\"", fmt_float(*v)),
            Value::Bool(v) => v.to_string(),
            Value::IntList(vs) => {
                let cells: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                format!("[{}]", cells.join(","))
            }
        }
    }
}

/// An insertion-ordered report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: Value) {
        self.entries.push((key.to_string(), value));
    }

    pub fn str(&mut self, key: &str, value: impl Into<String>) {
        self.push(key, Value::Str(value.into()));
    }

    pub fn int(&mut self, key: &str, value: i64) {
        self.push(key, Value::Int(value));
    }

    pub fn uint(&mut self, key: &str, value: u64) {
        self.push(key, Value::UInt(value));
    }

    pub fn float(&mut self, key: &str, value: f64) {
        self.push(key, Value::Float(value));
    }

    pub fn bool(&mut self, key: &str, value: bool) {
        self.push(key, Value::Bool(value));
    }

    pub fn int_list(&mut self, key: &str, value: Vec<i64>) {
        self.push(key, Value::IntList(value));
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries
            .iter()
            .find_map(|(k, v)| (k == key).then_some(v))
    }

    /// `key: value` lines, LF-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    /// Single-line JSON object, keys in insertion order.
    pub fn to_json(&self) -> String {
        let cells: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| format!("\"{}\":{}", json_escape(k), v.to_json()))
            .collect();
        format!("{{{}}}\n", cells.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree_on_order() {
        let mut r = Report::new();
        r.str("name", "x0");
        r.int("chi", 2);
        r.int_list("betti", vec![1, 0, 2, 0, 1]);
        r.float("residual", 1.25e-9);
        assert_eq!(
            r.to_text(),
            "name: x0\nchi: 2\nbetti: 1,0,2,0,1\nresidual: 1.250000e-9\n"
        );
        let json = r.to_json();
        assert!(json.starts_with("{\"name\":\"x0\",\"chi\":2,"));
        assert!(json.ends_with("}\n"));
    }
}
