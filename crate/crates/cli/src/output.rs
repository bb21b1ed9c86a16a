use serde_json::{Map, Value};
use std::io::Write;

/// An ordered set of fields, printed as `k=v k=v`.
#[derive(Default)]
pub struct Record(Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn field(mut self, key: &str, value: impl serde::Serialize) -> Self {
        self.0.push((key.to_string(), serde_json::to_value(value).expect("plain values serialize")));
        self
    }

    pub fn to_line(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect::<Vec<_>>().join(" ")
    }

    fn to_json(&self) -> Map<String, Value> {
        self.0.iter().cloned().collect()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// A head record plus named groups of detail records. Text mode prints the
/// head line, then one line per detail record; JSON mode nests each group as
/// an array under its name.
#[derive(Default)]
pub struct Output {
    head: Option<Record>,
    groups: Vec<(String, Vec<Record>)>,
}

impl Output {
    pub fn new(head: Record) -> Self {
        Output { head: Some(head), groups: Vec::new() }
    }

    pub fn empty() -> Self {
        Output::default()
    }

    pub fn push(&mut self, group: &str, record: Record) {
        match self.groups.iter_mut().find(|(g, _)| g == group) {
            Some((_, records)) => records.push(record),
            None => self.groups.push((group.to_string(), vec![record])),
        }
    }

    pub fn to_lines(&self) -> String {
        let mut lines = Vec::new();
        lines.extend(self.head.iter().map(Record::to_line));
        for (_, records) in &self.groups {
            lines.extend(records.iter().map(Record::to_line));
        }
        lines.join("\n")
    }

    /// Writes to stdout. A closed pipe (`| head`) is not an error.
    pub fn print(&self, json: bool) {
        if self.head.is_none() && self.groups.is_empty() {
            return;
        }
        let text = if json {
            let mut obj = self.head.as_ref().map(Record::to_json).unwrap_or_default();
            for (name, records) in &self.groups {
                obj.insert(name.clone(), Value::Array(records.iter().map(|r| Value::Object(r.to_json())).collect()));
            }
            Value::Object(obj).to_string()
        } else {
            self.to_lines()
        };
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
}
