//! Rendering of reports as CSV (scans) or JSON (records), each headed by an
//! echo of the effective configuration.

use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Debug, Clone)]
pub enum Body {
    Table(Vec<Value>),
    Record(Value),
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    /// Effective settings and subcommand parameters.
    pub config: Value,
    pub body: Body,
    pub pass: bool,
    /// Wall-clock data, kept apart so the rest stays reproducible.
    pub timing: Option<Value>,
    /// False when a runtime limit was exceeded; affects only the exit code.
    pub runtime_ok: bool,
}

impl Report {
    pub fn default_format(&self) -> Format {
        match self.body {
            Body::Table(_) => Format::Csv,
            Body::Record(_) => Format::Json,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        top.insert("config".into(), self.config.clone());
        top.insert("pass".into(), Value::from(self.pass));
        let result = match &self.body {
            Body::Table(rows) => Value::Array(rows.clone()),
            Body::Record(r) => r.clone(),
        };
        top.insert("result".into(), result);
        if let Some(t) = &self.timing {
            top.insert("timing".into(), t.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
        s.push('\n');
        s
    }

    fn to_csv(&self) -> String {
        let mut out = format!("# command={}\n", self.command);
        let mut echo = Vec::new();
        flatten("", &self.config, &mut echo);
        for (k, v) in echo {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&format!("# pass={}\n", self.pass));
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.body {
            Body::Table(rows) => {
                if let Some(Value::Object(first)) = rows.first() {
                    w.write_record(first.keys()).expect("in-memory write");
                }
                for row in rows {
                    if let Value::Object(map) = row {
                        w.write_record(map.values().map(cell)).expect("in-memory write");
                    }
                }
            }
            Body::Record(r) => {
                w.write_record(["key", "value"]).expect("in-memory write");
                let mut fields = Vec::new();
                flatten("", r, &mut fields);
                for (k, v) in fields {
                    w.write_record([k, v]).expect("in-memory write");
                }
            }
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 cells"));
        if let Some(t) = &self.timing {
            let mut fields = Vec::new();
            flatten("timing", t, &mut fields);
            for (k, v) in fields {
                out.push_str(&format!("# {k}={v}\n"));
            }
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), child, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn report(body: Body) -> Report {
        Report {
            command: "demo",
            config: json!({"seed": 1, "params": {"g": 0.5}}),
            body,
            pass: true,
            timing: None,
            runtime_ok: true,
        }
    }

    #[test]
    fn csv_has_echo_header_and_rows() {
        let r = report(Body::Table(vec![json!({"x": 1.5, "note": "a, b"}), json!({"x": 2.0, "note": null})]));
        let s = r.render(Format::Csv);
        let expected = "# command=demo\n# seed=1\n# params.g=0.5\n# pass=true\nx,note\n1.5,\"a, b\"\n2.0,\n";
        assert_eq!(s, expected);
    }

    #[test]
    fn record_csv_is_key_value() {
        let r = report(Body::Record(json!({"a": {"b": 2}, "c": [1, 2]})));
        let s = r.render(Format::Csv);
        assert!(s.ends_with("key,value\na.b,2\nc,\"[1,2]\"\n"), "{s}");
    }

    #[test]
    fn json_keeps_timing_last() {
        let mut r = report(Body::Record(json!({"v": 1})));
        r.timing = Some(json!({"wall_seconds": 0.1}));
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["command", "config", "pass", "result", "timing"]);
    }
}
