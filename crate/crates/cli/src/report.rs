//! Reports: a header, JSON-lines rows, and a verdict summary.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use sumprod_core::report::{Fragment, Verdict};

use crate::config::ExperimentConfig;

pub const ARTIFACT: &str = "sumprod";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Header,
    pub rows: Vec<Value>,
    pub verdicts: Vec<Verdict>,
    /// Present for tabular commands; written when a CSV path is configured.
    pub csv: Option<String>,
}

impl Report {
    pub fn new(config: &ExperimentConfig) -> Self {
        Report {
            header: Header {
                artifact: ARTIFACT,
                version: VERSION,
                command: config.command.name(),
                seed: config.seed,
                config: config.clone(),
            },
            rows: Vec::new(),
            verdicts: Vec::new(),
            csv: None,
        }
    }

    /// Adds a row tagged with `kind`; `data` must serialize to an object.
    pub fn row(&mut self, kind: &str, data: impl Serialize) {
        let mut v = serde_json::to_value(data).expect("row serializes");
        match v.as_object_mut() {
            Some(obj) => {
                obj.insert("row".into(), Value::String(kind.into()));
            }
            None => v = json!({ "row": kind, "value": v }),
        }
        self.rows.push(v);
    }

    pub fn fragment(&mut self, kind: &str, f: &Fragment) {
        self.row(kind, f);
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn check(&mut self, id: &str, pass: bool, witness: impl Into<String>) {
        self.verdicts.push(Verdict::new(id, pass, witness));
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let line = |w: &mut W, v: &Value| -> std::io::Result<()> {
            serde_json::to_writer(&mut *w, v)?;
            w.write_all(b"\n")
        };
        line(&mut w, &json!({ "header": self.header }))?;
        for r in &self.rows {
            line(&mut w, r)?;
        }
        let failed = self.verdicts.iter().filter(|v| !v.pass).count();
        line(
            &mut w,
            &json!({ "summary": {
                "rows": self.rows.len(),
                "verdicts": self.verdicts,
                "failed": failed,
                "pass": failed == 0,
            }}),
        )
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}

/// Serializes `rows` as CSV with a header taken from the field names.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CommandId;

    #[test]
    fn layout() {
        let mut r = Report::new(&ExperimentConfig::new(CommandId::Sets));
        r.row("size", json!({ "name": "|A|", "value": 3 }));
        r.row("scalar", 5);
        r.check("sets.x", true, "");
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with(r#"{"header":{"artifact":"sumprod""#));
        assert_eq!(lines[1], r#"{"name":"|A|","row":"size","value":3}"#);
        assert_eq!(lines[2], r#"{"row":"scalar","value":5}"#);
        assert!(lines[3].contains(r#""pass":true"#));
        assert!(r.pass());
        r.check("sets.y", false, "w");
        assert!(!r.pass());
    }

    #[test]
    fn csv_header() {
        #[derive(Serialize)]
        struct Row {
            p: u64,
            ok: bool,
        }
        let text = to_csv(&[Row { p: 3, ok: true }, Row { p: 5, ok: false }]).unwrap();
        assert_eq!(text, "p,ok\n3,true\n5,false\n");
    }
}
