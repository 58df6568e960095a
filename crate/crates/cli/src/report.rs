use std::time::Instant;

use serde_json::{json, Map, Value};

/// Output of one verb. `ok == false` maps to exit status 1.
pub struct Report {
    pub verb: &'static str,
    pub inputs: Vec<String>,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub lines: Vec<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(verb: &'static str, inputs: Vec<String>) -> Self {
        Report { verb, inputs, result: Value::Null, witnesses: Vec::new(), lines: Vec::new(), ok: true }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn render_text(&self, started: Option<Instant>) -> String {
        let mut out = self.lines.join("\n");
        if let Some(t) = started {
            out.push_str(&format!("\ntime: {} ms", t.elapsed().as_millis()));
        }
        out
    }

    pub fn render_json(&self, started: Option<Instant>) -> String {
        let mut timings = Map::new();
        if let Some(t) = started {
            timings.insert("total_ms".into(), json!(t.elapsed().as_millis() as u64));
        }
        let v = json!({
            "verb": self.verb,
            "inputs": self.inputs,
            "result": self.result,
            "witnesses": self.witnesses,
            "timings": Value::Object(timings),
        });
        serde_json::to_string_pretty(&v).expect("serializable")
    }
}

/// `Z²` style superscripts for degrees.
pub fn sup(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}
