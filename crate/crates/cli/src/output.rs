//! Emitters for the four output formats. Every command builds one `Doc`;
//! the formats differ only in layout.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
    Latex,
}

/// Rows of named fields. A single-record doc renders as one JSON object,
/// otherwise as an array. `json` overrides the JSON rendering when the
/// normative schema nests differently from the flat rows.
#[derive(Clone, Debug, Default)]
pub struct Doc {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub single: bool,
    pub json: Option<Value>,
}

impl Doc {
    pub fn record(fields: Vec<(&str, Value)>) -> Self {
        let (columns, row): (Vec<String>, Vec<Value>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self {
            columns,
            rows: vec![row],
            single: true,
            json: None,
        }
    }

    pub fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            single: false,
            json: None,
        }
    }

    pub fn with_json(mut self, json: Value) -> Self {
        self.json = Some(json);
        self
    }

    pub fn to_json(&self) -> Value {
        if let Some(j) = &self.json {
            return j.clone();
        }
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().cloned()).collect();
                Value::Object(map)
            })
            .collect();
        if self.single {
            objects.into_iter().next().unwrap_or(Value::Null)
        } else {
            Value::Array(objects)
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Latex => self.latex(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if self.single {
            let row = self.rows.first().cloned().unwrap_or_default();
            let width = self.columns.iter().map(String::len).max().unwrap_or(0);
            for (k, v) in self.columns.iter().zip(&row) {
                let _ = writeln!(out, "{}", format!("{k:width$}  {}", plain(v)).trim_end());
            }
            return out;
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(plain).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| cells.iter().map(|r| r[c].len()).chain([self.columns[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &[String]| -> String {
            let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:w$}")).collect();
            parts.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&self.columns));
        for r in &cells {
            let _ = writeln!(out, "{}", line(r));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let esc = |s: String| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        };
        let _ = writeln!(out, "{}", self.columns.iter().cloned().map(esc).collect::<Vec<_>>().join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.iter().map(|v| esc(plain(v))).collect::<Vec<_>>().join(","));
        }
        out
    }

    fn latex(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\begin{{tabular}}{{{}}}", "l".repeat(self.columns.len()));
        let header: Vec<String> = self.columns.iter().map(|c| latex_text(c)).collect();
        let _ = writeln!(out, "{} \\\\", header.join(" & "));
        let _ = writeln!(out, "\\hline");
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(latex_cell).collect();
            let _ = writeln!(out, "{} \\\\", cells.join(" & "));
        }
        let _ = writeln!(out, "\\end{{tabular}}");
        out
    }
}

/// Strings bare, everything else as compact JSON.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn latex_text(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '_' | '&' | '%' | '$' | '#' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '\\' => out.push_str("\\textbackslash{}"),
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(c),
        }
    }
    out
}

/// Polynomials such as `v^-1 + 2v^3` become `$v^{-1} + 2v^{3}$`.
fn latex_poly(s: &str) -> String {
    let mut out = String::from("$");
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '^' {
            let mut exp = String::new();
            if chars.peek() == Some(&'-') {
                exp.push(chars.next().unwrap());
            }
            while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                exp.push(d);
                chars.next();
            }
            let _ = write!(out, "^{{{exp}}}");
        } else {
            out.push(c);
        }
    }
    out.push('$');
    out
}

fn latex_cell(v: &Value) -> String {
    match v {
        Value::String(s) if looks_like_poly(s) => latex_poly(s),
        Value::String(s) => latex_text(s),
        other => latex_text(&other.to_string()),
    }
}

fn looks_like_poly(s: &str) -> bool {
    !s.is_empty()
        && s.chars().any(|c| c == 'v' || c == 'q')
        && s.chars().all(|c| c.is_ascii_digit() || " +-^vq".contains(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Doc {
        Doc::record(vec![("y", json!("")), ("P", json!("1 + q")), ("n", json!(2))])
    }

    #[test]
    fn formats() {
        let d = sample();
        assert_eq!(d.render(Format::Text), "y\nP  1 + q\nn  2\n");
        assert_eq!(d.to_json(), json!({"y": "", "P": "1 + q", "n": 2}));
        assert_eq!(d.render(Format::Csv), "y,P,n\n,1 + q,2\n");
        let tex = d.render(Format::Latex);
        assert!(tex.contains("$1 + q$"));
        assert!(tex.starts_with("\\begin{tabular}{lll}"));
    }

    #[test]
    fn tables() {
        let d = Doc::table(&["x", "h"], vec![vec![json!("12"), json!("v^-1 + v")], vec![json!("1,2"), json!("v")]]);
        assert_eq!(d.to_json(), json!([{"x": "12", "h": "v^-1 + v"}, {"x": "1,2", "h": "v"}]));
        assert_eq!(d.render(Format::Csv), "x,h\n12,v^-1 + v\n\"1,2\",v\n");
        assert!(d.render(Format::Latex).contains("$v^{-1} + v$"));
        assert_eq!(d.render(Format::Text), "x    h\n12   v^-1 + v\n1,2  v\n");
    }

    #[test]
    fn latex_escapes() {
        assert_eq!(latex_text("a_b&c"), "a\\_b\\&c");
        assert!(!looks_like_poly("A2"));
        assert!(looks_like_poly("2v^3"));
    }
}
