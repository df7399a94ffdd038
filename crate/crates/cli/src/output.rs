//! CSV text with a fixed header and shortest round-trip floats.

use std::fmt::Write as _;
use std::path::Path;

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    header: &'static str,
    rows: Vec<String>,
}

impl Table {
    pub fn new(header: &'static str) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, fields: &[String]) {
        self.rows.push(fields.join(","));
    }

    pub fn header(&self) -> &str {
        self.header
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        let _ = writeln!(s, "{}", self.header);
        for r in &self.rows {
            let _ = writeln!(s, "{r}");
        }
        s
    }

    /// Writes to `path`, or to stdout when `None`.
    pub fn emit(&self, path: Option<&Path>) -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, self.render()),
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                out.write_all(self.render().as_bytes())?;
                out.flush()
            }
        }
    }
}
